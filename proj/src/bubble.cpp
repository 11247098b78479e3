#include "bubblelab/bubble.hpp"

#include <cmath>
#include <sstream>

#include "bubblelab/errors.hpp"
#include "bubblelab/numerics.hpp"
#include "bubblelab/stability.hpp"

namespace bubblelab {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Newton-polishes s so that phi(s) = target exactly (first-integral node).
double polish_node(const WarpedGeometry& g, double s, double target, double s1) {
    for (int it = 0; it < 3; ++it) {
        const double r = g.phi(s) - target;
        const double d = g.phi_s(s);
        if (d <= 0.0) break;
        const double step = r / d;
        s -= step;
        if (s < 0.0) s = 0.0;
        if (s > s1) s = s1;
        if (std::abs(step) < 1e-16 * std::max(1.0, s)) break;
    }
    return s;
}
}  // namespace

BubbleProfile solve_profile(const WarpedGeometry& g, double s1, int n_nodes) {
    if (!g.s0())
        throw InvalidInputError(
            "solve_profile: the profile has no first local maximum s0; the bubble family "
            "requires one");
    const double s0 = *g.s0();
    if (!(s1 > 0.0))
        throw InvalidInputError("solve_profile: s1 must be positive");
    // s0 is located to ~1e-12; anything inside that band is "at s0"
    if (s1 >= s0 * (1.0 - 1e-11)) {
        std::ostringstream msg;
        msg << "solve_profile: s1 = " << s1 << " >= s0 = " << s0
            << "; the height integral diverges (at least logarithmically) as s -> s0, so the "
               "s1 = s0 profile is unbounded and only s1 < s0 yields a closed bubble";
        throw InvalidInputError(msg.str());
    }
    if (n_nodes < 64) throw InvalidInputError("solve_profile: n_nodes must be >= 64");
    if (n_nodes % 2 != 0) ++n_nodes;  // Simpson wants an even cell count

    BubbleProfile bp;
    bp.s1 = s1;
    const double R = g.phi(s1);
    const double H = 1.0 / R;
    bp.H = H;

    const int N = n_nodes;
    bp.alpha.resize(static_cast<std::size_t>(N) + 1);
    bp.s.resize(static_cast<std::size_t>(N) + 1);
    bp.u.resize(static_cast<std::size_t>(N) + 1);
    bp.t.resize(static_cast<std::size_t>(N) + 1);
    for (int j = 0; j <= N; ++j) bp.alpha[static_cast<std::size_t>(j)] = (kPi / 2) * j / N;

    auto rhs = [&g, H, s0](double a, const double* y, double* dy) {
        const double s = y[0];
        const double ps = g.phi_s(s);
        if (!(ps > 0.0) || s >= s0)
            throw NumericalFailureError(
                "solve_profile: phi_s <= 0 encountered before alpha = pi/2");
        const double inv = 1.0 / (H * ps);
        dy[0] = std::cos(a) * inv;
        dy[1] = -std::sin(a) * inv;
        dy[2] = inv;
    };

    std::vector<double> y = {0.0, 0.0, 0.0};
    num::integrate_rk45(
        rhs, 3, y, bp.alpha,
        [&bp](int j, const double* state) {
            bp.s[static_cast<std::size_t>(j)] = state[0];
            bp.u[static_cast<std::size_t>(j)] = state[1];
            bp.t[static_cast<std::size_t>(j)] = state[2];
        },
        1e-13, 1e-14);

    // enforce the first integral sin(alpha) = H phi(s) at nodes
    for (int j = 1; j < N; ++j) {
        const double target = R * std::sin(bp.alpha[static_cast<std::size_t>(j)]);
        bp.s[static_cast<std::size_t>(j)] =
            polish_node(g, bp.s[static_cast<std::size_t>(j)], target, s1);
    }
    bp.s[0] = 0.0;
    bp.s[static_cast<std::size_t>(N)] = s1;

    const double shift = bp.u[static_cast<std::size_t>(N)];
    for (auto& v : bp.u) v -= shift;
    bp.u[static_cast<std::size_t>(N)] = 0.0;
    bp.u_max = bp.u[0];

    bp.V = enclosed_volume(bp, g);
    bp.A_lat = lateral_area(bp, g);
    bp.x0_measure = 4.0 * kPi * g.c() * g.F(s1);
    return bp;
}

double mean_curvature_residual(const BubbleProfile& bp, const WarpedGeometry& g) {
    const int N = bp.node_count() - 1;
    const double da = bp.alpha[1] - bp.alpha[0];
    const double H = bp.H;
    double worst = 0.0;
    for (int j = 1; j <= N - 3; ++j) {
        const std::size_t i = static_cast<std::size_t>(j);
        const double sd = (bp.s[i + 1] - bp.s[i - 1]) / (2 * da);
        const double ud = (bp.u[i + 1] - bp.u[i - 1]) / (2 * da);
        const double sdd = (bp.s[i + 1] - 2 * bp.s[i] + bp.s[i - 1]) / (da * da);
        const double udd = (bp.u[i + 1] - 2 * bp.u[i] + bp.u[i - 1]) / (da * da);
        const double den = sd * sd + ud * ud;
        const double curv = (ud * sdd - udd * sd) / (den * std::sqrt(den));
        const double slope = -ud / std::sqrt(den);
        const double fsf = g.f_s(bp.s[i]) / g.f(bp.s[i]);
        const double Hfd = curv + fsf * slope;
        worst = std::max(worst, std::abs(Hfd - H));
    }
    return worst;
}

double enclosed_volume(const BubbleProfile& bp, const WarpedGeometry& g) {
    const int N = bp.node_count() - 1;
    const double da = bp.alpha[1] - bp.alpha[0];
    std::vector<double> integrand(static_cast<std::size_t>(N) + 1);
    for (int j = 0; j <= N; ++j) {
        const std::size_t i = static_cast<std::size_t>(j);
        const double ps = g.phi_s(bp.s[i]);
        // ds/dalpha = cos(alpha)/(H phi_s)
        integrand[i] = g.f(bp.s[i]) * bp.u[i] * std::cos(bp.alpha[i]) / (bp.H * ps);
    }
    return 8.0 * kPi * g.c() * num::simpson_from_samples(integrand, da);
}

double lateral_area(const BubbleProfile& bp, const WarpedGeometry& g) {
    const int N = bp.node_count() - 1;
    const double da = bp.alpha[1] - bp.alpha[0];
    std::vector<double> integrand(static_cast<std::size_t>(N) + 1);
    for (int j = 0; j <= N; ++j) {
        const std::size_t i = static_cast<std::size_t>(j);
        integrand[i] = g.f(bp.s[i]) / (bp.H * g.phi_s(bp.s[i]));
    }
    return 8.0 * kPi * g.c() * num::simpson_from_samples(integrand, da);
}

double volume_to_s1(const WarpedGeometry& g, double v, int n_nodes) {
    if (!(v > 0.0)) throw InvalidInputError("volume_to_s1: v must be positive");
    if (!g.s0()) throw InvalidInputError("volume_to_s1: profile has no s0");
    const double s0 = *g.s0();
    double lo = s0 * 1e-8, hi = s0 * (1.0 - 1e-9);
    auto vol = [&](double s1) { return solve_profile(g, s1, n_nodes).V; };
    if (vol(hi) < v) return hi;  // beyond resolvable range; V diverges at s0
    if (vol(lo) > v) return lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (vol(mid) < v)
            lo = mid;
        else
            hi = mid;
        if ((hi - lo) <= 1e-8 * hi) break;
    }
    return 0.5 * (lo + hi);
}

std::vector<SweepRow> family_sweep(const WarpedGeometry& g, const std::vector<double>& s1_list,
                                   int n_nodes) {
    std::vector<SweepRow> rows(s1_list.size());
    const double b = beta(g);
    num::parallel_for(static_cast<int>(s1_list.size()), [&](int i) {
        const std::size_t k = static_cast<std::size_t>(i);
        rows[k].s1 = s1_list[k];
        try {
            const BubbleProfile bp = solve_profile(g, s1_list[k], n_nodes);
            rows[k].ok = true;
            rows[k].H = bp.H;
            rows[k].V = bp.V;
            rows[k].A_lat = bp.A_lat;
            rows[k].u_max = bp.u_max;
            rows[k].beta_margin = g.phi(s1_list[k]) / g.c() - b;
        } catch (const Error& e) {
            rows[k].ok = false;
            rows[k].error = e.what();
        }
    });
    return rows;
}

}  // namespace bubblelab
