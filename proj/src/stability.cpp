#include "bubblelab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "bubblelab/errors.hpp"
#include "bubblelab/numerics.hpp"

namespace bubblelab {

namespace {
constexpr double kPi = 3.14159265358979323846;

double beta_integrand(const WarpedGeometry& g, double s, BetaMode mode, double s1_frozen) {
    const double f = g.f(s);
    const double ps = (mode == BetaMode::phi_s) ? g.phi_s(s) : g.phi_s(s1_frozen);
    return f * f * std::abs(-g.phi(s) * g.phi_ss(s) - ps);
}
}  // namespace

IndexCoefficients index_coefficients(const BubbleProfile& bp, const WarpedGeometry& g) {
    const int n = bp.node_count();
    IndexCoefficients out;
    out.A.resize(static_cast<std::size_t>(n));
    out.B.resize(static_cast<std::size_t>(n));
    out.P.resize(static_cast<std::size_t>(n));
    out.II2.resize(static_cast<std::size_t>(n));
    const double R = g.phi(bp.s1);
    const double H = bp.H;
    const double c = g.c();
    for (int j = 0; j < n; ++j) {
        const std::size_t i = static_cast<std::size_t>(j);
        const double s = bp.s[i];
        const double f = g.f(s);
        const double ps = g.phi_s(s);
        const double root = R * std::cos(bp.alpha[i]);  // sqrt(R^2 - phi^2), cancellation-free
        const double num = -g.phi(s) * g.phi_ss(s) - ps;
        out.A[i] = H * c * f * root;
        out.B[i] = H * c * f * num / root;
        out.P[i] = H * H * num;
        out.II2[i] = H * H * (ps * ps + (ps - 1.0) * (ps - 1.0));
    }
    return out;
}

double beta_on_interval(const WarpedGeometry& g, double a, double b, BetaMode mode,
                        double s1_frozen) {
    constexpr int kGrid = 10000;
    double best = -1.0, best_s = a;
    for (int i = 0; i <= kGrid; ++i) {
        const double s = a + (b - a) * i / kGrid;
        const double v = beta_integrand(g, s, mode, s1_frozen);
        if (v > best) {
            best = v;
            best_s = s;
        }
    }
    const double h = (b - a) / kGrid;
    const double lo = std::max(a, best_s - h), hi = std::min(b, best_s + h);
    const double s_ref = num::golden_max(
        [&](double s) { return beta_integrand(g, s, mode, s1_frozen); }, lo, hi, 1e-13);
    best = std::max(best, beta_integrand(g, s_ref, mode, s1_frozen));
    return std::sqrt(best);
}

double beta(const WarpedGeometry& g, BetaMode mode, double s1_frozen) {
    if (!g.s0()) throw InvalidInputError("beta: profile has no s0");
    return beta_on_interval(g, 0.0, *g.s0(), mode, s1_frozen);
}

SectorOperator build_sector_operator(const BubbleProfile& bp, const WarpedGeometry& g, int k,
                                     Parity s_parity, Parity y_parity) {
    const int N = bp.node_count() - 1;
    const double c = g.c();
    std::vector<double> w(static_cast<std::size_t>(N) + 1), V(static_cast<std::size_t>(N) + 1);
    for (int j = 0; j <= N; ++j) {
        const std::size_t i = static_cast<std::size_t>(j);
        const double s = bp.s[i];
        const double f = g.f(s);
        const double ps = g.phi_s(s);
        w[i] = c * f;
        V[i] = bp.H * bp.H * (-g.phi(s) * g.phi_ss(s) - ps) +
               static_cast<double>(k) * static_cast<double>(k) / (c * c * f * f);
    }
    std::vector<double> h(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j)
        h[static_cast<std::size_t>(j)] =
            bp.t[static_cast<std::size_t>(j) + 1] - bp.t[static_cast<std::size_t>(j)];

    SectorOperator op;
    const int first = (s_parity == Parity::odd) ? 1 : 0;   // Dirichlet at the s = 0 fold
    const int last = (y_parity == Parity::odd) ? N - 1 : N;  // Dirichlet at alpha = pi/2
    for (int j = first; j <= last; ++j) op.nodes.push_back(j);
    const int n = static_cast<int>(op.nodes.size());
    op.mass.resize(static_cast<std::size_t>(n));
    op.std_form.diag.resize(static_cast<std::size_t>(n));
    op.std_form.off.resize(static_cast<std::size_t>(n) - 1);

    std::vector<double> kdiag(static_cast<std::size_t>(n)), koff(static_cast<std::size_t>(n) - 1);
    for (int r = 0; r < n; ++r) {
        const int j = op.nodes[static_cast<std::size_t>(r)];
        const std::size_t i = static_cast<std::size_t>(j);
        double m = 0.0, d = 0.0;
        if (j > 0) {
            const double wm = 0.5 * (w[i - 1] + w[i]);
            m += 0.5 * h[i - 1];
            d += wm / h[i - 1];
        }
        if (j < N) {
            const double wm = 0.5 * (w[i] + w[i + 1]);
            m += 0.5 * h[i];
            d += wm / h[i];
        }
        op.mass[static_cast<std::size_t>(r)] = w[i] * m;
        kdiag[static_cast<std::size_t>(r)] = d + w[i] * V[i] * m;
        if (r + 1 < n) {
            const double wm = 0.5 * (w[i] + w[i + 1]);
            koff[static_cast<std::size_t>(r)] = -wm / h[i];
        }
    }
    for (int r = 0; r < n; ++r) {
        const std::size_t i = static_cast<std::size_t>(r);
        op.std_form.diag[i] = kdiag[i] / op.mass[i];
        if (r + 1 < n)
            op.std_form.off[i] = koff[i] / std::sqrt(op.mass[i] * op.mass[i + 1]);
    }
    return op;
}

std::vector<SectorSpectrum> jacobi_spectrum(const BubbleProfile& bp, const WarpedGeometry& g,
                                            int k_max, int m) {
    if (k_max < 1) throw InvalidInputError("jacobi_spectrum: k_max must be >= 1");
    struct Job {
        int k;
        Parity sp, yp;
    };
    std::vector<Job> jobs;
    for (int k = 0; k <= k_max; ++k)
        for (const Parity sp : {Parity::even, Parity::odd})
            for (const Parity yp : {Parity::even, Parity::odd}) jobs.push_back({k, sp, yp});
    std::vector<SectorSpectrum> out(jobs.size());
    num::parallel_for(static_cast<int>(jobs.size()), [&](int i) {
        const Job& jb = jobs[static_cast<std::size_t>(i)];
        const SectorOperator op = build_sector_operator(bp, g, jb.k, jb.sp, jb.yp);
        SectorSpectrum spec;
        spec.k = jb.k;
        spec.s_parity = jb.sp;
        spec.y_parity = jb.yp;
        spec.eigenvalues = num::smallest_eigenvalues(op.std_form, m);
        for (const double ev : spec.eigenvalues)
            if (!std::isfinite(ev))
                throw NumericalFailureError("jacobi_spectrum: eigensolver produced non-finite value");
        out[static_cast<std::size_t>(i)] = std::move(spec);
    });
    return out;
}

namespace {
std::vector<double> psi_on_nodes(const BubbleProfile& bp, const WarpedGeometry& g,
                                 const std::vector<int>& nodes) {
    const double R = g.phi(bp.s1);
    std::vector<double> psi(nodes.size());
    for (std::size_t r = 0; r < nodes.size(); ++r)
        psi[r] = R * std::cos(bp.alpha[static_cast<std::size_t>(nodes[r])]);
    return psi;
}
}  // namespace

double jacobi_field_residual(const BubbleProfile& bp, const WarpedGeometry& g) {
    const SectorOperator op = build_sector_operator(bp, g, 0, Parity::even, Parity::odd);
    const std::vector<double> psi = psi_on_nodes(bp, g, op.nodes);
    // residual of the generalized operator: M^{-1} K psi, expressed through the
    // standard form: M^{-1/2} T M^{1/2} psi
    const int n = op.std_form.n();
    std::vector<double> y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        y[static_cast<std::size_t>(i)] = psi[static_cast<std::size_t>(i)] *
                                         std::sqrt(op.mass[static_cast<std::size_t>(i)]);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const std::size_t r = static_cast<std::size_t>(i);
        double acc = op.std_form.diag[r] * y[r];
        if (i > 0) acc += op.std_form.off[r - 1] * y[r - 1];
        if (i + 1 < n) acc += op.std_form.off[r] * y[r + 1];
        worst = std::max(worst, std::abs(acc / std::sqrt(op.mass[r])));
    }
    return worst;
}

double odd_sector_identity_defect(const BubbleProfile& bp, const WarpedGeometry& g) {
    const IndexCoefficients co = index_coefficients(bp, g);
    const int N = bp.node_count() - 1;
    const double da = bp.alpha[1] - bp.alpha[0];
    const double R = g.phi(bp.s1);
    const double c = g.c();
    std::vector<double> Aps(static_cast<std::size_t>(N) + 1);
    for (int j = 0; j <= N; ++j) {
        const std::size_t i = static_cast<std::size_t>(j);
        Aps[i] = co.A[i] * g.phi_s(bp.s[i]);
    }
    double worst = 0.0;
    for (int j = 2; j <= N - 3; ++j) {
        const std::size_t i = static_cast<std::size_t>(j);
        const double d_alpha =
            (-Aps[i + 2] + 8.0 * Aps[i + 1] - 8.0 * Aps[i - 1] + Aps[i - 2]) / (12.0 * da);
        const double ds_dalpha = std::cos(bp.alpha[i]) / (bp.H * g.phi_s(bp.s[i]));
        const double lhs = d_alpha / ds_dalpha;
        const double s = bp.s[i];
        const double f = g.f(s);
        const double root = R * std::cos(bp.alpha[i]);
        const double rhs = co.B[i] * g.phi(s) - (c * f * R / root) * g.phi(s) * g.log_f_ss(s);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

StabilityReport stability_verdict(const BubbleProfile& bp, const WarpedGeometry& g,
                                  const StabilityOptions& opts) {
    StabilityReport rep;
    rep.beta = beta(g);
    rep.ratio = g.phi(bp.s1) / g.c();
    rep.sectors = jacobi_spectrum(bp, g, opts.k_max, opts.m);
    rep.translation_residual = jacobi_field_residual(bp, g);

    double lam_scale = 0.0;
    for (const auto& sec : rep.sectors)
        for (const double ev : sec.eigenvalues) lam_scale = std::max(lam_scale, std::abs(ev));
    rep.tol_abs = opts.tol_rel * lam_scale;

    // (k=0, even, even): lowest eigenvalue on the weighted-zero-mean subspace.
    {
        const SectorOperator op = build_sector_operator(bp, g, 0, Parity::even, Parity::even);
        std::vector<double> q(op.mass.size());
        for (std::size_t i = 0; i < q.size(); ++i) q[i] = std::sqrt(op.mass[i]);
        rep.ee_zero_mean_lowest = num::constrained_smallest_eigenvalue(op.std_form, q);
    }
    // (k=0, even, odd): deflate the translation field direction.
    {
        const SectorOperator op = build_sector_operator(bp, g, 0, Parity::even, Parity::odd);
        const std::vector<double> psi = psi_on_nodes(bp, g, op.nodes);
        std::vector<double> q(op.mass.size());
        for (std::size_t i = 0; i < q.size(); ++i) q[i] = psi[i] * std::sqrt(op.mass[i]);
        rep.eo_deflated_lowest = num::constrained_smallest_eigenvalue(op.std_form, q);

        const std::vector<double> lam = num::smallest_eigenvalues(op.std_form, 1);
        const std::vector<double> vec = num::eigenvector(op.std_form, lam[0]);
        double dot = 0.0, nq = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            dot += vec[i] * q[i];
            nq += q[i] * q[i];
        }
        rep.psi_correlation = std::abs(dot) / std::sqrt(nq);
    }

    double admissible = std::min(rep.ee_zero_mean_lowest, rep.eo_deflated_lowest);
    for (const auto& sec : rep.sectors) {
        const bool excluded = sec.k == 0 && sec.s_parity == Parity::even;
        if (excluded) continue;  // handled via constraint/deflation above
        admissible = std::min(admissible, sec.eigenvalues.front());
    }
    rep.admissible_min = admissible;

    // analytic tail certificate for k > k_max
    double min_p = std::numeric_limits<double>::infinity(), max_f = 0.0;
    for (int j = 0; j < bp.node_count(); ++j) {
        const double s = bp.s[static_cast<std::size_t>(j)];
        min_p = std::min(min_p, bp.H * bp.H * (-g.phi(s) * g.phi_ss(s) - g.phi_s(s)));
        max_f = std::max(max_f, g.f(s));
    }
    const double kk = static_cast<double>(opts.k_max + 1);
    rep.tail_certified = min_p + kk * kk / (g.c() * g.c() * max_f * max_f) > 0.0;

    if (admissible < -rep.tol_abs)
        rep.verdict = Verdict::unstable;
    else if (admissible > rep.tol_abs && rep.tail_certified)
        rep.verdict = Verdict::stable;
    else
        rep.verdict = Verdict::marginal;
    return rep;
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::stable:
            return "stable";
        case Verdict::unstable:
            return "unstable";
        default:
            return "marginal";
    }
}

std::string stability_report_json(const StabilityReport& r) {
    nlohmann::json j;
    j["beta"] = r.beta;
    j["ratio"] = r.ratio;
    j["sectors"] = nlohmann::json::array();
    for (const auto& sec : r.sectors) {
        nlohmann::json s;
        s["k"] = sec.k;
        s["s_parity"] = sec.s_parity == Parity::even ? "even" : "odd";
        s["y_parity"] = sec.y_parity == Parity::even ? "even" : "odd";
        s["eigenvalues"] = sec.eigenvalues;
        j["sectors"].push_back(std::move(s));
    }
    j["translation_residual"] = r.translation_residual;
    j["verdict"] = verdict_name(r.verdict);
    j["detail"] = {{"ee_zero_mean_lowest", r.ee_zero_mean_lowest},
                   {"eo_deflated_lowest", r.eo_deflated_lowest},
                   {"psi_correlation", r.psi_correlation},
                   {"admissible_min", r.admissible_min},
                   {"tol_abs", r.tol_abs},
                   {"tail_certified", r.tail_certified}};
    return j.dump(2);
}

}  // namespace bubblelab
