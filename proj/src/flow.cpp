#include "bubblelab/flow.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bubblelab/bounds.hpp"
#include "bubblelab/errors.hpp"
#include "bubblelab/numerics.hpp"

namespace bubblelab {

namespace {

int wrap(int i, int n) { return (i % n + n) % n; }

// centered periodic difference along each axis at flat index idx
void gradient_at(const SigmaField& f, int idx, double* out) {
    const int res = f.domain.resolution;
    if (f.domain.dim == 1) {
        const double h = f.domain.spacing(0);
        out[0] = (f.values[static_cast<std::size_t>(wrap(idx + 1, res))] -
                  f.values[static_cast<std::size_t>(wrap(idx - 1, res))]) /
                 (2 * h);
    } else {
        const int ix = idx / res, iy = idx % res;
        const double hx = f.domain.spacing(0), hy = f.domain.spacing(1);
        out[0] = (f.values[static_cast<std::size_t>(wrap(ix + 1, res) * res + iy)] -
                  f.values[static_cast<std::size_t>(wrap(ix - 1, res) * res + iy)]) /
                 (2 * hx);
        out[1] = (f.values[static_cast<std::size_t>(ix * res + wrap(iy + 1, res))] -
                  f.values[static_cast<std::size_t>(ix * res + wrap(iy - 1, res))]) /
                 (2 * hy);
    }
}

double grad_norm2(const SigmaField& f, int idx) {
    double g[2] = {0, 0};
    gradient_at(f, idx, g);
    return f.domain.dim == 1 ? g[0] * g[0] : g[0] * g[0] + g[1] * g[1];
}

double prefactor(int n) { return std::pow(static_cast<double>(n), n) * unit_ball_volume(n); }

void check_field(const SigmaField& f, const char* who) {
    if (f.domain.dim != 1 && f.domain.dim != 2)
        throw InvalidInputError(std::string(who) + ": torus dimension must be 1 or 2");
    if (f.domain.resolution < 16)
        throw InvalidInputError(std::string(who) + ": resolution must be >= 16 per axis");
    if (f.n < 1) throw InvalidInputError(std::string(who) + ": ball dimension n must be >= 1");
    if (static_cast<int>(f.values.size()) != f.domain.cell_count())
        throw InvalidInputError(std::string(who) + ": value count does not match the grid");
    for (const double v : f.values)
        if (!(v > 0.0)) throw InvalidInputError(std::string(who) + ": sigma must be positive");
}

}  // namespace

int TorusDomain::cell_count() const { return dim == 1 ? resolution : resolution * resolution; }

double TorusDomain::cell_volume() const {
    return dim == 1 ? lengths[0] / resolution
                    : (lengths[0] / resolution) * (lengths[1] / resolution);
}

double TorusDomain::total_volume() const { return dim == 1 ? lengths[0] : lengths[0] * lengths[1]; }

double TorusDomain::lambda1() const {
    const double lmax = dim == 1 ? lengths[0] : std::max(lengths[0], lengths[1]);
    const double w = 2.0 * 3.14159265358979323846 / lmax;
    return w * w;
}

TorusDomain make_torus(int dim, const double* lengths, int resolution) {
    TorusDomain d;
    d.dim = dim;
    d.lengths[0] = lengths[0];
    d.lengths[1] = dim == 2 ? lengths[1] : 1.0;
    d.resolution = resolution;
    if (dim != 1 && dim != 2) throw InvalidInputError("make_torus: dim must be 1 or 2");
    if (resolution < 16) throw InvalidInputError("make_torus: resolution must be >= 16");
    for (int a = 0; a < dim; ++a)
        if (!(d.lengths[a] > 0.0)) throw InvalidInputError("make_torus: lengths must be positive");
    return d;
}

double SigmaField::mean() const {
    double acc = 0.0;
    for (const double v : values) acc += v;
    return acc / static_cast<double>(values.size());
}

double SigmaField::tau_inf() const {
    const double a = mean();
    double mx = 0.0;
    for (const double v : values) mx = std::max(mx, std::abs(v - a));
    return mx;
}

SigmaField make_constant_field(const TorusDomain& d, int n, double a) {
    if (!(a > 0.0)) throw InvalidInputError("make_constant_field: a must be positive");
    SigmaField f;
    f.domain = d;
    f.n = n;
    f.values.assign(static_cast<std::size_t>(d.cell_count()), a);
    check_field(f, "make_constant_field");
    return f;
}

SigmaField make_random_field(const TorusDomain& d, int n, double a, double tau_inf,
                             std::uint64_t seed) {
    if (!(a > 0.0)) throw InvalidInputError("make_random_field: a must be positive");
    if (!(tau_inf >= 0.0) || tau_inf >= a)
        throw InvalidInputError("make_random_field: need 0 <= tau_inf < a to keep sigma positive");
    num::Rng rng(seed);
    const int res = d.resolution;
    const int kcut = std::max(1, res / 4);
    std::vector<double> tau(static_cast<std::size_t>(d.cell_count()), 0.0);
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    if (d.dim == 1) {
        for (int k = 1; k <= kcut; ++k) {
            const double ca = rng.gauss(), sa = rng.gauss();
            for (int i = 0; i < res; ++i) {
                const double ph = kTwoPi * k * i / res;
                tau[static_cast<std::size_t>(i)] += ca * std::cos(ph) + sa * std::sin(ph);
            }
        }
    } else {
        for (int kx = 0; kx <= kcut; ++kx) {
            for (int ky = (kx == 0 ? 1 : -kcut); ky <= kcut; ++ky) {
                const double ca = rng.gauss(), sa = rng.gauss();
                for (int ix = 0; ix < res; ++ix) {
                    for (int iy = 0; iy < res; ++iy) {
                        const double ph = kTwoPi * (kx * ix + ky * iy) / res;
                        tau[static_cast<std::size_t>(ix * res + iy)] +=
                            ca * std::cos(ph) + sa * std::sin(ph);
                    }
                }
            }
        }
    }
    double mean = 0.0;
    for (const double v : tau) mean += v;
    mean /= static_cast<double>(tau.size());
    double mx = 0.0;
    for (double& v : tau) {
        v -= mean;
        mx = std::max(mx, std::abs(v));
    }
    SigmaField f;
    f.domain = d;
    f.n = n;
    f.values.resize(tau.size());
    const double scale = (mx > 0.0 && tau_inf > 0.0) ? tau_inf / mx : 0.0;
    for (std::size_t i = 0; i < tau.size(); ++i) f.values[i] = a + scale * tau[i];
    check_field(f, "make_random_field");
    return f;
}

SigmaField load_field_csv(const TorusDomain& d, int n, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open field CSV: " + path);
    std::vector<double> vals;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
    }
    SigmaField f;
    f.domain = d;
    f.n = n;
    f.values = std::move(vals);
    check_field(f, "load_field_csv");
    return f;
}

double area_functional(const SigmaField& f) {
    check_field(f, "area_functional");
    const double two_alpha = 2.0 * f.alpha_exp();
    double acc = 0.0;
    const int count = f.domain.cell_count();
    for (int i = 0; i < count; ++i) {
        const double s = f.values[static_cast<std::size_t>(i)];
        acc += std::sqrt(std::pow(s, two_alpha) + grad_norm2(f, i));
    }
    return prefactor(f.n) * acc * f.domain.cell_volume();
}

double volume_functional(const SigmaField& f) {
    check_field(f, "volume_functional");
    double acc = 0.0;
    for (const double v : f.values) acc += v;
    return prefactor(f.n) * acc * f.domain.cell_volume();
}

double first_variation(const SigmaField& f, const std::vector<double>& dir) {
    check_field(f, "first_variation");
    if (dir.size() != f.values.size())
        throw InvalidInputError("first_variation: direction size mismatch");
    double dmean = 0.0, dscale = 0.0;
    for (const double v : dir) {
        dmean += v;
        dscale = std::max(dscale, std::abs(v));
    }
    dmean /= static_cast<double>(dir.size());
    if (std::abs(dmean) > 1e-10 * std::max(1.0, dscale))
        throw InvalidInputError("first_variation: direction must have zero mean");

    const double alpha = f.alpha_exp();
    const double two_alpha = 2.0 * alpha;
    const int count = f.domain.cell_count();
    SigmaField dfield = f;  // reuse the periodic gradient helper for dir
    dfield.values = dir;
    double acc = 0.0;
    for (int i = 0; i < count; ++i) {
        const double s = f.values[static_cast<std::size_t>(i)];
        double gs[2] = {0, 0}, gd[2] = {0, 0};
        gradient_at(f, i, gs);
        gradient_at(dfield, i, gd);
        const double dot =
            f.domain.dim == 1 ? gs[0] * gd[0] : gs[0] * gd[0] + gs[1] * gd[1];
        const double den = std::sqrt(std::pow(s, two_alpha) + grad_norm2(f, i));
        acc += (alpha * std::pow(s, two_alpha - 1.0) * dir[static_cast<std::size_t>(i)] + dot) / den;
    }
    return prefactor(f.n) * acc * f.domain.cell_volume();
}

std::vector<double> area_gradient(const SigmaField& f) {
    const double alpha = f.alpha_exp();
    const double two_alpha = 2.0 * alpha;
    const int count = f.domain.cell_count();
    const int res = f.domain.resolution;
    // flux q = grad(sigma)/den lives per cell; the adjoint of the centered
    // difference is the centered difference of q with opposite sign.
    std::vector<double> den(static_cast<std::size_t>(count)),
        qx(static_cast<std::size_t>(count)), qy(static_cast<std::size_t>(count), 0.0);
    for (int i = 0; i < count; ++i) {
        const std::size_t ii = static_cast<std::size_t>(i);
        double gs[2] = {0, 0};
        gradient_at(f, i, gs);
        den[ii] = std::sqrt(std::pow(f.values[ii], two_alpha) + grad_norm2(f, i));
        qx[ii] = gs[0] / den[ii];
        if (f.domain.dim == 2) qy[ii] = gs[1] / den[ii];
    }
    std::vector<double> grad(static_cast<std::size_t>(count));
    const double pref = prefactor(f.n);
    for (int i = 0; i < count; ++i) {
        const std::size_t ii = static_cast<std::size_t>(i);
        double div;
        if (f.domain.dim == 1) {
            const double h = f.domain.spacing(0);
            div = (qx[static_cast<std::size_t>(wrap(i - 1, res))] -
                   qx[static_cast<std::size_t>(wrap(i + 1, res))]) /
                  (2 * h);
        } else {
            const int ix = i / res, iy = i % res;
            const double hx = f.domain.spacing(0), hy = f.domain.spacing(1);
            div = (qx[static_cast<std::size_t>(wrap(ix - 1, res) * res + iy)] -
                   qx[static_cast<std::size_t>(wrap(ix + 1, res) * res + iy)]) /
                      (2 * hx) +
                  (qy[static_cast<std::size_t>(ix * res + wrap(iy - 1, res))] -
                   qy[static_cast<std::size_t>(ix * res + wrap(iy + 1, res))]) /
                      (2 * hy);
        }
        grad[ii] = pref * (alpha * std::pow(f.values[ii], two_alpha - 1.0) / den[ii] + div);
    }
    return grad;
}

DescentResult constrained_descent(const SigmaField& start, long max_steps, double step_size) {
    check_field(start, "constrained_descent");
    if (!(step_size > 0.0)) throw InvalidInputError("constrained_descent: step_size must be positive");
    DescentResult out;
    out.field = start;
    SigmaField& f = out.field;
    const int count = f.domain.cell_count();
    const double sum0 = [&] {
        double s = 0.0;
        for (const double v : f.values) s += v;
        return s;
    }();
    const double v0 = volume_functional(f);
    double area = area_functional(f);
    double h = step_size;

    auto record = [&](long step) {
        out.trajectory.push_back({step, area, volume_functional(f), f.tau_inf() / f.mean()});
    };
    record(0);

    for (long step = 0; step < max_steps; ++step) {
        if (f.tau_inf() / f.mean() < 1e-6) {
            out.converged = true;
            break;
        }
        std::vector<double> G = area_gradient(f);
        double gmean = 0.0;
        for (const double v : G) gmean += v;
        gmean /= static_cast<double>(count);

        bool accepted = false;
        for (int attempt = 0; attempt < 80; ++attempt) {
            SigmaField cand = f;
            double mn = 1e300;
            for (int i = 0; i < count; ++i) {
                const std::size_t ii = static_cast<std::size_t>(i);
                cand.values[ii] = f.values[ii] - h * (G[ii] - gmean);
                mn = std::min(mn, cand.values[ii]);
            }
            if (mn <= 0.0) {
                h *= 0.5;
                continue;
            }
            // additive rebalance: removes the O(eps) roundoff of the mean-free step
            double sum = 0.0;
            for (const double v : cand.values) sum += v;
            const double corr = (sum0 - sum) / static_cast<double>(count);
            for (double& v : cand.values) v += corr;
            const double cand_area = area_functional(cand);
            if (cand_area > area) {
                h *= 0.5;
                continue;
            }
            f = std::move(cand);
            area = cand_area;
            accepted = true;
            break;
        }
        if (!accepted)
            throw NumericalFailureError(
                "constrained_descent: sigma reached nonpositive values or the area could not "
                "decrease even with the step halved 80 times; reduce step_size");
        ++out.steps;
        record(out.steps);
        h = std::min(h * 2.0, step_size);
    }
    if (!out.converged && f.tau_inf() / f.mean() < 1e-6) out.converged = true;
    out.final_area = area;
    out.volume_drift_rel = std::abs(volume_functional(f) - v0) / v0;
    return out;
}

double gradient_term_constant(int n, double c_prime) {
    const double alpha = (n - 1.0) / n;
    return std::pow(2.0, -alpha) / (std::sqrt(1.0 + c_prime * c_prime) + 1.0);
}

double large_volume_margin(double a, int n, double lambda1, double c_doubleprime) {
    if (!(a > 0.0) || !(lambda1 > 0.0) || !(c_doubleprime > 0.0) || n < 1)
        throw InvalidInputError("large_volume_margin: all inputs must be positive");
    return c_doubleprime - 4.0 / (n * lambda1 * std::pow(a, 2.0 / n));
}

VariationBoundResult variation_bound_check(const SigmaField& f, double C, double c_prime) {
    check_field(f, "variation_bound_check");
    if (!(C > 0.0) || !(c_prime > 0.0))
        throw InvalidInputError("variation_bound_check: C and C' must be positive");
    const double a = f.mean();
    const double alpha = f.alpha_exp();
    const double two_alpha = 2.0 * alpha;
    const int count = f.domain.cell_count();

    // admissibility window from the lemma's hypotheses
    for (int i = 0; i < count; ++i) {
        const double s = f.values[static_cast<std::size_t>(i)];
        if (s < 0.5 * a || s > 2.0 * a)
            throw InvalidInputError("variation_bound_check: sigma leaves [a/2, 2a]");
        if (std::abs(s - a) > 2.0 * C * std::pow(a, alpha))
            throw InvalidInputError("variation_bound_check: |tau| exceeds 2 C a^alpha");
    }
    const SlopeBoundCheck sb = verify_slope_bound(f, c_prime);
    if (sb.max_gradient > c_prime)
        throw InvalidInputError("variation_bound_check: discrete |grad u| exceeds C'");

    const double cpp = gradient_term_constant(f.n, c_prime);
    double lhs = 0.0, rhs = 0.0;
    for (int i = 0; i < count; ++i) {
        const std::size_t ii = static_cast<std::size_t>(i);
        const double s = f.values[ii];
        const double tau = s - a;
        const double g2 = grad_norm2(f, i);
        lhs += (std::pow(s, two_alpha - 1.0) * tau + g2) / std::sqrt(std::pow(s, two_alpha) + g2);
        rhs += std::pow(a, -alpha) *
               (cpp * g2 - (4.0 / f.n) * std::pow(a, two_alpha - 2.0) * tau * tau);
    }
    const double cv = f.domain.cell_volume();
    VariationBoundResult res;
    res.c_doubleprime = cpp;
    res.margin = (lhs - rhs) * cv;
    res.holds = res.margin >= 0.0;
    return res;
}

VariationBoundTrials variation_bound_trials(const TorusDomain& d, int n, double a, double C,
                                    double c_prime, int count, std::uint64_t seed) {
    VariationBoundTrials out;
    out.all_hold = true;
    out.worst_margin = 1e300;
    const double alpha = (n - 1.0) / n;
    for (int trial = 0; trial < count; ++trial) {
        const double cap = std::min(0.45 * a, 1.8 * C * std::pow(a, alpha));
        SigmaField f = make_random_field(d, n, a, cap, seed + static_cast<std::uint64_t>(trial));
        // rescale tau until the discrete slope fits under C' as well
        SlopeBoundCheck sb = verify_slope_bound(f, c_prime);
        if (sb.max_gradient > 0.9 * c_prime) {
            const double shrink = 0.9 * c_prime / sb.max_gradient;
            const double mean = f.mean();
            for (double& v : f.values) v = mean + shrink * (v - mean);
        }
        const VariationBoundResult r = variation_bound_check(f, C, c_prime);
        out.worst_margin = std::min(out.worst_margin, r.margin);
        out.all_hold = out.all_hold && r.holds;
        ++out.trials;
    }
    return out;
}

SlopeBoundCheck verify_slope_bound(const SigmaField& f, double c_prime) {
    check_field(f, "verify_slope_bound");
    SlopeBoundCheck out;
    // u = n sigma^{1/n}
    SigmaField uf = f;
    double umin = 1e300;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        uf.values[i] = f.n * std::pow(f.values[i], 1.0 / f.n);
        umin = std::min(umin, uf.values[i]);
    }
    out.applicable = umin > 1.0;
    double mx = 0.0;
    for (int i = 0; i < f.domain.cell_count(); ++i)
        mx = std::max(mx, std::sqrt(grad_norm2(uf, i)));
    out.max_gradient = mx;
    out.pass = out.applicable && mx <= c_prime;
    return out;
}

}  // namespace bubblelab
