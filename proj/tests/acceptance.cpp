// Acceptance suite: each criterion prints one [PASS]/[FAIL] line; any
// failure also fails the binary through doctest.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "bubblelab/bounds.hpp"
#include "bubblelab/bubble.hpp"
#include "bubblelab/embed.hpp"
#include "bubblelab/errors.hpp"
#include "bubblelab/flow.hpp"
#include "bubblelab/numerics.hpp"
#include "bubblelab/stability.hpp"
#include "oracles.hpp"

using namespace bubblelab;

namespace {

struct Criterion {
    bool ok = true;
    bool require(bool cond, const char* what) {
        CHECK_MESSAGE(cond, std::string(what));
        ok = ok && cond;
        return cond;
    }
    void report(int number, const char* title) const {
        std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", number, title);
        std::fflush(stdout);
    }
};

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const WarpedGeometry& ex1_unit() {
    static const WarpedGeometry g = f_from_phi(make_builtin_profile("ex1"), 1.0);
    return g;
}

}  // namespace

TEST_CASE("criterion 1: builtin reconstruction") {
    Criterion c;
    const auto t0 = std::chrono::steady_clock::now();
    const WarpedGeometry g1 = f_from_phi(make_builtin_profile("ex1"));
    const WarpedGeometry g2 = f_from_phi(make_builtin_profile("ex2"));
    double worst1 = 0.0, worst2 = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double s1 = -g1.s_max() + 2.0 * g1.s_max() * i / 2000.0;
        const double f1 = 1.0 / std::pow(std::cos(s1 / 2), 2);
        worst1 = std::max(worst1, std::abs(g1.f(s1) / f1 - 1.0));
        const double s2 = -g2.s_max() + 2.0 * g2.s_max() * i / 2000.0;
        const double f2 = std::pow(1.0 - s2 * s2, -1.5);
        worst2 = std::max(worst2, std::abs(g2.f(s2) / f2 - 1.0));
    }
    const double elapsed = seconds_since(t0);
    c.require(worst1 <= 1e-8, "ex1: relative error vs sec^2(s/2) <= 1e-8 on 2001 points");
    c.require(worst2 <= 1e-8, "ex2: relative error vs (1-s^2)^{-3/2} <= 1e-8 on 2001 points");
    c.require(elapsed < 1.0, "runtime < 1 s");
    c.report(1, "builtin reconstruction");
}

TEST_CASE("criterion 2: CMC residual") {
    Criterion c;
    const WarpedGeometry g2 = f_from_phi(make_builtin_profile("ex2"));
    {
        const auto t0 = std::chrono::steady_clock::now();
        const double r2000 =
            mean_curvature_residual(solve_profile(ex1_unit(), M_PI / 6, 2000), ex1_unit());
        c.require(r2000 <= 1e-6, "ex1 s1=pi/6: residual <= 1e-6 at 2000 nodes");
        c.require(seconds_since(t0) < 1.0, "ex1 case < 1 s");
        const double r1000 =
            mean_curvature_residual(solve_profile(ex1_unit(), M_PI / 6, 1000), ex1_unit());
        c.require(r1000 / r2000 >= 3.5, "ex1: order >= 2 under refinement");
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        const double r2000 = mean_curvature_residual(solve_profile(g2, 0.3, 2000), g2);
        c.require(r2000 <= 1e-6, "ex2 s1=0.3: residual <= 1e-6 at 2000 nodes");
        c.require(seconds_since(t0) < 1.0, "ex2 case < 1 s");
        const double r1000 = mean_curvature_residual(solve_profile(g2, 0.3, 1000), g2);
        c.require(r1000 / r2000 >= 3.5, "ex2: order >= 2 under refinement");
    }
    c.report(2, "CMC residual");
}

TEST_CASE("criterion 3: derived closed values") {
    Criterion c;
    const BubbleProfile bp = solve_profile(ex1_unit(), M_PI / 6, 2000);
    c.require(std::abs(bp.u_max - std::log(std::sqrt(3.0))) <= 1e-7,
              "u(0) = ln sqrt(3) +- 1e-7 for ex1, s1 = pi/6");
    c.require(std::abs(beta(ex1_unit()) - 2.0) <= 1e-6, "beta(ex1) = 2 +- 1e-6");
    c.require(std::abs(H0_large_bubble(3, 1, 6.0).H0 - 6.0) <= 1e-12,
              "H0(d=3, n=1, R0=6) = 6 +- 1e-12");
    c.report(3, "derived closed values");
}

TEST_CASE("criterion 4: Jacobi machinery") {
    Criterion c;
    const WarpedGeometry& g = ex1_unit();
    const BubbleProfile b1000 = solve_profile(g, M_PI / 6, 1000);
    const BubbleProfile b500 = solve_profile(g, M_PI / 6, 500);
    const BubbleProfile b2000 = solve_profile(g, M_PI / 6, 2000);

    const double r1000 = jacobi_field_residual(b1000, g);
    c.require(r1000 < 1e-3, "translation-field residual < 1e-3 at 1000 nodes");
    c.require(jacobi_field_residual(b500, g) / r1000 >= 3.5, "residual decays at O(h^2)");

    const SectorOperator o1 = build_sector_operator(b1000, g, 0, Parity::even, Parity::odd);
    const SectorOperator o2 = build_sector_operator(b2000, g, 0, Parity::even, Parity::odd);
    const double l1 = num::smallest_eigenvalues(o1.std_form, 1).front();
    const double l2 = num::smallest_eigenvalues(o2.std_form, 1).front();
    c.require(std::abs(l2) < std::abs(l1) / 3.0 && std::abs(l2) < 1e-5,
              "(k=0, s-even, y-odd) lowest eigenvalue -> 0 under refinement");

    const std::vector<double> vec = num::eigenvector(o2.std_form, l2);
    const double R = g.phi(b2000.s1);
    double dot = 0.0, nq = 0.0;
    for (std::size_t i = 0; i < vec.size(); ++i) {
        const double q = R * std::cos(b2000.alpha[static_cast<std::size_t>(o2.nodes[i])]) *
                         std::sqrt(o2.mass[i]);
        dot += vec[i] * q;
        nq += q * q;
    }
    c.require(std::abs(dot) / std::sqrt(nq) > 0.999, "eigenvector correlation with psi > 0.999");

    c.require(odd_sector_identity_defect(b2000, g) <= 1e-6, "odd-sector coefficient identity defect <= 1e-6 (ex1)");
    const WarpedGeometry g2 = f_from_phi(make_builtin_profile("ex2"));
    c.require(odd_sector_identity_defect(solve_profile(g2, 0.3, 2000), g2) <= 1e-6,
              "odd-sector coefficient identity defect <= 1e-6 (ex2)");
    c.report(4, "Jacobi machinery");
}

TEST_CASE("criterion 5: stability phase check") {
    Criterion c;
    const WarpedGeometry g = f_from_phi(make_builtin_profile("ex1"), 0.1);
    StabilityOptions opts;
    opts.k_max = 16;
    opts.m = 6;

    const auto t0 = std::chrono::steady_clock::now();
    const StabilityReport stable_rep = stability_verdict(solve_profile(g, 0.4, 600), g, opts);
    c.require(stable_rep.verdict == Verdict::stable, "s1 = 0.4, c = 0.1 -> stable");
    const StabilityReport unstable_rep = stability_verdict(solve_profile(g, 0.05, 600), g, opts);
    c.require(unstable_rep.verdict == Verdict::unstable, "s1 = 0.05, c = 0.1 -> unstable");

    // 20-member sweep; every member with phi(s1)/c > beta must report stable
    const double s0 = *g.s0();
    const double b = beta(g);
    bool all_certified_stable = true;
    int certified = 0;
    for (int i = 0; i < 20; ++i) {
        const double s1 = s0 * (0.05 + 0.94 * i / 19.0);
        const StabilityReport rep = stability_verdict(solve_profile(g, s1, 512), g, opts);
        if (g.phi(s1) / g.c() > b) {
            ++certified;
            all_certified_stable = all_certified_stable && rep.verdict == Verdict::stable;
        }
    }
    const double elapsed = seconds_since(t0);
    c.require(certified > 0, "sweep contains beta-certified members");
    c.require(all_certified_stable, "every member with phi(s1)/c > beta reports stable");
    c.require(elapsed < 60.0, "full sweep (20 members, k_max=16, m=6) < 60 s");
    c.report(5, "stability phase check");
}

TEST_CASE("criterion 6: family monotonicity") {
    Criterion c;
    const WarpedGeometry& g = ex1_unit();
    const double s0 = *g.s0();
    std::vector<double> s1s;
    for (int i = 0; i < 20; ++i) s1s.push_back(s0 * (0.05 + 0.94 * i / 19.0));
    const auto rows = family_sweep(g, s1s, 1500);
    bool v_incr = true, h_decr = true, floor_ok = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        c.require(rows[i].ok, "sweep member solves");
        if (i > 0) {
            v_incr = v_incr && rows[i].V > rows[i - 1].V;
            h_decr = h_decr && rows[i].H < rows[i - 1].H;
        }
        floor_ok = floor_ok && rows[i].H >= 1.0 - 1e-12;
    }
    c.require(v_incr, "V(s1) strictly increasing over the 20-point sweep");
    c.require(h_decr, "H strictly decreasing over the sweep");
    c.require(floor_ok, "H infimum >= 1/phi(s0) = 1");

    const double v99 = solve_profile(g, 0.99 * s0, 2000).V;
    const double v50 = solve_profile(g, 0.50 * s0, 2000).V;
    c.require(v99 / v50 > 10.0, "V(0.99 s0) / V(0.5 s0) > 10");
    c.report(6, "family monotonicity");
}

TEST_CASE("criterion 7: slice-volume flow pipeline") {
    Criterion c;
    const auto t0 = std::chrono::steady_clock::now();
    const double len[1] = {1.0};
    const TorusDomain d = make_torus(1, len, 64);

    num::Rng rng(99);
    bool fd_ok = true;
    for (int trial = 0; trial < 20; ++trial) {
        SigmaField f = make_random_field(d, 2, 30.0, 3.0, 1000 + static_cast<unsigned>(trial));
        std::vector<double> dir(f.values.size());
        double mean = 0.0;
        for (double& v : dir) mean += (v = rng.gauss());
        mean /= static_cast<double>(dir.size());
        double dnorm = 0.0;
        for (double& v : dir) {
            v -= mean;
            dnorm += v * v;
        }
        dnorm = std::sqrt(dnorm * d.cell_volume());
        for (double& v : dir) v /= dnorm;
        double norm = 0.0;
        for (const double v : f.values) norm += v * v;
        const double eps = 1e-6 * std::sqrt(norm * d.cell_volume());
        SigmaField fp = f, fm = f;
        for (std::size_t i = 0; i < dir.size(); ++i) {
            fp.values[i] += eps * dir[i];
            fm.values[i] -= eps * dir[i];
        }
        const double fd = (area_functional(fp) - area_functional(fm)) / (2 * eps);
        fd_ok = fd_ok && std::abs(first_variation(f, dir) - fd) <= 1e-6 * std::abs(fd);
    }
    c.require(fd_ok, "first_variation vs finite differences < 1e-6 relative on 20 fields");

    const SigmaField f0 = make_random_field(d, 2, 100.0, 1.0, 424242);
    const DescentResult res = constrained_descent(f0, 100000, 2e-3);
    c.require(res.converged && res.steps <= 100000,
              "descent reaches ||tau||_inf/a < 1e-6 within 1e5 steps");
    c.require(res.volume_drift_rel <= 1e-10, "volume drift <= 1e-10 relative");
    bool monotone = true;
    for (std::size_t i = 1; i < res.trajectory.size(); ++i)
        monotone = monotone && res.trajectory[i].area <= res.trajectory[i - 1].area + 1e-12;
    c.require(monotone, "area monotone along accepted steps");
    c.require(seconds_since(t0) < 30.0, "pipeline < 30 s");
    c.report(7, "slice-volume flow pipeline");
}

TEST_CASE("criterion 8: inequality suite") {
    Criterion c;
    // bubble family: both n = 1 inequalities on a sweep, zero violations
    const WarpedGeometry& g = ex1_unit();
    const double s0 = *g.s0();
    bool family_ok = true;
    for (int i = 0; i < 12; ++i) {
        const double s1 = s0 * (0.08 + 0.9 * i / 11.0);
        const BubbleProfile bp = solve_profile(g, s1, 1000);
        SurfaceStats st;
        st.d = 3;
        st.n = 1;
        st.v = bp.V;
        st.H = bp.H;
        st.area = bp.A_lat;
        st.x0_measure = bp.x0_measure;
        st.is_soap_bubble = true;
        for (const auto& row : check_area_H_volume(st))
            if (row.applicable) family_ok = family_ok && row.pass;
    }
    c.require(family_ok, "(vH-le-area) and (graph-area-n1) hold on the family sweep");

    // cylinder equality case of area-upper-bound
    SurfaceStats cyl;
    cyl.n = 3;
    cyl.d = 4;
    cyl.vol_X = 1.3;
    const double r = 0.8;
    cyl.H = (cyl.n - 1) / r;
    cyl.v = cyl.vol_X * unit_ball_volume(cyl.n) * std::pow(r, cyl.n);
    cyl.area = cyl.vol_X * cyl.n * unit_ball_volume(cyl.n) * std::pow(r, cyl.n - 1);
    cyl.is_soap_bubble = true;
    bool cyl_ok = false;
    for (const auto& row : check_area_H_volume(cyl))
        if (row.inequality == "area-upper-bound")
            cyl_ok = row.applicable && std::abs(row.margin) <= 1e-12 * cyl.area;
    c.require(cyl_ok, "area-upper-bound holds with equality on a cylinder");

    const double len[1] = {1.0};
    const VariationBoundTrials trials =
        variation_bound_trials(make_torus(1, len, 64), 2, 1e4, 1.0, 1.0, 100, 314159);
    c.require(trials.trials == 100 && trials.all_hold && trials.worst_margin >= 0.0,
              "averaged-variation inequality holds on 100 random admissible fields");

    // slope-bound constants vs hand arithmetic
    const SlopeConstants sc = slope_bound_constants(2, 1.0, 1.0, 0.0);
    const double hand_log = 63.0 - std::log(std::exp(31.5) - 1.0) + std::log(21.0);
    c.require(sc.C1 == 63.0 && std::abs(sc.log_C_prime - hand_log) <= 1e-12 * hand_log,
              "slope constants: C1 = 63, C' = e^63/(e^31.5 - 1) * 21");
    bool threw = false;
    try {
        slope_bound_constants(2, 1.0, 0.0, 0.0);
    } catch (const UndefinedBoundError&) {
        threw = true;
    }
    c.require(threw, "C = R0 = 0 raises undefined-bound");
    c.require(slope_bound_constants(2, 1.0, 1.5, 0.0).log_C_prime > sc.log_C_prime,
              "C' increases with C on the curvature branch");
    c.report(8, "inequality suite");
}

TEST_CASE("criterion 9: embedding") {
    Criterion c;
    const WarpedGeometry g = f_from_phi(make_builtin_profile("ex1"), 0.1);
    const RevolutionCurve curve = embed_revolution(g, -1.0, 1.0, 8001);
    c.require(curve.max_unit_speed_defect() <= 1e-8, "unit-speed defect <= 1e-8");

    const TriangleMesh band = revolution_mesh(curve, 16);
    double worst = 0.0;
    const int n_theta = 16;
    for (int ring = 0; ring < curve.sample_count(); ring += 500) {
        const auto& a = band.vertices[static_cast<std::size_t>(ring * n_theta)];
        const auto& bvx = band.vertices[static_cast<std::size_t>(ring * n_theta + 1)];
        const double chord =
            std::sqrt(std::pow(a[0] - bvx[0], 2) + std::pow(a[1] - bvx[1], 2) +
                      std::pow(a[2] - bvx[2], 2));
        const double rr = chord / (2.0 * std::sin(M_PI / n_theta));
        const double s = curve.s[static_cast<std::size_t>(ring)];
        worst = std::max(worst, std::abs(rr * rr - 0.01 * g.f(s) * g.f(s)));
    }
    c.require(worst <= 1e-8, "induced theta-theta metric coefficient = c^2 f^2 to 1e-8");

    const BubbleProfile bp = solve_profile(g, 0.4, 512);
    const TriangleMesh torus = bubble_torus_mesh(bp, g, 64, 32);
    const char* path = "acceptance_tmp.obj";
    write_obj(torus, path);
    const TriangleMesh back = read_obj(path);
    bool exact = back.vertices.size() == torus.vertices.size() &&
                 back.triangles.size() == torus.triangles.size();
    for (std::size_t i = 0; exact && i < torus.vertices.size(); ++i)
        for (int k = 0; k < 3; ++k)
            exact = exact && back.vertices[i][static_cast<std::size_t>(k)] ==
                                 torus.vertices[i][static_cast<std::size_t>(k)];
    c.require(exact, "OBJ round trip is bit-exact");
    std::remove(path);
    c.report(9, "embedding");
}
