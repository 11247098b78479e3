#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "bubblelab/errors.hpp"
#include "bubblelab/flow.hpp"
#include "bubblelab/numerics.hpp"

using namespace bubblelab;

namespace {
TorusDomain circle64() {
    const double len[1] = {1.0};
    return make_torus(1, len, 64);
}
}  // namespace

TEST_CASE("torus domain basics") {
    const TorusDomain d = circle64();
    CHECK(d.total_volume() == 1.0);
    CHECK(d.lambda1() == doctest::Approx(4 * M_PI * M_PI));
    CHECK(d.cell_volume() == doctest::Approx(1.0 / 64));
    const double bad[1] = {1.0};
    CHECK_THROWS_AS(make_torus(1, bad, 8), InvalidInputError);

    const double len2[2] = {2.0, 1.0};
    const TorusDomain d2 = make_torus(2, len2, 32);
    CHECK(d2.total_volume() == 2.0);
    CHECK(d2.lambda1() == doctest::Approx(M_PI * M_PI));
    CHECK(d2.cell_count() == 1024);
}

TEST_CASE("area and volume on constant fields") {
    // n = 2, |X| = 1, sigma = a: area = 4 pi sqrt(a), volume = 4 pi a
    const SigmaField f = make_constant_field(circle64(), 2, 9.0);
    CHECK(area_functional(f) == doctest::Approx(4 * M_PI * 3.0).epsilon(1e-13));
    CHECK(volume_functional(f) == doctest::Approx(4 * M_PI * 9.0).epsilon(1e-13));
    // cylinder consistency: r = n a^{1/n} -> area = |X| n omega_n r^{n-1}
    const double r = 2.0 * std::sqrt(9.0);
    CHECK(area_functional(f) == doctest::Approx(1.0 * 2.0 * M_PI * r).epsilon(1e-13));

    // n = 1: two flat copies of X
    const SigmaField f1 = make_constant_field(circle64(), 1, 5.0);
    CHECK(area_functional(f1) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(volume_functional(f1) == doctest::Approx(2.0 * 5.0).epsilon(1e-13));
}

TEST_CASE("volume is linear in sigma and exact") {
    const TorusDomain d = circle64();
    SigmaField a = make_random_field(d, 2, 10.0, 1.0, 7);
    SigmaField b = make_random_field(d, 2, 20.0, 2.0, 8);
    SigmaField sum = a;
    for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += b.values[i];
    CHECK(volume_functional(sum) ==
          doctest::Approx(volume_functional(a) + volume_functional(b)).epsilon(1e-13));
    // direct summation oracle
    double acc = 0.0;
    for (const double v : a.values) acc += v;
    CHECK(volume_functional(a) ==
          doctest::Approx(4.0 * M_PI * acc * d.cell_volume()).epsilon(1e-12));
}

TEST_CASE("area refinement drift under resolution doubling") {
    // smooth field sampled at two resolutions; discrete areas agree to 1e-4
    auto fill = [](SigmaField& f) {
        const int res = f.domain.resolution;
        for (int i = 0; i < res; ++i)
            f.values[static_cast<std::size_t>(i)] =
                10.0 + std::sin(2 * M_PI * i / res) + 0.3 * std::cos(4 * M_PI * i / res);
    };
    const double len[1] = {1.0};
    SigmaField coarse = make_constant_field(make_torus(1, len, 256), 2, 1.0);
    SigmaField fine = make_constant_field(make_torus(1, len, 512), 2, 1.0);
    fill(coarse);
    fill(fine);
    CHECK(area_functional(coarse) ==
          doctest::Approx(area_functional(fine)).epsilon(1e-4));
}

TEST_CASE("first variation: exactness and FD consistency") {
    const TorusDomain d = circle64();
    num::Rng rng(11);

    SUBCASE("constant sigma, any zero-mean direction -> 0") {
        const SigmaField f = make_constant_field(d, 2, 50.0);
        std::vector<double> dir(f.values.size());
        double mean = 0.0;
        for (double& v : dir) mean += (v = rng.gauss());
        mean /= static_cast<double>(dir.size());
        for (double& v : dir) v -= mean;
        CHECK(std::abs(first_variation(f, dir)) < 1e-10);
    }
    SUBCASE("matches centered finite differences on 20 random fields") {
        for (int trial = 0; trial < 20; ++trial) {
            SigmaField f = make_random_field(d, 2, 30.0, 3.0, 100 + static_cast<unsigned>(trial));
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
            for (double& v : dir) v /= dnorm;  // unit L2 direction
            double norm = 0.0;
            for (const double v : f.values) norm += v * v;
            const double eps = 1e-6 * std::sqrt(norm * d.cell_volume());
            SigmaField fp = f, fm = f;
            for (std::size_t i = 0; i < dir.size(); ++i) {
                fp.values[i] += eps * dir[i];
                fm.values[i] -= eps * dir[i];
            }
            const double fd = (area_functional(fp) - area_functional(fm)) / (2 * eps);
            const double an = first_variation(f, dir);
            CHECK(an == doctest::Approx(fd).epsilon(1e-6));
        }
    }
    SUBCASE("gradient is the Riesz representer of the first variation") {
        SigmaField f = make_random_field(d, 2, 30.0, 3.0, 5);
        std::vector<double> dir(f.values.size());
        double mean = 0.0;
        for (double& v : dir) mean += (v = rng.gauss());
        mean /= static_cast<double>(dir.size());
        for (double& v : dir) v -= mean;
        const std::vector<double> G = area_gradient(f);
        double dot = 0.0;
        for (std::size_t i = 0; i < dir.size(); ++i) dot += G[i] * dir[i];
        dot *= f.domain.cell_volume();
        CHECK(dot == doctest::Approx(first_variation(f, dir)).epsilon(1e-10));
    }
    SUBCASE("deformation sigma_t = a + e^t tau reproduces the constrained stationarity integrand") {
        SigmaField f = make_random_field(d, 2, 30.0, 2.0, 17);
        const double a = f.mean();
        std::vector<double> tau(f.values.size());
        for (std::size_t i = 0; i < tau.size(); ++i) tau[i] = f.values[i] - a;
        // direction tau: first_variation equals the zero-mean stationarity
        // integral evaluated directly
        const double alpha = f.alpha_exp();
        double expect = 0.0;
        for (int i = 0; i < d.cell_count(); ++i) {
            const std::size_t ii = static_cast<std::size_t>(i);
            const int res = d.resolution;
            const double h = d.spacing(0);
            const double gt = (f.values[static_cast<std::size_t>((i + 1) % res)] -
                               f.values[static_cast<std::size_t>((i + res - 1) % res)]) /
                              (2 * h);
            const double den = std::sqrt(std::pow(f.values[ii], 2 * alpha) + gt * gt);
            expect += (alpha * std::pow(f.values[ii], 2 * alpha - 1.0) * tau[ii] + gt * gt) / den;
        }
        expect *= 4.0 * M_PI * d.cell_volume();
        CHECK(first_variation(f, tau) == doctest::Approx(expect).epsilon(1e-12));
    }
    SUBCASE("nonzero-mean direction is rejected") {
        const SigmaField f = make_constant_field(d, 2, 50.0);
        std::vector<double> dir(f.values.size(), 1.0);
        CHECK_THROWS_AS(first_variation(f, dir), InvalidInputError);
    }
}

TEST_CASE("constrained descent reaches the cylinder") {
    const SigmaField f0 = make_random_field(circle64(), 2, 100.0, 1.0, 42);
    const DescentResult res = constrained_descent(f0, 100000, 2e-3);
    CHECK(res.converged);
    CHECK(res.field.tau_inf() / res.field.mean() < 1e-6);
    CHECK(res.volume_drift_rel <= 1e-10);
    CHECK(res.steps < 100000);

    SUBCASE("area is monotone along the accepted steps") {
        for (std::size_t i = 1; i < res.trajectory.size(); ++i)
            CHECK(res.trajectory[i].area <= res.trajectory[i - 1].area + 1e-12);
    }
    SUBCASE("volume is conserved along the whole trajectory") {
        for (const auto& row : res.trajectory)
            CHECK(row.volume == doctest::Approx(res.trajectory.front().volume).epsilon(1e-10));
    }
}

TEST_CASE("constant start is already critical") {
    const SigmaField f = make_constant_field(circle64(), 2, 100.0);
    const std::vector<double> G = area_gradient(f);
    double mean = 0.0;
    for (const double v : G) mean += v;
    mean /= static_cast<double>(G.size());
    double worst = 0.0;
    for (const double v : G) worst = std::max(worst, std::abs(v - mean));
    CHECK(worst <= 1e-12);

    const DescentResult res = constrained_descent(f, 1000, 1e-3);
    CHECK(res.steps == 0);
    CHECK(res.converged);
}

TEST_CASE("2-d torus descent also converges") {
    const double len[2] = {1.0, 1.0};
    const SigmaField f0 = make_random_field(make_torus(2, len, 24), 2, 50.0, 0.5, 3);
    const DescentResult res = constrained_descent(f0, 50000, 1e-3);
    CHECK(res.converged);
    CHECK(res.volume_drift_rel <= 1e-10);
}

TEST_CASE("averaged variation threshold") {
    CHECK(large_volume_margin(1e12, 2, 4 * M_PI * M_PI, 0.2) ==
          doctest::Approx(0.2).epsilon(1e-6));
    // margin root: a* = (4/(n lambda1 C''))^{n/2}
    const double cpp = 0.17, l1 = 4 * M_PI * M_PI;
    const int n = 2;
    const double a_star = std::pow(4.0 / (n * l1 * cpp), n / 2.0);
    CHECK(std::abs(large_volume_margin(a_star, n, l1, cpp)) <= 1e-12);
    CHECK(large_volume_margin(1e-9, n, l1, cpp) < 0.0);
    CHECK_THROWS_AS(large_volume_margin(-1.0, 2, 1.0, 1.0), InvalidInputError);
}

TEST_CASE("averaged variation inequality") {
    const TorusDomain d = circle64();

    SUBCASE("tau = 0: both sides vanish") {
        const SigmaField f = make_constant_field(d, 2, 1e4);
        const VariationBoundResult r = variation_bound_check(f, 1.0, 1.0);
        CHECK(r.holds);
        CHECK(std::abs(r.margin) < 1e-10);
        CHECK(r.c_doubleprime ==
              doctest::Approx(std::pow(2.0, -0.5) / (std::sqrt(2.0) + 1.0)).epsilon(1e-12));
    }
    SUBCASE("100 random admissible fields at a = 1e4, n = 2, C = 1") {
        const VariationBoundTrials t = variation_bound_trials(d, 2, 1e4, 1.0, 1.0, 100, 2024);
        CHECK(t.trials == 100);
        CHECK(t.all_hold);
        CHECK(t.worst_margin >= 0.0);
    }
    SUBCASE("violating the sigma window raises a precondition error") {
        SigmaField f = make_constant_field(d, 2, 1e4);
        f.values[3] = 3e4;  // outside [a/2, 2a]
        CHECK_THROWS_AS(variation_bound_check(f, 1.0, 1.0), InvalidInputError);
    }
}

TEST_CASE("slope bound check") {
    const TorusDomain d = circle64();
    SUBCASE("constant u = 2 has zero gradient") {
        // u = n sigma^{1/n} = 2 -> sigma = 1 at n = 2
        const SigmaField f = make_constant_field(d, 2, 1.0);
        const SlopeBoundCheck r = verify_slope_bound(f, 0.5);
        CHECK(r.applicable);
        CHECK(r.max_gradient == 0.0);
        CHECK(r.pass);
    }
    SUBCASE("min u <= 1 is not applicable") {
        const SigmaField f = make_constant_field(d, 2, 0.2);  // u = 2 sqrt(0.2) < 1
        const SlopeBoundCheck r = verify_slope_bound(f, 0.5);
        CHECK_FALSE(r.applicable);
        CHECK_FALSE(r.pass);
    }
    SUBCASE("converged flow output passes with min u > 1") {
        const SigmaField f0 = make_random_field(d, 2, 100.0, 1.0, 9);
        const DescentResult res = constrained_descent(f0, 100000, 2e-3);
        const SlopeBoundCheck r = verify_slope_bound(res.field, 0.5);
        CHECK(r.applicable);
        CHECK(r.pass);
    }
}

TEST_CASE("volume conservation over 1e4 forced steps") {
    // tiny fixed step keeps the run far from convergence so the drift bound
    // is exercised over the full 10^4 steps
    const SigmaField f0 = make_random_field(circle64(), 2, 100.0, 1.0, 21);
    const DescentResult res = constrained_descent(f0, 10000, 1e-7);
    CHECK(res.steps == 10000);
    CHECK(res.volume_drift_rel <= 1e-10);
}

TEST_CASE("descent failure path: sigma driven nonpositive") {
    // a step so large that 80 halvings still cannot keep sigma positive
    SigmaField f = make_random_field(circle64(), 2, 0.08, 0.05, 4);
    CHECK_THROWS_AS(constrained_descent(f, 10, 1e30), NumericalFailureError);
}

TEST_CASE("field CSV ingestion round-trips the grid") {
    const TorusDomain d = circle64();
    const SigmaField f = make_random_field(d, 2, 50.0, 2.0, 31);
    {
        std::ofstream out("test_flow_tmp.csv");
        out.precision(17);
        for (const double v : f.values) out << v << "\n";
    }
    const SigmaField back = load_field_csv(d, 2, "test_flow_tmp.csv");
    CHECK(area_functional(back) == doctest::Approx(area_functional(f)).epsilon(1e-15));
    std::remove("test_flow_tmp.csv");

    SUBCASE("2-d grids use one row per x line") {
        const double len2[2] = {1.0, 1.0};
        const TorusDomain d2 = make_torus(2, len2, 16);
        const SigmaField f2 = make_random_field(d2, 2, 50.0, 2.0, 32);
        {
            std::ofstream out("test_flow_tmp.csv");
            out.precision(17);
            for (int ix = 0; ix < 16; ++ix) {
                for (int iy = 0; iy < 16; ++iy)
                    out << f2.values[static_cast<std::size_t>(ix * 16 + iy)]
                        << (iy + 1 < 16 ? "," : "\n");
            }
        }
        const SigmaField back2 = load_field_csv(d2, 2, "test_flow_tmp.csv");
        CHECK(volume_functional(back2) == doctest::Approx(volume_functional(f2)).epsilon(1e-15));
        std::remove("test_flow_tmp.csv");
    }
    SUBCASE("wrong cell count is rejected") {
        {
            std::ofstream out("test_flow_tmp.csv");
            out << "1.0\n2.0\n3.0\n";
        }
        CHECK_THROWS_AS(load_field_csv(d, 2, "test_flow_tmp.csv"), InvalidInputError);
        std::remove("test_flow_tmp.csv");
    }
}
