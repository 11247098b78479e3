#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "bubblelab/bubblelab.h"

TEST_CASE("capi: profile and geometry lifecycle") {
    blb_profile* p = nullptr;
    REQUIRE(blb_profile_builtin("ex1", 0.05, &p) == BLB_OK);
    double s0 = 0;
    int present = 0, pattern = 0;
    CHECK(blb_profile_s0(p, &s0, &present, &pattern) == BLB_OK);
    CHECK(present == 1);
    CHECK(pattern == 1);
    CHECK(s0 == doctest::Approx(M_PI / 2).epsilon(1e-10));
    int count = -1;
    char buf[256];
    CHECK(blb_profile_validate(p, buf, sizeof(buf), &count) == BLB_OK);
    CHECK(count == 0);

    blb_geometry* g = nullptr;
    REQUIRE(blb_geometry_create(p, 0.1, &g) == BLB_OK);
    double f = 0, fs = 0, fss = 0, F = 0;
    CHECK(blb_geometry_eval(g, M_PI / 2, &f, &fs, &fss, &F) == BLB_OK);
    CHECK(f == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(F == doctest::Approx(2.0 * std::tan(M_PI / 4)).epsilon(1e-9));
    double K = 0;
    CHECK(blb_geometry_gauss_curvature(g, 0.0, &K) == BLB_OK);
    CHECK(K == doctest::Approx(-0.5).epsilon(1e-8));
    double beta_v = 0;
    CHECK(blb_geometry_beta(g, 0, 0.0, &beta_v) == BLB_OK);
    CHECK(beta_v == doctest::Approx(2.0).epsilon(1e-6));

    blb_geometry_free(g);
    blb_profile_free(p);
}

TEST_CASE("capi: error codes carry the exit-code convention") {
    blb_profile* p = nullptr;
    CHECK(blb_profile_builtin("nope", 0.05, &p) == BLB_INVALID_INPUT);
    CHECK(std::strlen(blb_last_error()) > 0);
    CHECK(blb_profile_from_csv("missing_file.csv", &p) == BLB_IO_ERROR);

    REQUIRE(blb_profile_builtin("ex1", 0.05, &p) == BLB_OK);
    blb_geometry* g = nullptr;
    REQUIRE(blb_geometry_create(p, 0.1, &g) == BLB_OK);
    blb_bubble* b = nullptr;
    CHECK(blb_bubble_solve(g, 2.0, 256, &b) == BLB_INVALID_INPUT);
    CHECK(std::string(blb_last_error()).find("s0") != std::string::npos);

    double c1 = 0, cp = 0, lcp = 0;
    CHECK(blb_slope_bound_constants(2, 1.0, 0.0, 0.0, &c1, &cp, &lcp) == BLB_UNDEFINED_BOUND);

    blb_geometry_free(g);
    blb_profile_free(p);
}

TEST_CASE("capi: bubble, stability, sweep") {
    blb_profile* p = nullptr;
    blb_geometry* g = nullptr;
    REQUIRE(blb_profile_builtin("ex1", 0.05, &p) == BLB_OK);
    REQUIRE(blb_geometry_create(p, 0.1, &g) == BLB_OK);

    blb_bubble* b = nullptr;
    REQUIRE(blb_bubble_solve(g, 0.4, 500, &b) == BLB_OK);
    double H = 0, V = 0, A = 0, umax = 0, x0 = 0;
    CHECK(blb_bubble_scalars(b, &H, &V, &A, &umax, &x0) == BLB_OK);
    CHECK(H == doctest::Approx(1.0 / std::sin(0.4)).epsilon(1e-12));
    int n = 0;
    CHECK(blb_bubble_node_count(b, &n) == BLB_OK);
    CHECK(n == 501);
    std::vector<double> alpha(static_cast<size_t>(n)), s(static_cast<size_t>(n));
    CHECK(blb_bubble_nodes(b, alpha.data(), s.data(), nullptr, nullptr) == BLB_OK);
    CHECK(alpha.back() == doctest::Approx(M_PI / 2));
    CHECK(s.back() == doctest::Approx(0.4).epsilon(1e-10));

    blb_stability* st = nullptr;
    REQUIRE(blb_stability_analyze(b, g, 8, 4, 1e-7, &st) == BLB_OK);
    int verdict = -1;
    CHECK(blb_stability_verdict(st, &verdict) == BLB_OK);
    CHECK(verdict == 0);  // stable
    char* js = nullptr;
    REQUIRE(blb_stability_json(st, &js) == BLB_OK);
    CHECK(std::string(js).find("\"verdict\"") != std::string::npos);
    blb_string_free(js);
    blb_stability_free(st);

    const double s1s[3] = {0.3, 0.6, 2.5};
    blb_sweep_row rows[3];
    REQUIRE(blb_family_sweep(g, s1s, 3, 256, rows) == BLB_OK);
    CHECK(rows[0].ok == 1);
    CHECK(rows[1].ok == 1);
    CHECK(rows[2].ok == 0);
    CHECK(rows[0].H > rows[1].H);

    blb_bubble_free(b);
    blb_geometry_free(g);
    blb_profile_free(p);
}

TEST_CASE("capi: flow and bounds") {
    const double len[1] = {1.0};
    blb_field* f = nullptr;
    REQUIRE(blb_field_random(1, len, 64, 2, 100.0, 1.0, 7, &f) == BLB_OK);
    double area = 0, vol = 0;
    CHECK(blb_field_area(f, &area) == BLB_OK);
    CHECK(blb_field_volume(f, &vol) == BLB_OK);
    CHECK(area > 0);

    long rows_seen = 0;
    auto cb = [](long, double, double, double, void* user) { ++*static_cast<long*>(user); };
    blb_descent_summary sum{};
    REQUIRE(blb_flow_descend(f, 100000, 2e-3, cb, &rows_seen, &sum) == BLB_OK);
    CHECK(sum.converged == 1);
    CHECK(sum.volume_drift_rel <= 1e-10);
    CHECK(rows_seen == sum.steps + 1);
    blb_field_free(f);

    double om = 0;
    CHECK(blb_unit_ball_volume(2, &om) == BLB_OK);
    CHECK(om == doctest::Approx(M_PI));
    double H0 = 0;
    int flag = -1;
    CHECK(blb_H0_large_bubble(3, 1, 6.0, &H0, &flag) == BLB_OK);
    CHECK(H0 == doctest::Approx(6.0));
    CHECK(flag == 0);

    blb_bounds_input in{};
    in.n = 1;
    in.d = 3;
    in.v = 4.0;
    in.H = 2.0;
    in.area = 9.0;
    in.x0_measure = 1.0;
    in.is_soap_bubble = 1;
    blb_ineq_row rows[8];
    int count = 0;
    REQUIRE(blb_check_inequalities(&in, rows, 8, &count) == BLB_OK);
    bool saw = false;
    for (int i = 0; i < count; ++i) {
        if (std::string(rows[i].inequality) == "graph-area-n1") {
            saw = true;
            CHECK(rows[i].applicable == 1);
            CHECK(rows[i].margin == doctest::Approx(4.0 * 2.0 + 2.0 - 9.0));
            CHECK(rows[i].pass == 1);
        }
    }
    CHECK(saw);
}

TEST_CASE("capi: embedding exports") {
    blb_profile* p = nullptr;
    blb_geometry* g = nullptr;
    REQUIRE(blb_profile_builtin("ex1", 0.05, &p) == BLB_OK);
    REQUIRE(blb_geometry_create(p, 0.1, &g) == BLB_OK);

    double cmax = 0;
    int bounded = 0;
    CHECK(blb_embed_max_c(g, -1.0, 1.0, &cmax, &bounded) == BLB_OK);
    CHECK(bounded == 1);
    CHECK(cmax > 0.1);

    blb_curve* c = nullptr;
    REQUIRE(blb_embed_revolution(g, -1.0, 1.0, 2001, &c) == BLB_OK);
    double defect = 1.0;
    CHECK(blb_curve_unit_speed_defect(c, &defect) == BLB_OK);
    CHECK(defect < 1e-6);
    CHECK(blb_export_obj_curve(c, 16, "capi_band.obj") == BLB_OK);

    blb_bubble* b = nullptr;
    REQUIRE(blb_bubble_solve(g, 0.4, 256, &b) == BLB_OK);
    CHECK(blb_export_obj_bubble(b, g, 24, 16, "capi_torus.obj") == BLB_OK);
    CHECK(blb_export_svg_profile(b, "capi_profile.svg") == BLB_OK);

    std::remove("capi_band.obj");
    std::remove("capi_torus.obj");
    std::remove("capi_profile.svg");
    blb_bubble_free(b);
    blb_curve_free(c);
    blb_geometry_free(g);
    blb_profile_free(p);
}
