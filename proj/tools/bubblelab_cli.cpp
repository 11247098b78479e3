// bubblelab command-line front end. Talks to the core exclusively through
// the C API in bubblelab/bubblelab.h; all numeric output is printed with
// %.17g so a fixed seed yields byte-identical artifacts.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bubblelab/bubblelab.h"

namespace {

[[noreturn]] void fail(blb_status st) {
    const char* code = "numerical-failure";
    int exit_code = 1;
    switch (st) {
        case BLB_INVALID_INPUT:
            code = "invalid-input";
            exit_code = 2;
            break;
        case BLB_UNDEFINED_BOUND:
            code = "undefined-bound";
            exit_code = 2;
            break;
        case BLB_IO_ERROR:
            code = "io-error";
            exit_code = 1;
            break;
        default:
            break;
    }
    std::fflush(stdout);
    std::fprintf(stderr, "BLB_ERROR %s: %s\n", code, blb_last_error());
    std::exit(exit_code);
}

void check(blb_status st) {
    if (st != BLB_OK) fail(st);
}

std::FILE* open_out(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    const std::string path = dir + "/" + name;
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) {
        std::fprintf(stderr, "BLB_ERROR io-error: cannot open %s\n", path.c_str());
        std::exit(1);
    }
    return fp;
}

struct ProfileArgs {
    std::string profile = "ex1";
    double eps = 0.05;
    double c = 1.0;
};

void add_profile_flags(CLI::App* cmd, ProfileArgs& a) {
    cmd->add_option("--profile", a.profile, "builtin name (ex1|ex2) or path to a s,phi CSV");
    cmd->add_option("--eps", a.eps, "interval margin for builtin profiles")->check(CLI::PositiveNumber);
    cmd->add_option("--c", a.c, "warp constant")->check(CLI::PositiveNumber);
}

blb_geometry* make_geometry(const ProfileArgs& a) {
    blb_profile* p = nullptr;
    // anything path-like is a sampled-profile CSV; bare names are builtins
    const bool is_path = a.profile.find('/') != std::string::npos ||
                         a.profile.find(".csv") != std::string::npos;
    if (is_path)
        check(blb_profile_from_csv(a.profile.c_str(), &p));
    else
        check(blb_profile_builtin(a.profile.c_str(), a.eps, &p));
    blb_geometry* g = nullptr;
    check(blb_geometry_create(p, a.c, &g));
    blb_profile_free(p);
    return g;
}

std::vector<double> s1_values(double s1, double lo, double hi, int count) {
    std::vector<double> out;
    if (count > 0) {
        for (int i = 0; i < count; ++i)
            out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    } else {
        out.push_back(s1);
    }
    return out;
}

int cmd_family(const ProfileArgs& pa, double s1, double lo, double hi, int count, int nodes,
               bool dump_profiles, const std::string& out) {
    blb_geometry* g = make_geometry(pa);
    const std::vector<double> list = s1_values(s1, lo, hi, count);
    std::vector<blb_sweep_row> rows(list.size());
    check(blb_family_sweep(g, list.data(), static_cast<int>(list.size()), nodes, rows.data()));

    std::FILE* fp = open_out(out, "family.csv");
    std::fprintf(fp, "s1,H,V,A_lat,u_max,beta_margin\n");
    int fail_code = 0;
    for (const auto& r : rows) {
        if (r.ok) {
            std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.s1, r.H, r.V, r.A_lat,
                         r.u_max, r.beta_margin);
        } else {
            std::fprintf(stderr, "BLB_ERROR invalid-input: s1=%.17g: %s\n", r.s1, r.error);
            fail_code = 2;
        }
    }
    std::fclose(fp);

    if (dump_profiles) {
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (!rows[i].ok) continue;
            blb_bubble* b = nullptr;
            check(blb_bubble_solve(g, list[i], nodes, &b));
            int n = 0;
            check(blb_bubble_node_count(b, &n));
            std::vector<double> alpha(static_cast<size_t>(n)), s(static_cast<size_t>(n)),
                u(static_cast<size_t>(n)), t(static_cast<size_t>(n));
            check(blb_bubble_nodes(b, alpha.data(), s.data(), u.data(), t.data()));
            char name[64];
            std::snprintf(name, sizeof(name), "profile_%03zu.csv", i);
            std::FILE* pf = open_out(out, name);
            std::fprintf(pf, "alpha,s,u,t\n");
            for (int j = 0; j < n; ++j)
                std::fprintf(pf, "%.17g,%.17g,%.17g,%.17g\n", alpha[static_cast<size_t>(j)],
                             s[static_cast<size_t>(j)], u[static_cast<size_t>(j)],
                             t[static_cast<size_t>(j)]);
            std::fclose(pf);
            blb_bubble_free(b);
        }
    }
    blb_geometry_free(g);
    if (fail_code == 0)
        std::printf("family: %zu members -> %s/family.csv\n", list.size(), out.c_str());
    return fail_code;
}

int cmd_stability(const ProfileArgs& pa, double s1, int nodes, int k_max, int modes, double tol,
                  const std::string& out) {
    blb_geometry* g = make_geometry(pa);
    blb_bubble* b = nullptr;
    check(blb_bubble_solve(g, s1, nodes, &b));
    blb_stability* st = nullptr;
    check(blb_stability_analyze(b, g, k_max, modes, tol, &st));

    char* js = nullptr;
    check(blb_stability_json(st, &js));
    std::FILE* fp = open_out(out, "stability.json");
    std::fputs(js, fp);
    std::fputc('\n', fp);
    std::fclose(fp);
    blb_string_free(js);

    int verdict = 2;
    double beta = 0, ratio = 0, resid = 0, amin = 0;
    check(blb_stability_verdict(st, &verdict));
    check(blb_stability_scalars(st, &beta, &ratio, &resid, &amin));
    const char* names[3] = {"stable", "unstable", "marginal"};
    std::printf("stability: s1=%.17g verdict=%s ratio=%.17g beta=%.17g admissible_min=%.17g\n", s1,
                names[verdict], ratio, beta, amin);

    blb_stability_free(st);
    blb_bubble_free(b);
    blb_geometry_free(g);
    return 0;
}

struct FlowArgs {
    int k = 1;
    std::vector<double> lengths = {1.0};
    int resolution = 64;
    int ball_dim = 2;
    double a = 100.0;
    double tau_inf = 1.0;
    std::uint64_t seed = 1;
    long steps = 100000;
    double step_size = 2e-3;
    std::string field_csv;
    int ineq_trials = 0;
    double ineq_C = 1.0;
    double ineq_cprime = 1.0;
};

int cmd_flow(const FlowArgs& fa, const std::string& out) {
    if (fa.lengths.empty() || static_cast<int>(fa.lengths.size()) < fa.k) {
        std::fprintf(stderr, "BLB_ERROR invalid-input: need %d --lengths entries\n", fa.k);
        return 2;
    }
    blb_field* f = nullptr;
    if (!fa.field_csv.empty())
        check(blb_field_from_csv(fa.k, fa.lengths.data(), fa.resolution, fa.ball_dim,
                                 fa.field_csv.c_str(), &f));
    else
        check(blb_field_random(fa.k, fa.lengths.data(), fa.resolution, fa.ball_dim, fa.a,
                               fa.tau_inf, fa.seed, &f));

    std::FILE* fp = open_out(out, "flow.csv");
    std::fprintf(fp, "step,area,volume,tau_inf_over_a\n");
    auto cb = [](long step, double area, double volume, double tau, void* user) {
        std::fprintf(static_cast<std::FILE*>(user), "%ld,%.17g,%.17g,%.17g\n", step, area, volume,
                     tau);
    };
    blb_descent_summary sum{};
    check(blb_flow_descend(f, fa.steps, fa.step_size, cb, fp, &sum));
    std::fclose(fp);
    std::printf("flow: steps=%ld converged=%d final_area=%.17g volume_drift=%.3g tau/a=%.3g\n",
                sum.steps, sum.converged, sum.final_area, sum.volume_drift_rel,
                sum.tau_inf_over_a);

    double lambda1 = 0;
    check(blb_field_stats(f, nullptr, nullptr, &lambda1));

    if (fa.ineq_trials > 0) {
        int all_hold = 0;
        double worst = 0;
        check(blb_variation_bound_trials(fa.k, fa.lengths.data(), fa.resolution, fa.ball_dim, fa.a,
                                 fa.ineq_C, fa.ineq_cprime, fa.ineq_trials, fa.seed,
                                 &all_hold, &worst));
        // proof-extracted C'' and the large-volume threshold it implies
        blb_field* probe = nullptr;
        check(blb_field_constant(fa.k, fa.lengths.data(), fa.resolution, fa.ball_dim, fa.a,
                                 &probe));
        int holds = 0;
        double margin = 0, cpp = 0;
        check(blb_variation_bound_check(probe, fa.ineq_C, fa.ineq_cprime, &holds, &margin, &cpp));
        blb_field_free(probe);
        double thr = 0;
        check(blb_large_volume_margin(fa.a, fa.ball_dim, lambda1, cpp, &thr));
        std::FILE* lf = open_out(out, "variation_bound.csv");
        std::fprintf(lf,
                     "trials,all_hold,worst_margin,c_doubleprime,witness_constant,threshold_margin\n");
        std::fprintf(lf, "%d,%d,%.17g,%.17g,1,%.17g\n", fa.ineq_trials, all_hold, worst, cpp,
                     thr);
        std::fclose(lf);
        std::printf("variation-bound: trials=%d all_hold=%d worst_margin=%.17g threshold_margin=%.17g\n",
                    fa.ineq_trials, all_hold, worst, thr);
        if (!all_hold) {
            blb_field_free(f);
            return 1;
        }
    }

    blb_field_free(f);
    return 0;
}

int cmd_bounds_family(const ProfileArgs& pa, double s1, double lo, double hi, int count, int nodes,
                      const std::string& out) {
    blb_geometry* g = make_geometry(pa);
    const std::vector<double> list = s1_values(s1, lo, hi, count);
    std::vector<blb_sweep_row> rows(list.size());
    check(blb_family_sweep(g, list.data(), static_cast<int>(list.size()), nodes, rows.data()));

    double worst_hineq = 1e300, worst_dim1 = 1e300;
    bool all_pass = true;
    double env_Hu = 0.0, env_rho_v = 0.0, floor_H = 1e300;
    for (const auto& r : rows) {
        if (!r.ok) {
            std::fprintf(stderr, "BLB_ERROR invalid-input: s1=%.17g: %s\n", r.s1, r.error);
            all_pass = false;
            continue;
        }
        blb_bubble* b = nullptr;
        check(blb_bubble_solve(g, r.s1, nodes, &b));
        double x0 = 0;
        check(blb_bubble_scalars(b, nullptr, nullptr, nullptr, nullptr, &x0));
        blb_bubble_free(b);
        blb_bounds_input in{};
        in.d = 3;
        in.n = 1;
        in.v = r.V;
        in.H = r.H;
        in.area = r.A_lat;
        in.x0_measure = x0;
        in.is_soap_bubble = 1;
        blb_ineq_row out_rows[8];
        int nrows = 0;
        check(blb_check_inequalities(&in, out_rows, 8, &nrows));
        for (int i = 0; i < nrows; ++i) {
            if (!out_rows[i].applicable) continue;
            all_pass = all_pass && out_rows[i].pass;
            if (std::strcmp(out_rows[i].inequality, "vH-le-area") == 0)
                worst_hineq = std::min(worst_hineq, out_rows[i].margin);
            if (std::strcmp(out_rows[i].inequality, "graph-area-n1") == 0)
                worst_dim1 = std::min(worst_dim1, out_rows[i].margin);
        }
        env_Hu = std::max(env_Hu, r.H * r.u_max);
        env_rho_v = std::max(env_rho_v, r.u_max / r.V);
        floor_H = std::min(floor_H, r.H);
    }

    std::FILE* fp = open_out(out, "bounds.csv");
    std::fprintf(fp, "inequality,applicable,margin,pass\n");
    std::fprintf(fp, "vH-le-area,1,%.17g,%d\n", worst_hineq, worst_hineq >= 0.0);
    std::fprintf(fp, "graph-area-n1,1,%.17g,%d\n", worst_dim1, worst_dim1 >= 0.0);
    std::fprintf(fp, "H-floor,1,%.17g,%d\n", floor_H, floor_H > 0.0);
    // envelopes are recorded observations, never asserted
    std::fprintf(fp, "oscillation-envelope,1,%.17g,1\n", env_Hu);
    std::fprintf(fp, "radius-volume-envelope,1,%.17g,1\n", env_rho_v);
    std::fclose(fp);
    blb_geometry_free(g);
    std::printf(
        "bounds: %zu members -> %s/bounds.csv (vH-le-area margin %.6g, graph-area-n1 margin %.6g)\n",
        list.size(), out.c_str(), worst_hineq, worst_dim1);
    return all_pass ? 0 : 1;
}

int cmd_embed(const ProfileArgs& pa, std::vector<double> interval, int samples, int n_theta,
              double s1, int n_profile, int nodes, const std::string& out) {
    blb_geometry* g = make_geometry(pa);
    if (interval.size() != 2) interval = {-1.0, 1.0};

    double cmax = 0;
    int bounded = 0;
    check(blb_embed_max_c(g, interval[0], interval[1], &cmax, &bounded));
    if (bounded)
        std::printf("embed: c_max = %.17g on [%g, %g]\n", cmax, interval[0], interval[1]);
    else
        std::printf("embed: |f'| vanishes on [%g, %g]; any c embeds\n", interval[0], interval[1]);

    blb_curve* c = nullptr;
    check(blb_embed_revolution(g, interval[0], interval[1], samples, &c));
    double defect = 0;
    check(blb_curve_unit_speed_defect(c, &defect));
    std::filesystem::create_directories(out);
    check(blb_export_obj_curve(c, n_theta, (out + "/y_surface.obj").c_str()));
    std::printf("embed: y_surface.obj written (unit-speed defect %.3g)\n", defect);
    blb_curve_free(c);

    if (s1 > 0.0) {
        blb_bubble* b = nullptr;
        check(blb_bubble_solve(g, s1, nodes, &b));
        check(blb_export_obj_bubble(b, g, n_profile, n_theta, (out + "/bubble_torus.obj").c_str()));
        check(blb_export_svg_profile(b, (out + "/profile.svg").c_str()));
        std::printf("embed: bubble_torus.obj + profile.svg written for s1=%.17g\n", s1);
        blb_bubble_free(b);
    }
    blb_geometry_free(g);
    return 0;
}

}  // namespace

namespace {

// --spec FILE: flat key=value lines mirroring the flags; spliced into argv so
// every subcommand option is reachable without section headers.
std::vector<std::string> splice_spec_file(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 0; i < argc; ++i) {
        const std::string a = argv[i];
        std::string path;
        if (a == "--spec" && i + 1 < argc) {
            path = argv[++i];
        } else if (a.rfind("--spec=", 0) == 0) {
            path = a.substr(7);
        } else {
            args.push_back(a);
            continue;
        }
        std::FILE* fp = std::fopen(path.c_str(), "r");
        if (!fp) {
            std::fprintf(stderr, "BLB_ERROR io-error: cannot open spec file %s\n", path.c_str());
            std::exit(1);
        }
        char line[512];
        while (std::fgets(line, sizeof(line), fp)) {
            std::string s = line;
            while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' '))
                s.pop_back();
            if (s.empty() || s[0] == '#') continue;
            const std::size_t eq = s.find('=');
            if (eq == std::string::npos) {
                std::fprintf(stderr, "BLB_ERROR invalid-input: spec file line '%s' is not key=value\n",
                             s.c_str());
                std::exit(2);
            }
            args.push_back("--" + s.substr(0, eq));
            args.push_back(s.substr(eq + 1));
        }
        std::fclose(fp);
    }
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"soap-bubble laboratory for warped products Y x R"};
    app.require_subcommand(1);
    app.fallthrough();
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);


    std::string out = ".";
    app.add_option("--out", out, "output directory")->capture_default_str();

    ProfileArgs pa;
    double s1 = 0.4, s1_lo = 0.0, s1_hi = 0.0;
    int s1_count = 0, nodes = 2000;
    bool dump_profiles = false;

    auto* family =
        app.add_subcommand("family", "construct CMC bubbles S_{s1} and sweep the family");
    family->fallthrough();
    add_profile_flags(family, pa);
    family->add_option("--s1", s1, "single family parameter in (0, s0)");
    family->add_option("--s1-min", s1_lo, "sweep start");
    family->add_option("--s1-max", s1_hi, "sweep end");
    family->add_option("--s1-count", s1_count, "sweep size (enables sweep mode)");
    family->add_option("--nodes", nodes, "profile nodes")->capture_default_str();
    family->add_flag("--dump-profiles", dump_profiles, "write per-member alpha,s,u,t CSVs");

    int k_max = 16, modes = 6;
    double tol = 1e-7;
    auto* stability = app.add_subcommand("stability", "spectral stability verdict for one bubble");
    stability->fallthrough();
    add_profile_flags(stability, pa);
    stability->add_option("--s1", s1, "family parameter");
    stability->add_option("--nodes", nodes, "profile nodes")->capture_default_str();
    stability->add_option("--k-max", k_max, "largest Fourier mode")->capture_default_str();
    stability->add_option("--modes", modes, "eigenvalues per sector")->capture_default_str();
    stability->add_option("--tol", tol, "relative verdict tolerance")->capture_default_str();

    FlowArgs fa;
    auto* flow = app.add_subcommand("flow", "volume-constrained descent of the slice-volume area");
    flow->fallthrough();
    flow->add_option("--k", fa.k, "torus dimension (1 or 2)")->capture_default_str();
    flow->add_option("--lengths", fa.lengths, "per-axis periods")->expected(1, 2);
    flow->add_option("--resolution", fa.resolution, "nodes per axis")->capture_default_str();
    flow->add_option("--ball-dim", fa.ball_dim, "Euclidean ball dimension n")->capture_default_str();
    flow->add_option("--a", fa.a, "mean slice volume")->capture_default_str();
    flow->add_option("--tau-inf", fa.tau_inf, "initial fluctuation amplitude")
        ->capture_default_str();
    flow->add_option("--seed", fa.seed, "RNG seed")->capture_default_str();
    flow->add_option("--steps", fa.steps, "max descent steps")->capture_default_str();
    flow->add_option("--step-size", fa.step_size, "initial step")->capture_default_str();
    flow->add_option("--field", fa.field_csv, "initial sigma field CSV (overrides random init)");
    flow->add_option("--ineq-trials", fa.ineq_trials, "random admissible-field checks");
    flow->add_option("--ineq-C", fa.ineq_C, "oscillation constant C")->capture_default_str();
    flow->add_option("--ineq-cprime", fa.ineq_cprime, "gradient bound C'")
        ->capture_default_str();

    auto* bounds = app.add_subcommand("bounds", "closed-form bound calculators and family checks");
    bounds->fallthrough();
    add_profile_flags(bounds, pa);
    bounds->add_option("--s1", s1, "single member");
    bounds->add_option("--s1-min", s1_lo, "sweep start");
    bounds->add_option("--s1-max", s1_hi, "sweep end");
    bounds->add_option("--s1-count", s1_count, "sweep size");
    bounds->add_option("--nodes", nodes, "profile nodes")->capture_default_str();
    std::string calc;
    int cd = 3, cn = 1;
    double cr0 = 0.0, cvolx = 1.0, cv = 1.0, crho1 = 1.0, cH = 1.0, cC = 1.0;
    bounds->add_option("--calc", calc, "calculator: h0 | isop | ric | slope (skips family mode)");
    bounds->add_option("--d", cd, "ambient dimension");
    bounds->add_option("--n", cn, "Euclidean factor dimension");
    bounds->add_option("--r0", cr0, "Ricci negativity bound R0");
    bounds->add_option("--vol-x", cvolx, "|X|");
    bounds->add_option("--v", cv, "enclosed volume");
    bounds->add_option("--rho1", crho1, "max radius");
    bounds->add_option("--H", cH, "mean curvature");
    bounds->add_option("--C", cC, "radius oscillation");

    std::vector<double> interval;
    int samples = 4001, n_theta = 64, n_profile = 256;
    double embed_s1 = 0.0;
    auto* embed = app.add_subcommand("embed", "realize (Y, G_c) in R^3 and export meshes/plots");
    embed->fallthrough();
    add_profile_flags(embed, pa);
    embed->add_option("--interval", interval, "s-range a,b")->expected(2);
    embed->add_option("--samples", samples, "curve samples")->capture_default_str();
    embed->add_option("--n-theta", n_theta, "angular mesh resolution")->capture_default_str();
    embed->add_option("--s1", embed_s1, "also export this bubble's torus and profile SVG");
    embed->add_option("--n-profile", n_profile, "profile loop resolution")->capture_default_str();
    embed->add_option("--nodes", nodes, "bubble profile nodes")->capture_default_str();

    const std::vector<std::string> args = splice_spec_file(argc, argv);
    std::vector<const char*> argv2;
    argv2.reserve(args.size());
    for (const auto& a : args) argv2.push_back(a.c_str());
    CLI11_PARSE(app, static_cast<int>(argv2.size()), argv2.data());

    if (family->parsed())
        return cmd_family(pa, s1, s1_lo, s1_hi, s1_count, nodes, dump_profiles, out);
    if (stability->parsed()) return cmd_stability(pa, s1, nodes, k_max, modes, tol, out);
    if (flow->parsed()) return cmd_flow(fa, out);
    if (bounds->parsed()) {
        if (calc.empty()) return cmd_bounds_family(pa, s1, s1_lo, s1_hi, s1_count, nodes, out);
        if (calc == "h0") {
            double H0 = 0;
            int flag = 0;
            check(blb_H0_large_bubble(cd, cn, cr0, &H0, &flag));
            std::printf("H0=%.17g ric_nonneg=%d\n", H0, flag);
            return 0;
        }
        if (calc == "isop") {
            double b = 0, b2 = 0;
            check(blb_isop_H_bound(cn, cvolx, cv, 0, &b));
            check(blb_isop_H_bound(cn, cvolx, cv, 1, &b2));
            std::printf("isop_H=%.17g obstacle_variant=%.17g\n", b, b2);
            return 0;
        }
        if (calc == "ric") {
            double b = 0;
            check(blb_ric_nonneg_H_bound(cd, cn, crho1, &b));
            std::printf("ric_nonneg_H=%.17g\n", b);
            return 0;
        }
        if (calc == "slope") {
            double C1 = 0, Cp = 0, lCp = 0;
            check(blb_slope_bound_constants(cn, cH, cC, cr0, &C1, &Cp, &lCp));
            std::printf("C1=%.17g C_prime=%.17g log_C_prime=%.17g\n", C1, Cp, lCp);
            return 0;
        }
        std::fprintf(stderr, "BLB_ERROR invalid-input: unknown --calc '%s'\n", calc.c_str());
        return 2;
    }
    if (embed->parsed())
        return cmd_embed(pa, interval, samples, n_theta, embed_s1, n_profile, nodes, out);
    return 2;
}
