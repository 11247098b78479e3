#include "bubblelab/bubblelab.h"

#include <cstring>
#include <string>

#include "bubblelab/bounds.hpp"
#include "bubblelab/bubble.hpp"
#include "bubblelab/embed.hpp"
#include "bubblelab/errors.hpp"
#include "bubblelab/flow.hpp"
#include "bubblelab/geometry.hpp"
#include "bubblelab/profile.hpp"
#include "bubblelab/stability.hpp"

using namespace bubblelab;

struct blb_profile {
    PhiProfile p;
};
struct blb_geometry {
    WarpedGeometry g;
};
struct blb_bubble {
    BubbleProfile b;
};
struct blb_stability {
    StabilityReport r;
};
struct blb_curve {
    RevolutionCurve c;
};
struct blb_field {
    SigmaField f;
};

namespace {

thread_local std::string t_last_error;

blb_status to_status(const Error& e) {
    t_last_error = e.what();
    return static_cast<blb_status>(static_cast<int>(e.code()));
}

template <typename Fn>
blb_status guarded(Fn&& fn) {
    try {
        fn();
        t_last_error.clear();
        return BLB_OK;
    } catch (const Error& e) {
        return to_status(e);
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return BLB_NUMERICAL_FAILURE;
    }
}

blb_status require(bool cond, const char* msg) {
    if (cond) return BLB_OK;
    t_last_error = msg;
    return BLB_INVALID_INPUT;
}

}  // namespace

extern "C" {

const char* blb_version(void) { return "0.1.0"; }
const char* blb_last_error(void) { return t_last_error.c_str(); }

/* ---- profiles -------------------------------------------------------- */

blb_status blb_profile_builtin(const char* name, double eps, blb_profile** out) {
    if (blb_status s = require(name && out, "null argument")) return s;
    return guarded([&] { *out = new blb_profile{make_builtin_profile(name, eps)}; });
}

blb_status blb_profile_from_csv(const char* path, blb_profile** out) {
    if (blb_status s = require(path && out, "null argument")) return s;
    return guarded([&] { *out = new blb_profile{load_profile_csv(path)}; });
}

void blb_profile_free(blb_profile* p) { delete p; }

blb_status blb_profile_eval(const blb_profile* p, double s, double* phi, double* phi_s,
                            double* phi_ss) {
    if (blb_status st = require(p != nullptr, "null profile")) return st;
    return guarded([&] {
        if (phi) *phi = p->p.phi(s);
        if (phi_s) *phi_s = p->p.phi_s(s);
        if (phi_ss) *phi_ss = p->p.phi_ss(s);
    });
}

blb_status blb_profile_s_max(const blb_profile* p, double* s_max) {
    if (blb_status st = require(p && s_max, "null argument")) return st;
    *s_max = p->p.s_max;
    return BLB_OK;
}

blb_status blb_profile_s0(const blb_profile* p, double* s0, int* present, int* pattern_ok) {
    if (blb_status st = require(p != nullptr, "null profile")) return st;
    if (present) *present = p->p.s0.has_value();
    if (s0) *s0 = p->p.s0.value_or(0.0);
    if (pattern_ok) *pattern_ok = p->p.s0_pattern_ok;
    return BLB_OK;
}

blb_status blb_profile_validate(const blb_profile* p, char* buf, size_t buf_len, int* count) {
    if (blb_status st = require(p != nullptr, "null profile")) return st;
    return guarded([&] {
        const auto diags = validate_profile(p->p);
        if (count) *count = static_cast<int>(diags.size());
        if (buf && buf_len > 0) {
            size_t pos = 0;
            for (const auto& d : diags) {
                const std::string line = d.code + ": " + d.message;
                const size_t need = line.size() + 1;
                if (pos + need > buf_len) break;
                std::memcpy(buf + pos, line.c_str(), need);
                pos += need;
            }
            if (pos < buf_len) buf[pos] = '\0';
        }
    });
}

/* ---- geometry --------------------------------------------------------- */

blb_status blb_geometry_create(const blb_profile* p, double c, blb_geometry** out) {
    if (blb_status st = require(p && out, "null argument")) return st;
    return guarded([&] { *out = new blb_geometry{f_from_phi(p->p, c)}; });
}

void blb_geometry_free(blb_geometry* g) { delete g; }

blb_status blb_geometry_eval(const blb_geometry* g, double s, double* f, double* f_s, double* f_ss,
                             double* F) {
    if (blb_status st = require(g != nullptr, "null geometry")) return st;
    return guarded([&] {
        if (f) *f = g->g.f(s);
        if (f_s) *f_s = g->g.f_s(s);
        if (f_ss) *f_ss = g->g.f_ss(s);
        if (F) *F = g->g.F(s);
    });
}

blb_status blb_geometry_gauss_curvature(const blb_geometry* g, double s, double* K) {
    if (blb_status st = require(g && K, "null argument")) return st;
    return guarded([&] { *K = g->g.gauss_curvature(s); });
}

blb_status blb_geometry_log_f_convexity(const blb_geometry* g, double a, double b,
                                        double* min_val) {
    if (blb_status st = require(g && min_val, "null argument")) return st;
    return guarded([&] { *min_val = log_f_convexity(g->g, a, b); });
}

blb_status blb_geometry_ricci_R0(const blb_geometry* g, double a, double b, double* R0) {
    if (blb_status st = require(g && R0, "null argument")) return st;
    return guarded([&] { *R0 = ricci_bound_R0(g->g, a, b); });
}

blb_status blb_geometry_beta(const blb_geometry* g, int mode, double s1_frozen, double* out) {
    if (blb_status st = require(g && out, "null argument")) return st;
    return guarded([&] {
        *out = beta(g->g, mode == 0 ? BetaMode::phi_s : BetaMode::frozen_phi_s1, s1_frozen);
    });
}

/* ---- bubbles ----------------------------------------------------------- */

blb_status blb_bubble_solve(const blb_geometry* g, double s1, int n_nodes, blb_bubble** out) {
    if (blb_status st = require(g && out, "null argument")) return st;
    return guarded([&] { *out = new blb_bubble{solve_profile(g->g, s1, n_nodes)}; });
}

void blb_bubble_free(blb_bubble* b) { delete b; }

blb_status blb_bubble_scalars(const blb_bubble* b, double* H, double* V, double* A_lat,
                              double* u_max, double* x0_measure) {
    if (blb_status st = require(b != nullptr, "null bubble")) return st;
    if (H) *H = b->b.H;
    if (V) *V = b->b.V;
    if (A_lat) *A_lat = b->b.A_lat;
    if (u_max) *u_max = b->b.u_max;
    if (x0_measure) *x0_measure = b->b.x0_measure;
    return BLB_OK;
}

blb_status blb_bubble_node_count(const blb_bubble* b, int* n) {
    if (blb_status st = require(b && n, "null argument")) return st;
    *n = b->b.node_count();
    return BLB_OK;
}

blb_status blb_bubble_nodes(const blb_bubble* b, double* alpha, double* s, double* u, double* t) {
    if (blb_status st = require(b != nullptr, "null bubble")) return st;
    const size_t n = b->b.alpha.size();
    if (alpha) std::memcpy(alpha, b->b.alpha.data(), n * sizeof(double));
    if (s) std::memcpy(s, b->b.s.data(), n * sizeof(double));
    if (u) std::memcpy(u, b->b.u.data(), n * sizeof(double));
    if (t) std::memcpy(t, b->b.t.data(), n * sizeof(double));
    return BLB_OK;
}

blb_status blb_bubble_cmc_residual(const blb_bubble* b, const blb_geometry* g, double* residual) {
    if (blb_status st = require(b && g && residual, "null argument")) return st;
    return guarded([&] { *residual = mean_curvature_residual(b->b, g->g); });
}

blb_status blb_volume_to_s1(const blb_geometry* g, double v, int n_nodes, double* s1) {
    if (blb_status st = require(g && s1, "null argument")) return st;
    return guarded([&] { *s1 = volume_to_s1(g->g, v, n_nodes); });
}

blb_status blb_family_sweep(const blb_geometry* g, const double* s1_list, int count, int n_nodes,
                            blb_sweep_row* rows) {
    if (blb_status st = require(g && s1_list && rows && count >= 0, "null argument")) return st;
    return guarded([&] {
        const std::vector<double> list(s1_list, s1_list + count);
        const auto result = family_sweep(g->g, list, n_nodes);
        for (int i = 0; i < count; ++i) {
            const SweepRow& r = result[static_cast<size_t>(i)];
            blb_sweep_row& o = rows[i];
            o.s1 = r.s1;
            o.ok = r.ok ? 1 : 0;
            o.H = r.H;
            o.V = r.V;
            o.A_lat = r.A_lat;
            o.u_max = r.u_max;
            o.beta_margin = r.beta_margin;
            std::strncpy(o.error, r.error.c_str(), sizeof(o.error) - 1);
            o.error[sizeof(o.error) - 1] = '\0';
        }
    });
}

/* ---- stability --------------------------------------------------------- */

blb_status blb_stability_analyze(const blb_bubble* b, const blb_geometry* g, int k_max, int m,
                                 double tol_rel, blb_stability** out) {
    if (blb_status st = require(b && g && out, "null argument")) return st;
    return guarded([&] {
        StabilityOptions opts;
        if (k_max > 0) opts.k_max = k_max;
        if (m > 0) opts.m = m;
        if (tol_rel > 0) opts.tol_rel = tol_rel;
        *out = new blb_stability{stability_verdict(b->b, g->g, opts)};
    });
}

void blb_stability_free(blb_stability* s) { delete s; }

blb_status blb_stability_verdict(const blb_stability* s, int* verdict) {
    if (blb_status st = require(s && verdict, "null argument")) return st;
    *verdict = static_cast<int>(s->r.verdict);
    return BLB_OK;
}

blb_status blb_stability_scalars(const blb_stability* s, double* beta, double* ratio,
                                 double* translation_residual, double* admissible_min) {
    if (blb_status st = require(s != nullptr, "null report")) return st;
    if (beta) *beta = s->r.beta;
    if (ratio) *ratio = s->r.ratio;
    if (translation_residual) *translation_residual = s->r.translation_residual;
    if (admissible_min) *admissible_min = s->r.admissible_min;
    return BLB_OK;
}

blb_status blb_stability_json(const blb_stability* s, char** json) {
    if (blb_status st = require(s && json, "null argument")) return st;
    return guarded([&] {
        const std::string str = stability_report_json(s->r);
        char* mem = new char[str.size() + 1];
        std::memcpy(mem, str.c_str(), str.size() + 1);
        *json = mem;
    });
}

void blb_string_free(char* s) { delete[] s; }

blb_status blb_jacobi_field_residual(const blb_bubble* b, const blb_geometry* g,
                                     double* residual) {
    if (blb_status st = require(b && g && residual, "null argument")) return st;
    return guarded([&] { *residual = jacobi_field_residual(b->b, g->g); });
}

blb_status blb_odd_sector_identity_defect(const blb_bubble* b, const blb_geometry* g, double* defect) {
    if (blb_status st = require(b && g && defect, "null argument")) return st;
    return guarded([&] { *defect = odd_sector_identity_defect(b->b, g->g); });
}

/* ---- flow -------------------------------------------------------------- */

blb_status blb_field_constant(int dim, const double* lengths, int resolution, int n, double a,
                              blb_field** out) {
    if (blb_status st = require(lengths && out, "null argument")) return st;
    return guarded(
        [&] { *out = new blb_field{make_constant_field(make_torus(dim, lengths, resolution), n, a)}; });
}

blb_status blb_field_random(int dim, const double* lengths, int resolution, int n, double a,
                            double tau_inf, uint64_t seed, blb_field** out) {
    if (blb_status st = require(lengths && out, "null argument")) return st;
    return guarded([&] {
        *out = new blb_field{
            make_random_field(make_torus(dim, lengths, resolution), n, a, tau_inf, seed)};
    });
}

blb_status blb_field_from_csv(int dim, const double* lengths, int resolution, int n,
                              const char* path, blb_field** out) {
    if (blb_status st = require(lengths && path && out, "null argument")) return st;
    return guarded([&] {
        *out = new blb_field{load_field_csv(make_torus(dim, lengths, resolution), n, path)};
    });
}

void blb_field_free(blb_field* f) { delete f; }

blb_status blb_field_area(const blb_field* f, double* area) {
    if (blb_status st = require(f && area, "null argument")) return st;
    return guarded([&] { *area = area_functional(f->f); });
}

blb_status blb_field_volume(const blb_field* f, double* volume) {
    if (blb_status st = require(f && volume, "null argument")) return st;
    return guarded([&] { *volume = volume_functional(f->f); });
}

blb_status blb_field_stats(const blb_field* f, double* mean, double* tau_inf, double* lambda1) {
    if (blb_status st = require(f != nullptr, "null field")) return st;
    if (mean) *mean = f->f.mean();
    if (tau_inf) *tau_inf = f->f.tau_inf();
    if (lambda1) *lambda1 = f->f.domain.lambda1();
    return BLB_OK;
}

blb_status blb_flow_descend(const blb_field* f, long max_steps, double step_size,
                            blb_descent_callback on_step, void* user,
                            blb_descent_summary* summary) {
    if (blb_status st = require(f != nullptr, "null field")) return st;
    return guarded([&] {
        const DescentResult res = constrained_descent(f->f, max_steps, step_size);
        if (on_step)
            for (const DescentRow& row : res.trajectory)
                on_step(row.step, row.area, row.volume, row.tau_inf_over_a, user);
        if (summary) {
            summary->steps = res.steps;
            summary->converged = res.converged ? 1 : 0;
            summary->final_area = res.final_area;
            summary->volume_drift_rel = res.volume_drift_rel;
            summary->tau_inf_over_a = res.field.tau_inf() / res.field.mean();
        }
    });
}

blb_status blb_large_volume_margin(double a, int n, double lambda1, double c_doubleprime,
                                 double* margin) {
    if (blb_status st = require(margin != nullptr, "null argument")) return st;
    return guarded([&] { *margin = large_volume_margin(a, n, lambda1, c_doubleprime); });
}

blb_status blb_variation_bound_check(const blb_field* f, double C, double c_prime, int* holds,
                             double* margin, double* c_doubleprime) {
    if (blb_status st = require(f != nullptr, "null field")) return st;
    return guarded([&] {
        const VariationBoundResult r = variation_bound_check(f->f, C, c_prime);
        if (holds) *holds = r.holds ? 1 : 0;
        if (margin) *margin = r.margin;
        if (c_doubleprime) *c_doubleprime = r.c_doubleprime;
    });
}

blb_status blb_variation_bound_trials(int dim, const double* lengths, int resolution, int n, double a,
                              double C, double c_prime, int count, uint64_t seed, int* all_hold,
                              double* worst_margin) {
    if (blb_status st = require(lengths != nullptr, "null argument")) return st;
    return guarded([&] {
        const VariationBoundTrials t = variation_bound_trials(make_torus(dim, lengths, resolution), n, a,
                                                      C, c_prime, count, seed);
        if (all_hold) *all_hold = t.all_hold ? 1 : 0;
        if (worst_margin) *worst_margin = t.worst_margin;
    });
}

blb_status blb_slope_bound_check(const blb_field* f, double c_prime, int* applicable,
                                 double* max_gradient, int* pass) {
    if (blb_status st = require(f != nullptr, "null field")) return st;
    return guarded([&] {
        const SlopeBoundCheck r = verify_slope_bound(f->f, c_prime);
        if (applicable) *applicable = r.applicable ? 1 : 0;
        if (max_gradient) *max_gradient = r.max_gradient;
        if (pass) *pass = r.pass ? 1 : 0;
    });
}

/* ---- bounds ------------------------------------------------------------ */

blb_status blb_unit_ball_volume(int n, double* omega_n) {
    if (blb_status st = require(omega_n != nullptr, "null argument")) return st;
    return guarded([&] { *omega_n = unit_ball_volume(n); });
}

blb_status blb_isop_H_bound(int n, double vol_X, double v, int obstacle, double* bound) {
    if (blb_status st = require(bound != nullptr, "null argument")) return st;
    return guarded([&] { *bound = isop_H_bound(n, vol_X, v, obstacle != 0); });
}

blb_status blb_H0_large_bubble(int d, int n, double R0, double* H0, int* ric_nonneg) {
    if (blb_status st = require(H0 != nullptr, "null argument")) return st;
    return guarded([&] {
        const H0Result r = H0_large_bubble(d, n, R0);
        *H0 = r.H0;
        if (ric_nonneg) *ric_nonneg = r.ric_nonneg ? 1 : 0;
    });
}

blb_status blb_ric_nonneg_H_bound(int d, int n, double rho1, double* bound) {
    if (blb_status st = require(bound != nullptr, "null argument")) return st;
    return guarded([&] { *bound = ric_nonneg_H_bound(d, n, rho1); });
}

blb_status blb_slope_bound_constants(int n, double H, double C, double R0, double* C1,
                                     double* C_prime, double* log_C_prime) {
    if (blb_status st = require(C1 != nullptr, "null argument")) return st;
    return guarded([&] {
        const SlopeConstants r = slope_bound_constants(n, H, C, R0);
        *C1 = r.C1;
        if (C_prime) *C_prime = r.C_prime;
        if (log_C_prime) *log_C_prime = r.log_C_prime;
    });
}

blb_status blb_check_inequalities(const blb_bounds_input* in, blb_ineq_row* rows, int cap,
                                  int* count) {
    if (blb_status st = require(in && rows && count, "null argument")) return st;
    return guarded([&] {
        SurfaceStats stats;
        stats.d = in->d;
        stats.n = in->n;
        stats.vol_X = in->vol_X;
        stats.v = in->v;
        stats.H = in->H;
        stats.area = in->area;
        stats.x0_measure = in->x0_measure;
        stats.rho0 = in->rho0;
        stats.rho1 = in->rho1;
        stats.is_isoperimetric = in->is_isoperimetric != 0;
        stats.is_soap_bubble = in->is_soap_bubble != 0;
        const auto result = check_area_H_volume(stats);
        *count = 0;
        for (const auto& r : result) {
            if (*count >= cap) break;
            blb_ineq_row& o = rows[*count];
            std::strncpy(o.inequality, r.inequality.c_str(), sizeof(o.inequality) - 1);
            o.inequality[sizeof(o.inequality) - 1] = '\0';
            o.applicable = r.applicable ? 1 : 0;
            o.margin = r.margin;
            o.pass = r.pass ? 1 : 0;
            ++*count;
        }
    });
}

/* ---- embedding --------------------------------------------------------- */

blb_status blb_embed_max_c(const blb_geometry* g, double a, double b, double* c_max,
                           int* bounded) {
    if (blb_status st = require(g && c_max, "null argument")) return st;
    return guarded([&] {
        const auto r = max_c_for_embedding(g->g, a, b);
        if (bounded) *bounded = r.has_value() ? 1 : 0;
        *c_max = r.value_or(0.0);
    });
}

blb_status blb_embed_revolution(const blb_geometry* g, double a, double b, int n_samples,
                                blb_curve** out) {
    if (blb_status st = require(g && out, "null argument")) return st;
    return guarded([&] { *out = new blb_curve{embed_revolution(g->g, a, b, n_samples)}; });
}

void blb_curve_free(blb_curve* c) { delete c; }

blb_status blb_curve_sample_count(const blb_curve* c, int* n) {
    if (blb_status st = require(c && n, "null argument")) return st;
    *n = c->c.sample_count();
    return BLB_OK;
}

blb_status blb_curve_samples(const blb_curve* c, double* s, double* r, double* x3) {
    if (blb_status st = require(c != nullptr, "null curve")) return st;
    const size_t n = c->c.s.size();
    if (s) std::memcpy(s, c->c.s.data(), n * sizeof(double));
    if (r) std::memcpy(r, c->c.r.data(), n * sizeof(double));
    if (x3) std::memcpy(x3, c->c.x3.data(), n * sizeof(double));
    return BLB_OK;
}

blb_status blb_curve_unit_speed_defect(const blb_curve* c, double* defect) {
    if (blb_status st = require(c && defect, "null argument")) return st;
    *defect = c->c.max_unit_speed_defect();
    return BLB_OK;
}

blb_status blb_export_obj_curve(const blb_curve* c, int n_theta, const char* path) {
    if (blb_status st = require(c && path, "null argument")) return st;
    return guarded([&] { write_obj(revolution_mesh(c->c, n_theta), path); });
}

blb_status blb_export_obj_bubble(const blb_bubble* b, const blb_geometry* g, int n_profile,
                                 int n_theta, const char* path) {
    if (blb_status st = require(b && g && path, "null argument")) return st;
    return guarded([&] { write_obj(bubble_torus_mesh(b->b, g->g, n_profile, n_theta), path); });
}

blb_status blb_export_svg_profile(const blb_bubble* b, const char* path) {
    if (blb_status st = require(b && path, "null argument")) return st;
    return guarded([&] { write_profile_svg(b->b, path); });
}

} /* extern "C" */
