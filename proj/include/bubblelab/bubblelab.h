/* bubblelab C API: opaque handles + status codes over the C++ core.
 *
 * Every function returns blb_status (BLB_OK on success) unless noted; on
 * failure blb_last_error() returns a thread-local message. Handles are
 * created by blb_*_create/... functions and released with the matching
 * blb_*_free (safe on NULL). All handles are immutable after creation and
 * may be shared across threads.
 */
#ifndef BUBBLELAB_H
#define BUBBLELAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum blb_status {
    BLB_OK = 0,
    BLB_NUMERICAL_FAILURE = 1,
    BLB_INVALID_INPUT = 2,
    BLB_IO_ERROR = 3,
    BLB_UNDEFINED_BOUND = 4,
} blb_status;

typedef struct blb_profile blb_profile;
typedef struct blb_geometry blb_geometry;
typedef struct blb_bubble blb_bubble;
typedef struct blb_stability blb_stability;
typedef struct blb_curve blb_curve;
typedef struct blb_field blb_field;

const char* blb_version(void);
/* Message for the most recent failure on this thread ("" if none). */
const char* blb_last_error(void);

/* ---- profiles -------------------------------------------------------- */

/* name: "ex1" or "ex2"; eps is the interval margin (default 0.05). */
blb_status blb_profile_builtin(const char* name, double eps, blb_profile** out);
blb_status blb_profile_from_csv(const char* path, blb_profile** out);
void blb_profile_free(blb_profile* p);

blb_status blb_profile_eval(const blb_profile* p, double s, double* phi, double* phi_s,
                            double* phi_ss);
blb_status blb_profile_s_max(const blb_profile* p, double* s_max);
/* *present = 0 when phi has no first local maximum; pattern_ok mirrors the
 * first-inflection hypothesis check. */
blb_status blb_profile_s0(const blb_profile* p, double* s0, int* present, int* pattern_ok);
/* Writes up to cap diagnostics as "code: message" lines into buf (NUL
 * separated); *count is the number of violated criteria (0 = valid). */
blb_status blb_profile_validate(const blb_profile* p, char* buf, size_t buf_len, int* count);

/* ---- warped geometry -------------------------------------------------- */

blb_status blb_geometry_create(const blb_profile* p, double c, blb_geometry** out);
void blb_geometry_free(blb_geometry* g);

blb_status blb_geometry_eval(const blb_geometry* g, double s, double* f, double* f_s,
                             double* f_ss, double* F);
blb_status blb_geometry_gauss_curvature(const blb_geometry* g, double s, double* K);
blb_status blb_geometry_log_f_convexity(const blb_geometry* g, double a, double b, double* min_val);
blb_status blb_geometry_ricci_R0(const blb_geometry* g, double a, double b, double* R0);
/* beta threshold of the stability theorem; mode 0 = phi_s integrand,
 * mode 1 = frozen phi_s(s1) reading (s1_frozen required then). */
blb_status blb_geometry_beta(const blb_geometry* g, int mode, double s1_frozen, double* beta);

/* ---- bubble family ----------------------------------------------------- */

blb_status blb_bubble_solve(const blb_geometry* g, double s1, int n_nodes, blb_bubble** out);
void blb_bubble_free(blb_bubble* b);

blb_status blb_bubble_scalars(const blb_bubble* b, double* H, double* V, double* A_lat,
                              double* u_max, double* x0_measure);
blb_status blb_bubble_node_count(const blb_bubble* b, int* n);
/* Copies node arrays (each of length node_count) into caller storage; any
 * pointer may be NULL to skip that column. */
blb_status blb_bubble_nodes(const blb_bubble* b, double* alpha, double* s, double* u, double* t);
blb_status blb_bubble_cmc_residual(const blb_bubble* b, const blb_geometry* g, double* residual);
blb_status blb_volume_to_s1(const blb_geometry* g, double v, int n_nodes, double* s1);

typedef struct blb_sweep_row {
    double s1;
    int ok; /* 0 = failed; message in error */
    double H, V, A_lat, u_max, beta_margin;
    char error[192];
} blb_sweep_row;

/* Solves every member in parallel; rows follow s1_list order. */
blb_status blb_family_sweep(const blb_geometry* g, const double* s1_list, int count, int n_nodes,
                            blb_sweep_row* rows);

/* ---- stability --------------------------------------------------------- */

blb_status blb_stability_analyze(const blb_bubble* b, const blb_geometry* g, int k_max, int m,
                                 double tol_rel, blb_stability** out);
void blb_stability_free(blb_stability* s);

/* verdict: 0 stable, 1 unstable, 2 marginal. */
blb_status blb_stability_verdict(const blb_stability* s, int* verdict);
blb_status blb_stability_scalars(const blb_stability* s, double* beta, double* ratio,
                                 double* translation_residual, double* admissible_min);
/* Serialized report; caller frees with blb_string_free. */
blb_status blb_stability_json(const blb_stability* s, char** json);
void blb_string_free(char* s);

blb_status blb_jacobi_field_residual(const blb_bubble* b, const blb_geometry* g, double* residual);
blb_status blb_odd_sector_identity_defect(const blb_bubble* b, const blb_geometry* g, double* defect);

/* ---- isoperimetric flow ------------------------------------------------ */

/* dim 1: lengths[0]; dim 2: lengths[0..1]. n is the ball dimension. */
blb_status blb_field_constant(int dim, const double* lengths, int resolution, int n, double a,
                              blb_field** out);
blb_status blb_field_random(int dim, const double* lengths, int resolution, int n, double a,
                            double tau_inf, uint64_t seed, blb_field** out);
blb_status blb_field_from_csv(int dim, const double* lengths, int resolution, int n,
                              const char* path, blb_field** out);
void blb_field_free(blb_field* f);

blb_status blb_field_area(const blb_field* f, double* area);
blb_status blb_field_volume(const blb_field* f, double* volume);
blb_status blb_field_stats(const blb_field* f, double* mean, double* tau_inf, double* lambda1);

typedef void (*blb_descent_callback)(long step, double area, double volume, double tau_inf_over_a,
                                     void* user);

typedef struct blb_descent_summary {
    long steps;
    int converged;
    double final_area;
    double volume_drift_rel;
    double tau_inf_over_a;
} blb_descent_summary;

blb_status blb_flow_descend(const blb_field* f, long max_steps, double step_size,
                            blb_descent_callback on_step, void* user,
                            blb_descent_summary* summary);

blb_status blb_large_volume_margin(double a, int n, double lambda1, double c_doubleprime,
                                 double* margin);
blb_status blb_variation_bound_check(const blb_field* f, double C, double c_prime, int* holds,
                             double* margin, double* c_doubleprime);
blb_status blb_variation_bound_trials(int dim, const double* lengths, int resolution, int n, double a,
                              double C, double c_prime, int count, uint64_t seed, int* all_hold,
                              double* worst_margin);
blb_status blb_slope_bound_check(const blb_field* f, double c_prime, int* applicable,
                                 double* max_gradient, int* pass);

/* ---- closed-form bounds ------------------------------------------------ */

blb_status blb_unit_ball_volume(int n, double* omega_n);
blb_status blb_isop_H_bound(int n, double vol_X, double v, int obstacle, double* bound);
blb_status blb_H0_large_bubble(int d, int n, double R0, double* H0, int* ric_nonneg);
blb_status blb_ric_nonneg_H_bound(int d, int n, double rho1, double* bound);
blb_status blb_slope_bound_constants(int n, double H, double C, double R0, double* C1,
                                     double* C_prime, double* log_C_prime);

typedef struct blb_bounds_input {
    int d, n;
    double vol_X, v, H, area, x0_measure, rho0, rho1;
    int is_isoperimetric, is_soap_bubble;
} blb_bounds_input;

typedef struct blb_ineq_row {
    char inequality[32];
    int applicable;
    double margin;
    int pass;
} blb_ineq_row;

/* Fills up to cap rows; *count receives the number written. */
blb_status blb_check_inequalities(const blb_bounds_input* in, blb_ineq_row* rows, int cap,
                                  int* count);

/* ---- embedding --------------------------------------------------------- */

/* *bounded = 0 means f' vanishes identically and any c embeds. */
blb_status blb_embed_max_c(const blb_geometry* g, double a, double b, double* c_max, int* bounded);
blb_status blb_embed_revolution(const blb_geometry* g, double a, double b, int n_samples,
                                blb_curve** out);
void blb_curve_free(blb_curve* c);
blb_status blb_curve_sample_count(const blb_curve* c, int* n);
blb_status blb_curve_samples(const blb_curve* c, double* s, double* r, double* x3);
blb_status blb_curve_unit_speed_defect(const blb_curve* c, double* defect);

blb_status blb_export_obj_curve(const blb_curve* c, int n_theta, const char* path);
blb_status blb_export_obj_bubble(const blb_bubble* b, const blb_geometry* g, int n_profile,
                                 int n_theta, const char* path);
blb_status blb_export_svg_profile(const blb_bubble* b, const char* path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BUBBLELAB_H */
