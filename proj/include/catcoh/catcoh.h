/*
 * catcoh: optical cat states in a truncated Fock basis, pure-loss channels,
 * Fock-basis coherence measures, Wigner functions and homodyne tomography.
 *
 * C interface. All objects are opaque handles owned by the caller and
 * released with the matching *_free function. Every fallible call returns a
 * catcoh_status; on failure a message for the calling thread is available
 * from catcoh_last_error().
 */
#ifndef CATCOH_CATCOH_H
#define CATCOH_CATCOH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CATCOH_BUILDING_LIBRARY)
#    define CATCOH_API __declspec(dllexport)
#  else
#    define CATCOH_API __declspec(dllimport)
#  endif
#else
#  define CATCOH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum catcoh_status {
  CATCOH_OK = 0,
  CATCOH_ERR_DOMAIN = 1,      /* invalid physical parameters or state */
  CATCOH_ERR_IO = 2,          /* unreadable file, malformed JSON/CSV */
  CATCOH_ERR_ARGUMENT = 3,    /* null handle or pointer, index out of range */
  CATCOH_ERR_INTERNAL = 4
} catcoh_status;

typedef enum catcoh_parity { CATCOH_EVEN = 0, CATCOH_ODD = 1 } catcoh_parity;

typedef struct catcoh_state catcoh_state;           /* density matrix */
typedef struct catcoh_record catcoh_record;         /* quadrature samples */
typedef struct catcoh_tomo_result catcoh_tomo_result;

#define CATCOH_DEFAULT_DIM 12
#define CATCOH_TRUNCATION_THRESHOLD 1e-3
#define CATCOH_DEFAULT_GRID_POINTS 201
#define CATCOH_DEFAULT_GRID_HALF_WIDTH 5.0

CATCOH_API const char* catcoh_version(void);
CATCOH_API const char* catcoh_last_error(void);
CATCOH_API const char* catcoh_status_string(catcoh_status status);
/* Releases strings returned through char** outputs. */
CATCOH_API void catcoh_string_free(char* s);

/* ---- states ------------------------------------------------------------ */

/* tail_mass (may be NULL) receives the untruncated probability beyond |dim-1>. */
CATCOH_API catcoh_status catcoh_state_coherent(double alpha, int dim, catcoh_state** out,
                                               double* tail_mass);
CATCOH_API catcoh_status catcoh_state_cat(double alpha, catcoh_parity parity, int dim,
                                          catcoh_state** out, double* tail_mass);
CATCOH_API catcoh_status catcoh_state_squeezed_vacuum(double r, int dim, catcoh_state** out,
                                                      double* tail_mass);
CATCOH_API catcoh_status catcoh_state_number(int n, int dim, catcoh_state** out);
/* Row-major d*d real and imaginary parts; validated as a density matrix. */
CATCOH_API catcoh_status catcoh_state_from_elements(int dim, const double* re, const double* im,
                                                    catcoh_state** out);
CATCOH_API catcoh_status catcoh_state_clone(const catcoh_state* state, catcoh_state** out);
CATCOH_API void catcoh_state_free(catcoh_state* state);

CATCOH_API int catcoh_state_dim(const catcoh_state* state);
CATCOH_API catcoh_status catcoh_state_element(const catcoh_state* state, int m, int n, double* re,
                                              double* im);
CATCOH_API catcoh_status catcoh_state_tail_mass(const catcoh_state* state, int cutoff,
                                                double* out);
CATCOH_API catcoh_status catcoh_state_mean_photon_number(const catcoh_state* state, double* out);
CATCOH_API catcoh_status catcoh_state_purity(const catcoh_state* state, double* out);
CATCOH_API catcoh_status catcoh_state_trace_distance(const catcoh_state* a, const catcoh_state* b,
                                                     double* out);

CATCOH_API catcoh_status catcoh_photon_subtract(const catcoh_state* state, catcoh_state** out);
CATCOH_API catcoh_status catcoh_loss_channel(const catcoh_state* state, double eta,
                                             catcoh_state** out);
CATCOH_API catcoh_status catcoh_cat_loss_analytic(double alpha, catcoh_parity parity, double eta,
                                                  int dim, catcoh_state** out);
CATCOH_API catcoh_status catcoh_conversion_probability(double alpha, catcoh_parity parity,
                                                       double eta, double* out);

/* JSON: { "dim": d, "tail_mass": t, "re": [...], "im": [...] }, 17 significant digits. */
CATCOH_API catcoh_status catcoh_state_load_json(const char* path, catcoh_state** out);
CATCOH_API catcoh_status catcoh_state_save_json(const catcoh_state* state, const char* path);
CATCOH_API catcoh_status catcoh_state_to_json(const catcoh_state* state, char** out);
/* Ket JSON { "dim", "tail_mass", "amps_re", "amps_im" } for pure states built by the
   constructors above; fails with CATCOH_ERR_DOMAIN for mixed states. */
CATCOH_API catcoh_status catcoh_state_save_ket_json(const catcoh_state* state, const char* path);

/* ---- measures ---------------------------------------------------------- */

typedef struct catcoh_coherence {
  double c_rel_ent; /* bits */
  double c_l1;
  int dim;
} catcoh_coherence;

CATCOH_API catcoh_status catcoh_von_neumann_entropy(const catcoh_state* state, double* out);
CATCOH_API catcoh_status catcoh_rel_entropy_coherence(const catcoh_state* state, double* out);
CATCOH_API catcoh_status catcoh_l1_coherence(const catcoh_state* state, double* out);
CATCOH_API catcoh_status catcoh_coherence_report(const catcoh_state* state, catcoh_coherence* out);
CATCOH_API catcoh_status catcoh_coherence_to_json(const catcoh_coherence* report, char** out);
CATCOH_API catcoh_status catcoh_cat_rel_entropy_truncated(double alpha, catcoh_parity parity,
                                                          int dim, double* out);
CATCOH_API catcoh_status catcoh_cat_l1_truncated(double alpha, catcoh_parity parity, int dim,
                                                 double* out);
CATCOH_API catcoh_status catcoh_lossy_cat_coherence(double alpha, catcoh_parity parity, double eta,
                                                    int dim, catcoh_coherence* out);
CATCOH_API catcoh_status catcoh_fidelity_to_cat(const catcoh_state* state, double alpha_ref,
                                                catcoh_parity parity, double* out);
CATCOH_API catcoh_status catcoh_best_fit_cat(const catcoh_state* state, catcoh_parity parity,
                                             double* alpha, double* fidelity);
CATCOH_API catcoh_status catcoh_fidelity_loss_analytic(double alpha, double eta, double* out);
CATCOH_API catcoh_status catcoh_negativity_analytic(double alpha, double eta, double* out);

/* ---- phase space ------------------------------------------------------- */

CATCOH_API catcoh_status catcoh_wigner_point(const catcoh_state* state, double x, double p,
                                             double* out);
/* values has room for nx * np doubles, row-major over xs then ps. */
CATCOH_API catcoh_status catcoh_wigner_grid(const catcoh_state* state, const double* xs, size_t nx,
                                            const double* ps, size_t np, double* values);
/* min{0, min W} on the default 201 x 201 grid over [-5, 5]^2. */
CATCOH_API catcoh_status catcoh_wigner_negativity(const catcoh_state* state, double* out);
CATCOH_API catcoh_status catcoh_quadrature_marginal(const catcoh_state* state, double theta,
                                                    const double* xs, size_t n, double* pdf);
/* CSV "x,p,w" on an n x n grid over [-half_width, half_width]^2. */
CATCOH_API catcoh_status catcoh_write_wigner_csv(const catcoh_state* state, double half_width,
                                                 int n, const char* path);
/* CSV "theta,x,pdf" for each theta on an n-point x grid over [-half_width, half_width]. */
CATCOH_API catcoh_status catcoh_write_marginal_csv(const catcoh_state* state, const double* thetas,
                                                   size_t n_thetas, double half_width, int n,
                                                   const char* path);

/* ---- tomography -------------------------------------------------------- */

typedef struct catcoh_tomo_config {
  int cutoff;          /* photon-number cutoff; reconstruction dim = cutoff + 1 */
  double eta_det;      /* detection efficiency in (0, 1] */
  int n_phase_bins;
  int n_x_bins;
  double x_min;
  double x_max;
  int max_iters;
  double loglik_tol;
  double prob_floor;
} catcoh_tomo_config;

CATCOH_API void catcoh_tomo_config_default(catcoh_tomo_config* config);

/* phases == NULL or n_phases == 0 selects 12 uniform phases k*pi/12. */
CATCOH_API catcoh_status catcoh_sample_homodyne(const catcoh_state* state, size_t n,
                                                const double* phases, size_t n_phases,
                                                double eta_det, uint64_t seed,
                                                catcoh_record** out);
CATCOH_API size_t catcoh_record_size(const catcoh_record* record);
CATCOH_API catcoh_status catcoh_record_sample(const catcoh_record* record, size_t i, double* theta,
                                              double* x);
CATCOH_API catcoh_status catcoh_record_load_csv(const char* path, catcoh_record** out);
CATCOH_API catcoh_status catcoh_record_save_csv(const catcoh_record* record, const char* path);
CATCOH_API void catcoh_record_free(catcoh_record* record);

CATCOH_API catcoh_status catcoh_maxlik_reconstruct(const catcoh_record* record,
                                                   const catcoh_tomo_config* config,
                                                   catcoh_tomo_result** out);
CATCOH_API catcoh_status catcoh_tomo_result_state(const catcoh_tomo_result* result,
                                                  catcoh_state** out);
CATCOH_API int catcoh_tomo_result_iterations(const catcoh_tomo_result* result);
CATCOH_API double catcoh_tomo_result_loglik(const catcoh_tomo_result* result);
CATCOH_API int catcoh_tomo_result_converged(const catcoh_tomo_result* result);
/* Writes the density JSON and a sidecar { "iterations", "final_loglik", "converged", ... }. */
CATCOH_API catcoh_status catcoh_tomo_result_save(const catcoh_tomo_result* result,
                                                 const char* density_path,
                                                 const char* sidecar_path);
CATCOH_API void catcoh_tomo_result_free(catcoh_tomo_result* result);

/* ---- source model and sweeps ------------------------------------------ */

typedef struct catcoh_pipeline_spec {
  double squeeze_db;  /* default -3 */
  double prep_loss;   /* [0, 1), default 0.2 */
  double tap;         /* subtraction tap transmissivity, default 0.05 (metadata) */
  int dim;
} catcoh_pipeline_spec;

typedef struct catcoh_pipeline_summary {
  double alpha_fit;
  double fidelity;
  double c_rel_ent;
  double c_l1;
  double wigner_min;
  double mean_photon_number;
} catcoh_pipeline_summary;

CATCOH_API void catcoh_pipeline_spec_default(catcoh_pipeline_spec* spec);
CATCOH_API catcoh_status catcoh_pipeline_state(const catcoh_pipeline_spec* spec,
                                               catcoh_state** out);
CATCOH_API catcoh_status catcoh_pipeline_report(const catcoh_pipeline_spec* spec,
                                                catcoh_pipeline_summary* out);
CATCOH_API catcoh_status catcoh_pipeline_report_json(const catcoh_pipeline_spec* spec, char** out);

/* CSV eta,c_rel_ideal,c_l1_ideal,f_ideal,neg_ideal[,c_rel_model,c_l1_model,f_model,neg_model].
   pipeline == NULL omits the model columns. */
CATCOH_API catcoh_status catcoh_write_decoherence_csv(double alpha, const double* etas,
                                                      size_t n_etas, int dim,
                                                      const catcoh_pipeline_spec* pipeline,
                                                      const char* path);
/* CSV alpha,c_rel_d<lo>,c_rel_d<hi>,c_l1_d<lo>,c_l1_d<hi> for odd cats. */
CATCOH_API catcoh_status catcoh_write_truncation_csv(const double* alphas, size_t n_alphas,
                                                     int dim_lo, int dim_hi, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* CATCOH_CATCOH_H */
