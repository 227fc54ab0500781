#include "catcoh/catcoh.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "catcoh/channels.hpp"
#include "catcoh/experiment.hpp"
#include "catcoh/io.hpp"
#include "catcoh/measures.hpp"
#include "catcoh/tomography.hpp"
#include "catcoh/wigner.hpp"

struct catcoh_state {
  catcoh::DensityMatrix rho;
  std::optional<catcoh::FockKet> ket;
};

struct catcoh_record {
  catcoh::QuadratureRecord record;
};

struct catcoh_tomo_result {
  catcoh::TomoResult result;
};

namespace {

thread_local std::string last_error;

struct BadArgument {
  std::string what;
};

template <typename T>
T* require(T* p, const char* what) {
  if (!p) throw BadArgument{std::string("null argument: ") + what};
  return p;
}

// Runs f, translating exceptions into status codes and the thread-local
// error message.
template <typename F>
catcoh_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return CATCOH_OK;
  } catch (const BadArgument& e) {
    last_error = e.what;
    return CATCOH_ERR_ARGUMENT;
  } catch (const catcoh::DomainError& e) {
    last_error = e.what();
    return CATCOH_ERR_DOMAIN;
  } catch (const catcoh::IoError& e) {
    last_error = e.what();
    return CATCOH_ERR_IO;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CATCOH_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return CATCOH_ERR_INTERNAL;
  }
}

catcoh::Parity to_parity(catcoh_parity p) {
  if (p != CATCOH_EVEN && p != CATCOH_ODD) throw catcoh::DomainError("invalid parity value");
  return p == CATCOH_EVEN ? catcoh::Parity::Even : catcoh::Parity::Odd;
}

catcoh_state* from_ket(catcoh::FockKet ket, double* tail_mass) {
  if (tail_mass) *tail_mass = ket.tail_mass();
  auto* s = new catcoh_state{catcoh::ket_to_density(ket), std::move(ket)};
  return s;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

catcoh::TomoConfig to_config(const catcoh_tomo_config& c) {
  catcoh::TomoConfig cfg;
  cfg.cutoff = c.cutoff;
  cfg.eta_det = c.eta_det;
  cfg.n_phase_bins = c.n_phase_bins;
  cfg.n_x_bins = c.n_x_bins;
  cfg.x_min = c.x_min;
  cfg.x_max = c.x_max;
  cfg.max_iters = c.max_iters;
  cfg.loglik_tol = c.loglik_tol;
  cfg.prob_floor = c.prob_floor;
  return cfg;
}

catcoh::PipelineSpec to_pipeline(const catcoh_pipeline_spec& s) {
  return catcoh::PipelineSpec{s.squeeze_db, s.prep_loss, s.tap, s.dim};
}

void write_stream_file(const char* path, const std::string& contents) {
  catcoh::io::write_file(require(path, "path"), contents);
}

}  // namespace

extern "C" {

const char* catcoh_version(void) { return "0.1.0"; }

const char* catcoh_last_error(void) { return last_error.c_str(); }

const char* catcoh_status_string(catcoh_status status) {
  switch (status) {
    case CATCOH_OK: return "ok";
    case CATCOH_ERR_DOMAIN: return "domain error";
    case CATCOH_ERR_IO: return "I/O error";
    case CATCOH_ERR_ARGUMENT: return "invalid argument";
    case CATCOH_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void catcoh_string_free(char* s) { std::free(s); }

// ---- states ---------------------------------------------------------------

catcoh_status catcoh_state_coherent(double alpha, int dim, catcoh_state** out, double* tail_mass) {
  return guarded([&] { *require(out, "out") = from_ket(catcoh::coherent_ket(alpha, dim), tail_mass); });
}

catcoh_status catcoh_state_cat(double alpha, catcoh_parity parity, int dim, catcoh_state** out,
                               double* tail_mass) {
  return guarded([&] {
    *require(out, "out") = from_ket(catcoh::cat_ket({alpha, to_parity(parity), dim}), tail_mass);
  });
}

catcoh_status catcoh_state_squeezed_vacuum(double r, int dim, catcoh_state** out, double* tail_mass) {
  return guarded([&] {
    *require(out, "out") = from_ket(catcoh::squeezed_vacuum_ket({r, dim}), tail_mass);
  });
}

catcoh_status catcoh_state_number(int n, int dim, catcoh_state** out) {
  return guarded([&] {
    if (dim < 2 || n < 0 || n >= dim) throw catcoh::DomainError("number state outside the truncated space");
    catcoh::ComplexVector amps = catcoh::ComplexVector::Zero(dim);
    amps(n) = 1.0;
    *require(out, "out") = from_ket(catcoh::FockKet(amps), nullptr);
  });
}

catcoh_status catcoh_state_from_elements(int dim, const double* re, const double* im,
                                         catcoh_state** out) {
  return guarded([&] {
    require(re, "re");
    require(im, "im");
    require(out, "out");
    if (dim < 2) throw catcoh::DomainError("dimension must be at least 2");
    catcoh::ComplexMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = catcoh::Complex(re[i * dim + j], im[i * dim + j]);
    *out = new catcoh_state{catcoh::DensityMatrix(m), std::nullopt};
  });
}

catcoh_status catcoh_state_clone(const catcoh_state* state, catcoh_state** out) {
  return guarded([&] { *require(out, "out") = new catcoh_state(*require(state, "state")); });
}

void catcoh_state_free(catcoh_state* state) { delete state; }

int catcoh_state_dim(const catcoh_state* state) { return state ? state->rho.dim() : 0; }

catcoh_status catcoh_state_element(const catcoh_state* state, int m, int n, double* re, double* im) {
  return guarded([&] {
    require(state, "state");
    if (m < 0 || n < 0 || m >= state->rho.dim() || n >= state->rho.dim())
      throw BadArgument{"matrix index out of range"};
    auto v = state->rho(m, n);
    if (re) *re = v.real();
    if (im) *im = v.imag();
  });
}

catcoh_status catcoh_state_tail_mass(const catcoh_state* state, int cutoff, double* out) {
  return guarded([&] {
    require(state, "state");
    *require(out, "out") = state->ket ? catcoh::tail_mass(*state->ket, cutoff)
                                      : catcoh::tail_mass(state->rho, cutoff);
  });
}

catcoh_status catcoh_state_mean_photon_number(const catcoh_state* state, double* out) {
  return guarded([&] { *require(out, "out") = require(state, "state")->rho.mean_photon_number(); });
}

catcoh_status catcoh_state_purity(const catcoh_state* state, double* out) {
  return guarded([&] { *require(out, "out") = require(state, "state")->rho.purity(); });
}

catcoh_status catcoh_state_trace_distance(const catcoh_state* a, const catcoh_state* b, double* out) {
  return guarded([&] {
    *require(out, "out") = catcoh::trace_distance(require(a, "a")->rho, require(b, "b")->rho);
  });
}

catcoh_status catcoh_photon_subtract(const catcoh_state* state, catcoh_state** out) {
  return guarded([&] {
    *require(out, "out") =
        new catcoh_state{catcoh::photon_subtract(require(state, "state")->rho), std::nullopt};
  });
}

catcoh_status catcoh_loss_channel(const catcoh_state* state, double eta, catcoh_state** out) {
  return guarded([&] {
    *require(out, "out") = new catcoh_state{
        catcoh::loss_channel(require(state, "state")->rho, catcoh::LossSpec{eta}), std::nullopt};
  });
}

catcoh_status catcoh_cat_loss_analytic(double alpha, catcoh_parity parity, double eta, int dim,
                                       catcoh_state** out) {
  return guarded([&] {
    *require(out, "out") = new catcoh_state{
        catcoh::cat_loss_analytic(alpha, to_parity(parity), catcoh::LossSpec{eta}, dim), std::nullopt};
  });
}

catcoh_status catcoh_conversion_probability(double alpha, catcoh_parity parity, double eta,
                                            double* out) {
  return guarded([&] {
    *require(out, "out") = catcoh::conversion_probability(alpha, to_parity(parity), catcoh::LossSpec{eta});
  });
}

catcoh_status catcoh_state_load_json(const char* path, catcoh_state** out) {
  return guarded([&] {
    require(out, "out");
    auto rho = catcoh::io::density_from_json(catcoh::io::read_file(require(path, "path")));
    *out = new catcoh_state{std::move(rho), std::nullopt};
  });
}

catcoh_status catcoh_state_save_json(const catcoh_state* state, const char* path) {
  return guarded([&] { write_stream_file(path, catcoh::io::density_to_json(require(state, "state")->rho)); });
}

catcoh_status catcoh_state_to_json(const catcoh_state* state, char** out) {
  return guarded([&] {
    *require(out, "out") = dup_string(catcoh::io::density_to_json(require(state, "state")->rho));
  });
}

catcoh_status catcoh_state_save_ket_json(const catcoh_state* state, const char* path) {
  return guarded([&] {
    require(state, "state");
    if (!state->ket) throw catcoh::DomainError("state has no ket representation");
    write_stream_file(path, catcoh::io::ket_to_json(*state->ket));
  });
}

// ---- measures -------------------------------------------------------------

catcoh_status catcoh_von_neumann_entropy(const catcoh_state* state, double* out) {
  return guarded([&] { *require(out, "out") = catcoh::von_neumann_entropy(require(state, "state")->rho); });
}

catcoh_status catcoh_rel_entropy_coherence(const catcoh_state* state, double* out) {
  return guarded([&] { *require(out, "out") = catcoh::rel_entropy_coherence(require(state, "state")->rho); });
}

catcoh_status catcoh_l1_coherence(const catcoh_state* state, double* out) {
  return guarded([&] { *require(out, "out") = catcoh::l1_coherence(require(state, "state")->rho); });
}

catcoh_status catcoh_coherence_report(const catcoh_state* state, catcoh_coherence* out) {
  return guarded([&] {
    auto r = catcoh::coherence_report(require(state, "state")->rho);
    *require(out, "out") = catcoh_coherence{r.c_rel_ent, r.c_l1, r.dim};
  });
}

catcoh_status catcoh_coherence_to_json(const catcoh_coherence* report, char** out) {
  return guarded([&] {
    require(report, "report");
    *require(out, "out") = dup_string(
        catcoh::io::coherence_to_json({report->c_rel_ent, report->c_l1, report->dim}));
  });
}

catcoh_status catcoh_cat_rel_entropy_truncated(double alpha, catcoh_parity parity, int dim, double* out) {
  return guarded([&] {
    *require(out, "out") = catcoh::cat_rel_entropy_truncated(alpha, to_parity(parity), dim);
  });
}

catcoh_status catcoh_cat_l1_truncated(double alpha, catcoh_parity parity, int dim, double* out) {
  return guarded([&] { *require(out, "out") = catcoh::cat_l1_truncated(alpha, to_parity(parity), dim); });
}

catcoh_status catcoh_lossy_cat_coherence(double alpha, catcoh_parity parity, double eta, int dim,
                                         catcoh_coherence* out) {
  return guarded([&] {
    auto r = catcoh::lossy_cat_coherence(alpha, to_parity(parity), eta, dim);
    *require(out, "out") = catcoh_coherence{r.c_rel_ent, r.c_l1, r.dim};
  });
}

catcoh_status catcoh_fidelity_to_cat(const catcoh_state* state, double alpha_ref, catcoh_parity parity,
                                     double* out) {
  return guarded([&] {
    *require(out, "out") =
        catcoh::fidelity_to_cat(require(state, "state")->rho, alpha_ref, to_parity(parity));
  });
}

catcoh_status catcoh_best_fit_cat(const catcoh_state* state, catcoh_parity parity, double* alpha,
                                  double* fidelity) {
  return guarded([&] {
    auto fit = catcoh::best_fit_cat(require(state, "state")->rho, to_parity(parity));
    if (alpha) *alpha = fit.alpha;
    if (fidelity) *fidelity = fit.fidelity;
  });
}

catcoh_status catcoh_fidelity_loss_analytic(double alpha, double eta, double* out) {
  return guarded([&] { *require(out, "out") = catcoh::fidelity_loss_analytic(alpha, eta); });
}

catcoh_status catcoh_negativity_analytic(double alpha, double eta, double* out) {
  return guarded([&] { *require(out, "out") = catcoh::negativity_analytic(alpha, eta); });
}

// ---- phase space ----------------------------------------------------------

catcoh_status catcoh_wigner_point(const catcoh_state* state, double x, double p, double* out) {
  return guarded([&] { *require(out, "out") = catcoh::wigner_point(require(state, "state")->rho, {x, p}); });
}

catcoh_status catcoh_wigner_grid(const catcoh_state* state, const double* xs, size_t nx,
                                 const double* ps, size_t np, double* values) {
  return guarded([&] {
    auto grid = catcoh::wigner_grid(require(state, "state")->rho, {require(xs, "xs"), nx},
                                    {require(ps, "ps"), np});
    std::copy(grid.values.begin(), grid.values.end(), require(values, "values"));
  });
}

catcoh_status catcoh_wigner_negativity(const catcoh_state* state, double* out) {
  return guarded([&] { *require(out, "out") = catcoh::wigner_negativity_grid(require(state, "state")->rho); });
}

catcoh_status catcoh_quadrature_marginal(const catcoh_state* state, double theta, const double* xs,
                                         size_t n, double* pdf) {
  return guarded([&] {
    auto v = catcoh::quadrature_marginal(require(state, "state")->rho, theta, {require(xs, "xs"), n});
    std::copy(v.begin(), v.end(), require(pdf, "pdf"));
  });
}

catcoh_status catcoh_write_wigner_csv(const catcoh_state* state, double half_width, int n,
                                      const char* path) {
  return guarded([&] {
    auto axis = catcoh::uniform_axis(half_width, n);
    std::ostringstream os;
    catcoh::io::write_wigner_csv(os, catcoh::wigner_grid(require(state, "state")->rho, axis, axis));
    write_stream_file(path, os.str());
  });
}

catcoh_status catcoh_write_marginal_csv(const catcoh_state* state, const double* thetas,
                                        size_t n_thetas, double half_width, int n, const char* path) {
  return guarded([&] {
    auto axis = catcoh::uniform_axis(half_width, n);
    std::ostringstream os;
    catcoh::io::write_marginal_csv(os, {require(thetas, "thetas"), n_thetas}, axis,
                                   require(state, "state")->rho);
    write_stream_file(path, os.str());
  });
}

// ---- tomography -----------------------------------------------------------

void catcoh_tomo_config_default(catcoh_tomo_config* config) {
  if (!config) return;
  catcoh::TomoConfig d;
  *config = catcoh_tomo_config{d.cutoff, d.eta_det, d.n_phase_bins, d.n_x_bins, d.x_min,
                               d.x_max, d.max_iters, d.loglik_tol, d.prob_floor};
}

catcoh_status catcoh_sample_homodyne(const catcoh_state* state, size_t n, const double* phases,
                                     size_t n_phases, double eta_det, uint64_t seed,
                                     catcoh_record** out) {
  return guarded([&] {
    require(out, "out");
    std::span<const double> ph;
    if (phases && n_phases > 0) ph = {phases, n_phases};
    *out = new catcoh_record{catcoh::sample_homodyne(require(state, "state")->rho, n, ph, eta_det, seed)};
  });
}

size_t catcoh_record_size(const catcoh_record* record) {
  return record ? record->record.samples.size() : 0;
}

catcoh_status catcoh_record_sample(const catcoh_record* record, size_t i, double* theta, double* x) {
  return guarded([&] {
    const auto& samples = require(record, "record")->record.samples;
    if (i >= samples.size()) throw BadArgument{"sample index out of range"};
    if (theta) *theta = samples[i].theta;
    if (x) *x = samples[i].x;
  });
}

catcoh_status catcoh_record_load_csv(const char* path, catcoh_record** out) {
  return guarded([&] {
    require(out, "out");
    std::ifstream in(require(path, "path"), std::ios::binary);
    if (!in) throw catcoh::IoError(std::string("cannot open '") + path + "' for reading");
    *out = new catcoh_record{catcoh::io::read_quadrature_csv(in)};
  });
}

catcoh_status catcoh_record_save_csv(const catcoh_record* record, const char* path) {
  return guarded([&] {
    std::ostringstream os;
    catcoh::io::write_quadrature_csv(os, require(record, "record")->record);
    write_stream_file(path, os.str());
  });
}

void catcoh_record_free(catcoh_record* record) { delete record; }

catcoh_status catcoh_maxlik_reconstruct(const catcoh_record* record, const catcoh_tomo_config* config,
                                        catcoh_tomo_result** out) {
  return guarded([&] {
    require(out, "out");
    catcoh::TomoConfig cfg;
    if (config) cfg = to_config(*config);
    *out = new catcoh_tomo_result{catcoh::maxlik_reconstruct(require(record, "record")->record, cfg)};
  });
}

catcoh_status catcoh_tomo_result_state(const catcoh_tomo_result* result, catcoh_state** out) {
  return guarded([&] {
    *require(out, "out") = new catcoh_state{require(result, "result")->result.rho_hat, std::nullopt};
  });
}

int catcoh_tomo_result_iterations(const catcoh_tomo_result* result) {
  return result ? result->result.iterations : 0;
}

double catcoh_tomo_result_loglik(const catcoh_tomo_result* result) {
  return result ? result->result.final_loglik : 0.0;
}

int catcoh_tomo_result_converged(const catcoh_tomo_result* result) {
  return result && result->result.converged ? 1 : 0;
}

catcoh_status catcoh_tomo_result_save(const catcoh_tomo_result* result, const char* density_path,
                                      const char* sidecar_path) {
  return guarded([&] {
    const auto& r = require(result, "result")->result;
    write_stream_file(density_path, catcoh::io::density_to_json(r.rho_hat));
    if (sidecar_path) write_stream_file(sidecar_path, catcoh::io::tomo_sidecar_to_json(r));
  });
}

void catcoh_tomo_result_free(catcoh_tomo_result* result) { delete result; }

// ---- source model and sweeps ---------------------------------------------

void catcoh_pipeline_spec_default(catcoh_pipeline_spec* spec) {
  if (!spec) return;
  catcoh::PipelineSpec d;
  *spec = catcoh_pipeline_spec{d.squeeze_db, d.prep_loss, d.tap, d.dim};
}

catcoh_status catcoh_pipeline_state(const catcoh_pipeline_spec* spec, catcoh_state** out) {
  return guarded([&] {
    *require(out, "out") =
        new catcoh_state{catcoh::pipeline_state(to_pipeline(*require(spec, "spec"))), std::nullopt};
  });
}

catcoh_status catcoh_pipeline_report(const catcoh_pipeline_spec* spec, catcoh_pipeline_summary* out) {
  return guarded([&] {
    auto r = catcoh::pipeline_report(to_pipeline(*require(spec, "spec")));
    *require(out, "out") = catcoh_pipeline_summary{r.fit.alpha,         r.fit.fidelity, r.coherence.c_rel_ent,
                                                   r.coherence.c_l1,    r.wigner_min,   r.mean_photon_number};
  });
}

catcoh_status catcoh_pipeline_report_json(const catcoh_pipeline_spec* spec, char** out) {
  return guarded([&] {
    require(out, "out");
    *out = dup_string(catcoh::io::pipeline_report_to_json(
        catcoh::pipeline_report(to_pipeline(*require(spec, "spec")))));
  });
}

catcoh_status catcoh_write_decoherence_csv(double alpha, const double* etas, size_t n_etas, int dim,
                                           const catcoh_pipeline_spec* pipeline, const char* path) {
  return guarded([&] {
    std::optional<catcoh::PipelineSpec> model;
    if (pipeline) model = to_pipeline(*pipeline);
    auto rows = catcoh::decoherence_sweep(alpha, {require(etas, "etas"), n_etas}, model, dim);
    std::ostringstream os;
    catcoh::io::write_fig4_csv(os, rows);
    write_stream_file(path, os.str());
  });
}

catcoh_status catcoh_write_truncation_csv(const double* alphas, size_t n_alphas, int dim_lo,
                                          int dim_hi, const char* path) {
  return guarded([&] {
    auto rows = catcoh::truncation_sweep({require(alphas, "alphas"), n_alphas}, dim_lo, dim_hi);
    std::ostringstream os;
    catcoh::io::write_fig5_csv(os, rows, dim_lo, dim_hi);
    write_stream_file(path, os.str());
  });
}

}  // extern "C"
