#pragma once

// Homodyne tomography: a seeded forward model of the detector and an
// efficiency-corrected iterative maximum-likelihood reconstruction.
//
// Detector inefficiency is folded into the measurement operators through the
// adjoint loss map, so the reconstructed state is the one *before* the
// detector loss.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "catcoh/fock.hpp"

namespace catcoh {

struct QuadratureSample {
  double theta = 0.0;  // [0, pi)
  double x = 0.0;
};

struct QuadratureRecord {
  std::vector<QuadratureSample> samples;
  std::uint64_t seed = 0;
  std::string source_note;

  void validate() const;
};

struct TomoConfig {
  int cutoff = 11;
  double eta_det = 0.8;
  int n_phase_bins = 12;
  int n_x_bins = 200;
  double x_min = -6.0;
  double x_max = 6.0;
  int max_iters = 2000;
  double loglik_tol = 1e-9;
  double prob_floor = 1e-12;

  int dim() const { return cutoff + 1; }
  void validate() const;
};

// Phase-binned, efficiency-smeared quadrature projectors. Element j covers
// phase bin j / n_bins and x bin j % n_bins.
struct Povm {
  int dim = 0;
  int n_phases = 0;
  int n_bins = 0;
  std::vector<double> phases;
  std::vector<double> bin_edges;
  std::vector<ComplexMatrix> elements;
  // max over phases of || sum_b Pi_{theta,b} - I || (spectral norm)
  double completeness_residual = 0.0;

  const ComplexMatrix& at(int phase, int bin) const { return elements[phase * n_bins + bin]; }
};

struct BinnedCounts {
  std::vector<double> counts;  // indexed like Povm::elements
  std::size_t used = 0;
  std::size_t dropped = 0;  // x outside [x_min, x_max)
};

struct TomoResult {
  DensityMatrix rho_hat;
  int iterations = 0;
  double final_loglik = 0.0;
  bool converged = false;
  std::vector<double> loglik_trace;  // one entry per accepted iterate, starting at rho_0
  std::size_t samples_used = 0;
  std::size_t samples_dropped = 0;
};

// k * pi / count for k = 0..count-1.
std::vector<double> uniform_phases(int count = 12);

// Draws n quadrature samples from loss_channel(rho, eta_det). Samples are
// split evenly over the phases; each phase has its own generator stream
// derived from (seed, phase index).
QuadratureRecord sample_homodyne(const DensityMatrix& rho, std::size_t n,
                                 std::span<const double> phases, double eta_det,
                                 std::uint64_t seed);

// Bin-integrated projectors int_bin |x_theta><x_theta| dx, smeared by the
// adjoint loss map. Throws DomainError if the completeness residual exceeds
// 1e-3.
Povm build_povm(const TomoConfig& config);

// Same construction without the completeness check.
Povm build_povm_unchecked(const TomoConfig& config);

BinnedCounts bin_record(const QuadratureRecord& record, const TomoConfig& config);

// sum_j n_j ln max(Tr[Pi_j rho], floor) over occupied bins.
double loglikelihood(const DensityMatrix& rho, const BinnedCounts& counts, const Povm& povm,
                     double prob_floor = 1e-12);

// R rho R iteration from the maximally mixed state. A full step that would
// lower the likelihood is replaced by a diluted step (I + e R) rho (I + e R)
// with e halved until the likelihood does not decrease.
TomoResult maxlik_reconstruct(const QuadratureRecord& record, const TomoConfig& config);
TomoResult maxlik_reconstruct(const BinnedCounts& counts, const Povm& povm,
                              const TomoConfig& config);

}  // namespace catcoh
