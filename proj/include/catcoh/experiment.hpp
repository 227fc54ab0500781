#pragma once

// Model of the cat-state source (squeezed vacuum, preparation loss, heralded
// photon subtraction) and the sweeps behind the decoherence and truncation
// curves.

#include <optional>
#include <span>
#include <vector>

#include "catcoh/fock.hpp"
#include "catcoh/measures.hpp"

namespace catcoh {

struct PipelineSpec {
  double squeeze_db = -3.0;
  double prep_loss = 0.2;  // in [0, 1)
  double tap = 0.05;       // metadata only: heralding is modeled as a rho a^dagger
  int dim = kDefaultDim;

  void validate() const;
};

// Squeezed vacuum -> loss (1 - prep_loss) -> a rho a^dagger, built one slot
// larger than dim so that the subtraction does not lose the top level.
DensityMatrix pipeline_state(const PipelineSpec& spec);

struct CatFit {
  double alpha = 0.0;
  double fidelity = 0.0;
};

// Maximizes Tr[rho rho_cat(alpha)] over alpha in (0, alpha_max].
CatFit best_fit_cat(const DensityMatrix& rho, Parity parity = Parity::Odd, double alpha_max = 3.0);

struct PipelineReport {
  PipelineSpec spec;
  CatFit fit;
  CoherenceReport coherence;
  double wigner_min = 0.0;  // min{0, grid minimum}
  double mean_photon_number = 0.0;
};

PipelineReport pipeline_report(const PipelineSpec& spec);

struct Fig4Row {
  double eta = 1.0;
  DecoherenceCurvePoint ideal;
  std::optional<DecoherenceCurvePoint> model;
};

// Ideal odd cat of amplitude alpha (closed forms) and, optionally, the
// pipeline state propagated through the Kraus loss channel. Model fidelity is
// taken against the ideal odd cat of amplitude sqrt(eta) * alpha_fit.
std::vector<Fig4Row> decoherence_sweep(double alpha, std::span<const double> etas,
                                       const std::optional<PipelineSpec>& pipeline,
                                       int dim = kDefaultDim);

struct Fig5Row {
  double alpha = 0.0;
  double c_rel_lo = 0.0, c_rel_hi = 0.0;
  double c_l1_lo = 0.0, c_l1_hi = 0.0;
};

// Odd-cat coherence at two truncation dimensions.
std::vector<Fig5Row> truncation_sweep(std::span<const double> alphas, int dim_lo = 12,
                                      int dim_hi = 16);

// n points from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, int n);

}  // namespace catcoh
