#include "catcoh/experiment.hpp"

#include <cmath>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "catcoh/channels.hpp"
#include "catcoh/wigner.hpp"

namespace catcoh {

void PipelineSpec::validate() const {
  if (!std::isfinite(squeeze_db)) throw DomainError("squeezing must be finite");
  if (!(prep_loss >= 0.0 && prep_loss < 1.0)) throw DomainError("prep_loss must lie in [0, 1)");
  if (!(tap > 0.0 && tap < 1.0)) throw DomainError("tap transmissivity must lie in (0, 1)");
  if (dim < 2) throw DomainError("dimension must be at least 2");
}

DensityMatrix pipeline_state(const PipelineSpec& spec) {
  spec.validate();
  const int work = spec.dim + 1;
  DensityMatrix squeezed = ket_to_density(squeezed_vacuum_ket(SqueezeSpec::from_db(spec.squeeze_db, work)));
  DensityMatrix lossy = loss_channel(squeezed, LossSpec{1.0 - spec.prep_loss});
  return crop(photon_subtract(lossy), spec.dim);
}

CatFit best_fit_cat(const DensityMatrix& rho, Parity parity, double alpha_max) {
  if (!(alpha_max > 0.0)) throw DomainError("alpha_max must be positive");
  // Coarse scan, then Brent refinement around the best bracket.
  constexpr int kScan = 300;
  const double step = alpha_max / kScan;
  auto fid = [&](double a) { return fidelity_to_cat(rho, a, parity); };
  int best = 1;
  double best_f = -1.0;
  for (int i = 1; i <= kScan; ++i) {
    double f = fid(i * step);
    if (f > best_f) {
      best_f = f;
      best = i;
    }
  }
  double lo = std::max((best - 1) * step, 1e-6), hi = std::min((best + 1) * step, alpha_max);
  auto [a, neg_f] = boost::math::tools::brent_find_minima([&](double x) { return -fid(x); }, lo, hi, 40);
  if (-neg_f < best_f) return {best * step, best_f};
  return {a, -neg_f};
}

PipelineReport pipeline_report(const PipelineSpec& spec) {
  DensityMatrix rho = pipeline_state(spec);
  PipelineReport report;
  report.spec = spec;
  report.fit = best_fit_cat(rho, Parity::Odd);
  report.coherence = coherence_report(rho);
  report.wigner_min = wigner_negativity_grid(rho);
  report.mean_photon_number = rho.mean_photon_number();
  return report;
}

std::vector<Fig4Row> decoherence_sweep(double alpha, std::span<const double> etas,
                                       const std::optional<PipelineSpec>& pipeline, int dim) {
  if (etas.empty()) throw DomainError("eta list is empty");
  for (double eta : etas) LossSpec{eta}.validate();
  std::optional<DensityMatrix> model_state;
  double alpha_fit = 0.0;
  if (pipeline) {
    PipelineSpec spec = *pipeline;
    spec.dim = dim;
    model_state = pipeline_state(spec);
    alpha_fit = best_fit_cat(*model_state, Parity::Odd).alpha;
  }
  std::vector<Fig4Row> rows;
  rows.reserve(etas.size());
  for (double eta : etas) {
    Fig4Row row{eta, ideal_odd_cat_point(alpha, eta, dim), std::nullopt};
    if (model_state) {
      DensityMatrix out = loss_channel(*model_state, LossSpec{eta});
      CoherenceReport c = coherence_report(out);
      double ref = std::sqrt(eta) * alpha_fit;
      // alpha -> 0 limit of the odd cat is |1>.
      double f = ref > 0.0 ? fidelity_to_cat(out, ref, Parity::Odd) : out.population(1);
      row.model = DecoherenceCurvePoint{eta, c.c_rel_ent, c.c_l1, f, wigner_negativity_grid(out)};
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<Fig5Row> truncation_sweep(std::span<const double> alphas, int dim_lo, int dim_hi) {
  if (alphas.empty()) throw DomainError("alpha list is empty");
  std::vector<Fig5Row> rows;
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 3.0)) throw DomainError("alpha must lie in [0, 3]");
    rows.push_back({a, cat_rel_entropy_truncated(a, Parity::Odd, dim_lo),
                    cat_rel_entropy_truncated(a, Parity::Odd, dim_hi),
                    cat_l1_truncated(a, Parity::Odd, dim_lo), cat_l1_truncated(a, Parity::Odd, dim_hi)});
  }
  return rows;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw DomainError("linspace needs n >= 1");
  if (n == 1) return {lo};
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  v.back() = hi;
  return v;
}

}  // namespace catcoh
