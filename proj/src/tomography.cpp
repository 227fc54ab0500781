#include "catcoh/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>

#include "catcoh/channels.hpp"
#include "catcoh/wigner.hpp"

namespace catcoh {

namespace {

constexpr double kCompletenessTol = 1e-3;
constexpr double kLoglikSlack = 1e-9;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Uniform in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double unit_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Tabulated CDF of a 1-D density for inverse-transform sampling.
class TabulatedCdf {
 public:
  TabulatedCdf(std::vector<double> xs, const std::vector<double>& pdf) : xs_(std::move(xs)) {
    cdf_.assign(xs_.size(), 0.0);
    for (std::size_t i = 1; i < xs_.size(); ++i)
      cdf_[i] = cdf_[i - 1] +
                0.5 * (std::max(pdf[i], 0.0) + std::max(pdf[i - 1], 0.0)) * (xs_[i] - xs_[i - 1]);
    const double total = cdf_.back();
    for (double& c : cdf_) c /= total;
  }

  double invert(double u) const {
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.begin()) return xs_.front();
    if (it == cdf_.end()) return xs_.back();
    std::size_t hi = static_cast<std::size_t>(it - cdf_.begin());
    std::size_t lo = hi - 1;
    double span = cdf_[hi] - cdf_[lo];
    double frac = span > 0.0 ? (u - cdf_[lo]) / span : 0.5;
    return xs_[lo] + frac * (xs_[hi] - xs_[lo]);
  }

 private:
  std::vector<double> xs_;
  std::vector<double> cdf_;
};

double spectral_norm_hermitian(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

// Occupied-bin view of the POVM flattened for matrix-vector products:
// row j holds conj(vec(Pi_j)) so that Tr[Pi_j rho] = Re(row_j . vec(rho)).
struct FlatPovm {
  ComplexMatrix rows;
  Eigen::VectorXd counts;
  double total = 0.0;
  int dim = 0;

  FlatPovm(const BinnedCounts& binned, const Povm& povm) : dim(povm.dim) {
    std::vector<int> occupied;
    for (std::size_t j = 0; j < binned.counts.size(); ++j)
      if (binned.counts[j] > 0.0) occupied.push_back(static_cast<int>(j));
    const int d2 = dim * dim;
    rows.resize(static_cast<Eigen::Index>(occupied.size()), d2);
    counts.resize(static_cast<Eigen::Index>(occupied.size()));
    for (std::size_t r = 0; r < occupied.size(); ++r) {
      const ComplexMatrix& pi = povm.elements[occupied[r]];
      rows.row(r) = Eigen::Map<const ComplexVector>(pi.data(), d2).conjugate().transpose();
      counts(r) = binned.counts[occupied[r]];
      total += counts(r);
    }
  }

  Eigen::VectorXd probabilities(const ComplexMatrix& rho, double floor) const {
    Eigen::Map<const ComplexVector> v(rho.data(), dim * dim);
    return (rows * v).real().cwiseMax(floor);
  }

  double loglik(const Eigen::VectorXd& probs) const {
    return counts.dot(probs.array().log().matrix());
  }

  // R = sum_j (n_j / N) / p_j Pi_j
  ComplexMatrix r_operator(const Eigen::VectorXd& probs) const {
    Eigen::VectorXd w = counts.cwiseQuotient(probs) / total;
    ComplexVector flat = rows.adjoint() * w.cast<Complex>();
    return Eigen::Map<const ComplexMatrix>(flat.data(), dim, dim);
  }
};

ComplexMatrix normalized(const ComplexMatrix& m) {
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  return h / h.trace().real();
}

}  // namespace

void QuadratureRecord::validate() const {
  if (samples.empty()) throw DomainError("quadrature record is empty");
  for (const auto& s : samples) {
    if (!(s.theta >= 0.0 && s.theta < std::numbers::pi))
      throw DomainError("quadrature phase outside [0, pi): " + std::to_string(s.theta));
    if (!std::isfinite(s.x)) throw DomainError("non-finite quadrature value");
  }
}

void TomoConfig::validate() const {
  if (cutoff < 1) throw DomainError("photon-number cutoff must be at least 1");
  if (!(eta_det > 0.0 && eta_det <= 1.0)) throw DomainError("detection efficiency must lie in (0, 1]");
  if (n_phase_bins < 4 || n_x_bins < 4) throw DomainError("need at least 4 phase and 4 x bins");
  if (!(x_max > x_min)) throw DomainError("x range must be increasing");
  if (max_iters < 1) throw DomainError("max_iters must be at least 1");
  if (!(loglik_tol >= 0.0)) throw DomainError("loglik_tol must be non-negative");
  if (!(prob_floor > 0.0)) throw DomainError("probability floor must be positive");
}

std::vector<double> uniform_phases(int count) {
  if (count < 1) throw DomainError("need at least one phase");
  std::vector<double> phases(count);
  for (int k = 0; k < count; ++k) phases[k] = k * std::numbers::pi / count;
  return phases;
}

QuadratureRecord sample_homodyne(const DensityMatrix& rho, std::size_t n,
                                 std::span<const double> phases, double eta_det,
                                 std::uint64_t seed) {
  if (n < 1) throw DomainError("need at least one sample");
  std::vector<double> phase_list(phases.begin(), phases.end());
  if (phase_list.empty()) phase_list = uniform_phases();
  for (double th : phase_list)
    if (!(th >= 0.0 && th < std::numbers::pi)) throw DomainError("phase outside [0, pi)");

  const DensityMatrix detected = loss_channel(rho, LossSpec{eta_det});
  const double half_width = std::sqrt(2.0 * detected.dim() + 1.0) + 5.0;
  const int n_table = static_cast<int>(std::ceil(2.0 * half_width / 2e-3)) + 1;
  const std::vector<double> xs = uniform_axis(half_width, n_table);

  QuadratureRecord record;
  record.seed = seed;
  record.samples.reserve(n);
  const std::size_t n_phases = phase_list.size();
  for (std::size_t k = 0; k < n_phases; ++k) {
    const std::size_t count = n / n_phases + (k < n % n_phases ? 1 : 0);
    if (count == 0) continue;
    TabulatedCdf cdf(xs, quadrature_marginal(detected, phase_list[k], xs));
    std::mt19937_64 gen(splitmix64(seed ^ splitmix64(k + 1)));
    for (std::size_t i = 0; i < count; ++i)
      record.samples.push_back({phase_list[k], cdf.invert(unit_uniform(gen))});
  }
  record.source_note = "mt19937_64 per-phase streams seeded by splitmix64(seed ^ splitmix64(k+1)); "
                       "inverse CDF on tabulated marginal; eta_det=" + std::to_string(eta_det) +
                       "; phases=" + std::to_string(n_phases);
  return record;
}

Povm build_povm_unchecked(const TomoConfig& config) {
  config.validate();
  const int d = config.dim();
  Povm povm;
  povm.dim = d;
  povm.n_phases = config.n_phase_bins;
  povm.n_bins = config.n_x_bins;
  povm.phases = uniform_phases(config.n_phase_bins);
  povm.bin_edges.resize(config.n_x_bins + 1);
  const double width = (config.x_max - config.x_min) / config.n_x_bins;
  for (int b = 0; b <= config.n_x_bins; ++b) povm.bin_edges[b] = config.x_min + b * width;

  // int_bin psi_m psi_n dx by Gauss-Legendre, then the loss adjoint on the
  // theta = 0 projector. Other phases follow by rotation V = diag(e^{i n theta}).
  using Quad = boost::math::quadrature::gauss<double, 20>;
  std::vector<ComplexMatrix> smeared(config.n_x_bins);
  ComplexMatrix completeness = ComplexMatrix::Zero(d, d);
  for (int b = 0; b < config.n_x_bins; ++b) {
    const double lo = povm.bin_edges[b], hi = povm.bin_edges[b + 1];
    Eigen::MatrixXd integral = Eigen::MatrixXd::Zero(d, d);
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    const auto& nodes = Quad::abscissa();
    const auto& weights = Quad::weights();
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      for (int sgn : {1, -1}) {
        if (sgn == -1 && nodes[q] == 0.0) continue;
        auto psi = oscillator_wavefunctions(mid + sgn * half * nodes[q], d);
        Eigen::Map<const Eigen::VectorXd> v(psi.data(), d);
        integral += (half * weights[q]) * (v * v.transpose());
      }
    }
    smeared[b] = dual_loss_on_operator(integral.cast<Complex>(), LossSpec{config.eta_det});
    completeness += smeared[b];
  }
  povm.completeness_residual =
      spectral_norm_hermitian(completeness - ComplexMatrix::Identity(d, d));

  povm.elements.reserve(static_cast<std::size_t>(povm.n_phases) * povm.n_bins);
  for (double theta : povm.phases) {
    ComplexVector phase(d);
    for (int n = 0; n < d; ++n) phase(n) = std::exp(Complex(0.0, n * theta));
    for (int b = 0; b < povm.n_bins; ++b)
      povm.elements.push_back(phase.asDiagonal() * smeared[b] * phase.conjugate().asDiagonal());
  }
  return povm;
}

Povm build_povm(const TomoConfig& config) {
  Povm povm = build_povm_unchecked(config);
  if (povm.completeness_residual > kCompletenessTol)
    throw DomainError("POVM is incomplete over the x range (residual " +
                      std::to_string(povm.completeness_residual) + ")");
  return povm;
}

BinnedCounts bin_record(const QuadratureRecord& record, const TomoConfig& config) {
  record.validate();
  config.validate();
  BinnedCounts out;
  out.counts.assign(static_cast<std::size_t>(config.n_phase_bins) * config.n_x_bins, 0.0);
  const double width = (config.x_max - config.x_min) / config.n_x_bins;
  for (const auto& s : record.samples) {
    long k = std::lround(s.theta * config.n_phase_bins / std::numbers::pi);
    double x = s.x;
    if (k == config.n_phase_bins) {
      // x_{theta + pi} = -x_theta
      k = 0;
      x = -x;
    }
    double pos = (x - config.x_min) / width;
    if (pos < 0.0 || pos >= config.n_x_bins) {
      ++out.dropped;
      continue;
    }
    out.counts[static_cast<std::size_t>(k) * config.n_x_bins + static_cast<std::size_t>(pos)] += 1.0;
    ++out.used;
  }
  if (out.used == 0) throw DomainError("no quadrature samples inside the x range");
  return out;
}

double loglikelihood(const DensityMatrix& rho, const BinnedCounts& counts, const Povm& povm,
                     double prob_floor) {
  if (rho.dim() != povm.dim) throw DomainError("state and POVM dimensions differ");
  FlatPovm flat(counts, povm);
  return flat.loglik(flat.probabilities(rho.matrix(), prob_floor));
}

TomoResult maxlik_reconstruct(const QuadratureRecord& record, const TomoConfig& config) {
  Povm povm = build_povm(config);
  return maxlik_reconstruct(bin_record(record, config), povm, config);
}

TomoResult maxlik_reconstruct(const BinnedCounts& counts, const Povm& povm,
                              const TomoConfig& config) {
  config.validate();
  const int d = povm.dim;
  const FlatPovm flat(counts, povm);
  if (flat.total <= 0.0) throw DomainError("no counts to reconstruct from");
  const ComplexMatrix identity = ComplexMatrix::Identity(d, d);

  ComplexMatrix rho = identity / static_cast<double>(d);
  Eigen::VectorXd probs = flat.probabilities(rho, config.prob_floor);
  double loglik = flat.loglik(probs);
  std::vector<double> trace{loglik};
  bool converged = false;
  int iter = 0;
  while (iter < config.max_iters) {
    const ComplexMatrix r = flat.r_operator(probs);
    ComplexMatrix candidate = normalized(r * rho * r);
    Eigen::VectorXd cand_probs = flat.probabilities(candidate, config.prob_floor);
    double cand_loglik = flat.loglik(cand_probs);
    for (double e = 1.0; cand_loglik < loglik - kLoglikSlack && e > 1e-8; e *= 0.5) {
      const ComplexMatrix t = identity + e * r;
      candidate = normalized(t * rho * t);
      cand_probs = flat.probabilities(candidate, config.prob_floor);
      cand_loglik = flat.loglik(cand_probs);
    }
    if (cand_loglik < loglik - kLoglikSlack) {
      converged = true;  // no ascent direction left at this resolution
      break;
    }
    ++iter;
    const double gain = cand_loglik - loglik;
    rho = std::move(candidate);
    probs = std::move(cand_probs);
    loglik = cand_loglik;
    trace.push_back(loglik);
    if (iter % 10 == 0) DensityMatrix check(rho);  // throws if an invariant broke
    if (gain < config.loglik_tol) {
      converged = true;
      break;
    }
  }
  return TomoResult{DensityMatrix(rho), iter, loglik, converged, std::move(trace), counts.used,
                    counts.dropped};
}

}  // namespace catcoh
