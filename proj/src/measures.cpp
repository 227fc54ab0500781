#include "catcoh/measures.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "catcoh/channels.hpp"

namespace catcoh {

namespace {

constexpr double kClampTol = 1e-9;

double plogp_bits(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

void require_amplitude(double alpha) {
  if (!std::isfinite(alpha) || alpha < 0.0)
    throw DomainError("cat amplitude must be finite and non-negative");
}

void require_eta(double eta) { LossSpec{eta}.validate(); }

// log(alpha^{2n}/n!) on the parity support, relative to the first retained
// weight. Empty when alpha = 0 (limit handled by callers).
std::vector<double> relative_log_weights(double alpha, Parity parity, int dim) {
  std::vector<double> lw;
  const int first = parity == Parity::Odd ? 1 : 0;
  const double log_ref = 2.0 * first * std::log(alpha) - std::lgamma(first + 1.0);
  for (int n = first; n < dim; n += 2)
    lw.push_back(2.0 * n * std::log(alpha) - std::lgamma(n + 1.0) - log_ref);
  return lw;
}

}  // namespace

double shannon_entropy(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities) h -= plogp_bits(p);
  return h;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix(), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (double lambda : solver.eigenvalues()) {
    if (lambda < -kPsdTol)
      throw DomainError("negative eigenvalue " + std::to_string(lambda) + " in entropy");
    s -= plogp_bits(std::max(lambda, 0.0));
  }
  return std::max(s, 0.0);
}

double rel_entropy_coherence(const DensityMatrix& rho) {
  std::vector<double> diag(rho.dim());
  for (int n = 0; n < rho.dim(); ++n) diag[n] = std::max(rho.population(n), 0.0);
  double c = shannon_entropy(diag) - von_neumann_entropy(rho);
  if (c < 0.0 && c > -kClampTol) c = 0.0;
  return c;
}

double l1_coherence(const DensityMatrix& rho) {
  const ComplexMatrix& m = rho.matrix();
  double sum = 0.0;
  for (int i = 0; i < rho.dim(); ++i)
    for (int j = 0; j < rho.dim(); ++j)
      if (i != j) sum += std::abs(m(i, j));
  return sum;
}

CoherenceReport coherence_report(const DensityMatrix& rho) {
  return {rel_entropy_coherence(rho), l1_coherence(rho), rho.dim()};
}

double cat_rel_entropy_truncated(double alpha, Parity parity, int dim) {
  require_amplitude(alpha);
  if (alpha == 0.0) return 0.0;
  // With w_n = alpha^{2n}/n! and N = sum of retained w_n:
  //   C = (1/N) (sum w_n log2 N - sum w_n log2 w_n).
  // Weights are rescaled by the first one; C is invariant under that.
  const auto lw = relative_log_weights(alpha, parity, dim);
  double norm = 0.0;
  for (double l : lw) norm += std::exp(l);
  const double log2_norm = std::log2(norm);
  double acc = 0.0;
  for (double l : lw) {
    double w = std::exp(l);
    acc += w * log2_norm - w * (l / std::numbers::ln2);
  }
  return std::max(acc / norm, 0.0);
}

double cat_l1_truncated(double alpha, Parity parity, int dim) {
  require_amplitude(alpha);
  if (alpha == 0.0) return 0.0;
  // sum_{m != n} alpha^{m+n}/sqrt(m! n!) = (sum_n a_n)^2 - sum_n a_n^2.
  const auto lw = relative_log_weights(alpha, parity, dim);
  double norm = 0.0, amp_sum = 0.0;
  for (double l : lw) {
    norm += std::exp(l);
    amp_sum += std::exp(0.5 * l);
  }
  return std::max((amp_sum * amp_sum - norm) / norm, 0.0);
}

CoherenceReport lossy_cat_coherence(double alpha, Parity parity, double eta, int dim) {
  require_amplitude(alpha);
  require_eta(eta);
  if (alpha == 0.0 || eta == 0.0) return {0.0, 0.0, dim};
  const double p_flip = conversion_probability(alpha, parity, LossSpec{eta});
  const double scaled = std::sqrt(eta) * alpha;
  CoherenceReport r{0.0, 0.0, dim};
  r.c_rel_ent = (1.0 - p_flip) * cat_rel_entropy_truncated(scaled, parity, dim) +
                p_flip * cat_rel_entropy_truncated(scaled, flipped(parity), dim);
  r.c_l1 = (1.0 - p_flip) * cat_l1_truncated(scaled, parity, dim) +
           p_flip * cat_l1_truncated(scaled, flipped(parity), dim);
  return r;
}

double fidelity_to_cat(const DensityMatrix& rho, double alpha_ref, Parity parity) {
  FockKet ref = cat_ket({alpha_ref, parity, rho.dim()});
  return std::clamp(overlap(rho, ref), 0.0, 1.0 + 1e-10);
}

double fidelity_loss_analytic(double alpha, double eta) {
  require_eta(eta);
  if (!std::isfinite(alpha) || alpha <= 0.0) throw DomainError("cat amplitude must be positive");
  const double a2 = alpha * alpha;
  return std::cosh(-a2 * (1.0 - eta)) * std::sinh(eta * a2) / std::sinh(a2);
}

double wigner_origin_analytic(double alpha, double eta) {
  require_eta(eta);
  if (!std::isfinite(alpha) || alpha <= 0.0) throw DomainError("cat amplitude must be positive");
  const double a2 = alpha * alpha;
  const double n_odd = cat_normalization(alpha, Parity::Odd);
  // 2 - 2 e^{-2 a2 (1 - 2 eta)} = -2 expm1(...)
  const double bracket = -2.0 * std::expm1(-2.0 * a2 * (1.0 - 2.0 * eta));
  return std::exp(-2.0 * a2 * eta) * bracket / (std::numbers::pi * n_odd);
}

double negativity_analytic(double alpha, double eta) {
  return std::min(0.0, wigner_origin_analytic(alpha, eta));
}

DecoherenceCurvePoint ideal_odd_cat_point(double alpha, double eta, int dim) {
  CoherenceReport c = lossy_cat_coherence(alpha, Parity::Odd, eta, dim);
  return {eta, c.c_rel_ent, c.c_l1, fidelity_loss_analytic(alpha, eta),
          negativity_analytic(alpha, eta)};
}

}  // namespace catcoh
