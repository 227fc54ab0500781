#include "catcoh/channels.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace catcoh {

namespace {

// kraus[k][n] = <n-k| A_k |n> for n >= k.
std::vector<std::vector<double>> kraus_elements(double eta, int dim) {
  std::vector<std::vector<double>> kraus(dim, std::vector<double>(dim, 0.0));
  const double log_eta = std::log(eta);
  const double log_loss = std::log1p(-eta);
  for (int k = 0; k < dim; ++k) {
    for (int n = k; n < dim; ++n) {
      double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
      double lw = log_binom;
      if (n - k > 0) lw += (n - k) * log_eta;
      if (k > 0) lw += k * log_loss;
      kraus[k][n] = std::exp(0.5 * lw);
    }
  }
  return kraus;
}

}  // namespace

void LossSpec::validate() const {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw DomainError("transmission efficiency must lie in [0, 1], got " + std::to_string(eta));
}

DensityMatrix loss_channel(const DensityMatrix& rho, LossSpec loss) {
  loss.validate();
  const int d = rho.dim();
  if (loss.eta == 1.0) return rho;
  if (loss.eta == 0.0) {
    ComplexMatrix vac = ComplexMatrix::Zero(d, d);
    vac(0, 0) = 1.0;
    return DensityMatrix(vac, rho.tail_mass());
  }
  const auto kraus = kraus_elements(loss.eta, d);
  const ComplexMatrix& in = rho.matrix();
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k)
    for (int n = k; n < d; ++n)
      for (int m = k; m < d; ++m)
        out(m - k, n - k) += kraus[k][m] * in(m, n) * kraus[k][n];
  return DensityMatrix(out, rho.tail_mass());
}

ComplexMatrix dual_loss_on_operator(const ComplexMatrix& op, LossSpec loss) {
  loss.validate();
  if (op.rows() != op.cols()) throw DomainError("operator must be square");
  const int d = static_cast<int>(op.rows());
  if (DensityMatrix::hermiticity_residual(op) > kHermitianTol * std::max(1.0, op.cwiseAbs().maxCoeff()))
    throw DomainError("dual loss map expects a Hermitian operator");
  if (loss.eta == 1.0) return op;
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  if (loss.eta == 0.0) {
    // Every Fock state decays to vacuum: L^dagger(op) = <0|op|0> * identity.
    out.diagonal().setConstant(op(0, 0));
    return out;
  }
  const auto kraus = kraus_elements(loss.eta, d);
  for (int k = 0; k < d; ++k)
    for (int n = k; n < d; ++n)
      for (int m = k; m < d; ++m)
        out(m, n) += kraus[k][m] * op(m - k, n - k) * kraus[k][n];
  return out;
}

double cat_normalization(double alpha, Parity parity) {
  double e = std::exp(-2.0 * alpha * alpha);
  return parity == Parity::Even ? 2.0 * (1.0 + e) : 2.0 * (1.0 - e);
}

double conversion_probability(double alpha, Parity parity, LossSpec loss) {
  loss.validate();
  if (!std::isfinite(alpha) || alpha <= 0.0)
    throw DomainError("cat amplitude must be positive");
  if (loss.eta == 1.0) return 0.0;
  const double a2 = alpha * alpha;
  const double scaled = std::sqrt(loss.eta) * alpha;
  // 1 - e^{-2x} and N_odd use expm1 to stay accurate for small arguments.
  const double decay = -std::expm1(-2.0 * (1.0 - loss.eta) * a2);
  auto norm = [](double a, Parity p) {
    return p == Parity::Even ? 2.0 * (1.0 + std::exp(-2.0 * a * a))
                             : -2.0 * std::expm1(-2.0 * a * a);
  };
  double p = norm(scaled, flipped(parity)) / (2.0 * norm(alpha, parity)) * decay;
  return std::clamp(p, 0.0, 1.0);
}

DensityMatrix cat_loss_analytic(double alpha, Parity parity, LossSpec loss, int dim) {
  loss.validate();
  if (!std::isfinite(alpha) || alpha <= 0.0)
    throw DomainError("cat amplitude must be positive");
  if (loss.eta == 0.0) return DensityMatrix::vacuum(dim);
  const double p_flip = conversion_probability(alpha, parity, loss);
  const double scaled = std::sqrt(loss.eta) * alpha;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  double tail = 0.0;
  auto add = [&](Parity p, double weight) {
    if (weight == 0.0) return;
    FockKet ket = cat_ket({scaled, p, dim});
    out += weight * ket.amplitudes() * ket.amplitudes().adjoint();
    tail += weight * ket.tail_mass();
  };
  add(parity, 1.0 - p_flip);
  add(flipped(parity), p_flip);
  double tr = out.trace().real();
  if (std::abs(tr - 1.0) > 1e-12) out /= tr;
  return DensityMatrix(out, tail);
}

}  // namespace catcoh
