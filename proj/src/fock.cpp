#include "catcoh/fock.hpp"

#include <cmath>
#include <functional>
#include <string>

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/gamma.hpp>

namespace catcoh {

namespace {

void require_dim(int dim) {
  if (dim < 2) throw DomainError("dimension must be at least 2, got " + std::to_string(dim));
}

// Sums exp(log_weight(n)) over n >= first. The weights are eventually
// decreasing (Poisson-like); stop once past the mode and negligible.
double sum_tail(int first, const std::function<double(int)>& log_weight, int step = 1) {
  double sum = 0.0;
  double prev = -INFINITY;
  for (int n = first, iter = 0; iter < 200000; n += step, ++iter) {
    double lw = log_weight(n);
    double term = std::exp(lw);
    sum += term;
    bool decreasing = lw < prev;
    prev = lw;
    if (decreasing && (term <= sum * 1e-18 || term < 1e-300)) break;
    if (!std::isfinite(lw) && lw < 0) break;
  }
  return sum;
}

// log(alpha^{2n} / n!), with the alpha = 0 limit.
double log_poisson_weight(double alpha, int n) {
  if (alpha == 0.0) return n == 0 ? 0.0 : -INFINITY;
  return 2.0 * n * std::log(alpha) - std::lgamma(n + 1.0);
}

bool on_support(Parity parity, int n) { return (n % 2 == 1) == (parity == Parity::Odd); }

}  // namespace

Parity flipped(Parity p) { return p == Parity::Even ? Parity::Odd : Parity::Even; }

const char* to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

Parity parity_from_string(const std::string& s) {
  if (s == "even" || s == "+") return Parity::Even;
  if (s == "odd" || s == "-") return Parity::Odd;
  throw DomainError("parity must be 'even' or 'odd', got '" + s + "'");
}

// ---------------------------------------------------------------------------

FockKet::FockKet(ComplexVector amps, double tail_mass)
    : amps_(std::move(amps)), tail_mass_(tail_mass) {
  require_dim(dim());
  double norm2 = amps_.squaredNorm();
  if (!std::isfinite(norm2) || std::abs(norm2 - 1.0) > 1e-12)
    throw DomainError("ket is not normalized: |psi|^2 = " + std::to_string(norm2));
}

double FockKet::mean_photon_number() const {
  double n_mean = 0.0;
  for (int n = 0; n < dim(); ++n) n_mean += n * population(n);
  return n_mean;
}

DensityMatrix::DensityMatrix(const ComplexMatrix& m, double tail_mass) : tail_mass_(tail_mass) {
  if (m.rows() != m.cols()) throw DomainError("density matrix must be square");
  require_dim(static_cast<int>(m.rows()));
  if (!m.allFinite()) throw DomainError("density matrix has non-finite entries");
  double herm = hermiticity_residual(m);
  if (herm > kHermitianTol)
    throw DomainError("density matrix is not Hermitian (residual " + std::to_string(herm) + ")");
  double tr = m.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol)
    throw DomainError("density matrix trace is " + std::to_string(tr) + ", expected 1");
  rho_ = 0.5 * (m + m.adjoint());
  double lmin = min_eigenvalue(rho_);
  if (lmin < -kPsdTol)
    throw DomainError("density matrix is not positive semidefinite (min eigenvalue " +
                      std::to_string(lmin) + ")");
}

DensityMatrix DensityMatrix::vacuum(int dim) { return number_state(0, dim); }

DensityMatrix DensityMatrix::number_state(int n, int dim) {
  require_dim(dim);
  if (n < 0 || n >= dim) throw DomainError("number state outside the truncated space");
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(n, n) = 1.0;
  return DensityMatrix(m);
}

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

double DensityMatrix::mean_photon_number() const {
  double n_mean = 0.0;
  for (int n = 0; n < dim(); ++n) n_mean += n * population(n);
  return n_mean;
}

double DensityMatrix::hermiticity_residual(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------------------

SqueezeSpec SqueezeSpec::from_db(double db, int dim) {
  if (!std::isfinite(db)) throw DomainError("squeezing in dB must be finite");
  return SqueezeSpec{std::abs(db) * std::log(10.0) / 20.0, dim};
}

double SqueezeSpec::variance_ratio() const { return std::exp(-2.0 * r); }

FockKet coherent_ket(double alpha, int dim) {
  require_dim(dim);
  if (!std::isfinite(alpha)) throw DomainError("coherent amplitude must be finite");
  double a = std::abs(alpha);
  ComplexVector amps(dim);
  for (int n = 0; n < dim; ++n) {
    double lw = log_poisson_weight(a, n);
    double c = std::exp(0.5 * lw);
    amps(n) = (alpha < 0 && n % 2 == 1) ? -c : c;
  }
  amps /= amps.norm();
  double tail = a == 0.0 ? 0.0 : boost::math::gamma_p(static_cast<double>(dim), a * a);
  return FockKet(std::move(amps), tail);
}

FockKet cat_ket(const CatSpec& spec) {
  require_dim(spec.dim);
  const double alpha = spec.alpha;
  if (!std::isfinite(alpha) || alpha < 0.0)
    throw DomainError("cat amplitude must be finite and non-negative");
  if (spec.parity == Parity::Odd && alpha == 0.0)
    throw DomainError("odd cat state with alpha = 0 has zero norm");

  ComplexVector amps = ComplexVector::Zero(spec.dim);
  // Work relative to the largest retained weight so tiny alpha stays exact.
  const int first = spec.parity == Parity::Odd ? 1 : 0;
  const double log_ref = log_poisson_weight(alpha, first);
  for (int n = first; n < spec.dim; n += 2)
    amps(n) = std::exp(0.5 * (log_poisson_weight(alpha, n) - log_ref));
  amps /= amps.norm();

  // Untruncated norm over the parity support is cosh(alpha^2) or sinh(alpha^2).
  double tail = 0.0;
  if (alpha > 0.0) {
    const int first_out = spec.dim + (on_support(spec.parity, spec.dim) ? 0 : 1);
    auto rel = [&](int n) { return log_poisson_weight(alpha, n) - log_ref; };
    double outside = sum_tail(first_out, rel, 2);
    double inside = sum_tail(first, rel, 2);  // full support
    tail = outside / inside;
  }
  return FockKet(std::move(amps), tail);
}

FockKet squeezed_vacuum_ket(const SqueezeSpec& spec) {
  require_dim(spec.dim);
  if (!std::isfinite(spec.r) || spec.r < 0.0)
    throw DomainError("squeezing parameter must be finite and non-negative");
  // Squeezed along p, anti-squeezed along x, so that photon subtraction
  // yields cats with real amplitude:
  //   c_{2m} = tanh(r)^m sqrt((2m)!) / (2^m m!) / sqrt(cosh r).
  const double t = std::tanh(spec.r);
  auto log_pop = [&](int m) {
    if (t == 0.0) return m == 0 ? 0.0 : -INFINITY;
    return 2.0 * m * std::log(t) + std::lgamma(2.0 * m + 1.0) - 2.0 * m * std::log(2.0) -
           2.0 * std::lgamma(m + 1.0) - std::log(std::cosh(spec.r));
  };
  ComplexVector amps = ComplexVector::Zero(spec.dim);
  for (int n = 0; n < spec.dim; n += 2) amps(n) = std::exp(0.5 * log_pop(n / 2));
  double norm = amps.norm();
  amps /= norm;
  double tail = spec.r == 0.0 ? 0.0 : sum_tail((spec.dim + 1) / 2, log_pop);
  return FockKet(std::move(amps), tail);
}

DensityMatrix ket_to_density(const FockKet& ket) {
  const ComplexVector& c = ket.amplitudes();
  return DensityMatrix(c * c.adjoint(), ket.tail_mass());
}

ComplexMatrix annihilation_operator(int dim) {
  ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

DensityMatrix photon_subtract(const DensityMatrix& rho) {
  const ComplexMatrix a = annihilation_operator(rho.dim());
  ComplexMatrix out = a * rho.matrix() * a.adjoint();
  double prob = out.trace().real();
  if (!(prob > 1e-300)) throw DomainError("zero subtraction probability");
  return DensityMatrix(out / prob, rho.tail_mass());
}

double tail_mass(const FockKet& ket, int cutoff) {
  if (cutoff < 0 || cutoff >= ket.dim())
    throw DomainError("cutoff must lie inside the truncated space");
  double mass = 0.0;
  for (int n = cutoff + 1; n < ket.dim(); ++n) mass += ket.population(n);
  if (cutoff == ket.dim() - 1) return ket.tail_mass();
  // Populations inside are renormalized; undo that before adding the
  // untruncated remainder.
  return mass * (1.0 - ket.tail_mass()) + ket.tail_mass();
}

double tail_mass(const DensityMatrix& rho, int cutoff) {
  if (cutoff < 0 || cutoff >= rho.dim())
    throw DomainError("cutoff must lie inside the truncated space");
  double mass = 0.0;
  for (int n = cutoff + 1; n < rho.dim(); ++n) mass += rho.population(n);
  if (cutoff == rho.dim() - 1) return rho.tail_mass();
  return mass * (1.0 - rho.tail_mass()) + rho.tail_mass();
}

DensityMatrix crop(const DensityMatrix& rho, int dim) {
  require_dim(dim);
  if (dim > rho.dim()) throw DomainError("crop cannot enlarge a density matrix");
  ComplexMatrix block = rho.matrix().topLeftCorner(dim, dim);
  double kept = block.trace().real();
  if (!(kept > 0.0)) throw DomainError("crop discards the whole state");
  double tail = (1.0 - kept) + kept * rho.tail_mass();
  return DensityMatrix(block / kept, tail);
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw DomainError("trace distance needs equal dimensions");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix() - b.matrix(),
                                                      Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double overlap(const DensityMatrix& rho, const FockKet& ket) {
  if (rho.dim() != ket.dim()) throw DomainError("overlap needs equal dimensions");
  const ComplexVector& c = ket.amplitudes();
  return (c.adjoint() * rho.matrix() * c)(0, 0).real();
}

}  // namespace catcoh
