#include "catcoh/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace catcoh {

namespace {

void require_ascending(std::span<const double> axis, const char* name) {
  if (axis.empty()) throw DomainError(std::string("empty ") + name + " axis");
  for (std::size_t i = 1; i < axis.size(); ++i)
    if (!(axis[i] > axis[i - 1])) throw DomainError(std::string(name) + " axis must be ascending");
}

// Spacing weight for a Riemann sum on a possibly non-uniform ascending axis.
std::vector<double> axis_weights(const std::vector<double>& axis) {
  std::vector<double> w(axis.size(), 0.0);
  if (axis.size() < 2) return w;
  for (std::size_t i = 0; i < axis.size(); ++i) {
    double lo = i == 0 ? axis[0] : 0.5 * (axis[i - 1] + axis[i]);
    double hi = i + 1 == axis.size() ? axis[i] : 0.5 * (axis[i] + axis[i + 1]);
    w[i] = hi - lo;
  }
  // Endpoints get a half cell, matching the trapezoid rule.
  return w;
}

}  // namespace

double WignerGrid::min() const { return *std::min_element(values.begin(), values.end()); }
double WignerGrid::max() const { return *std::max_element(values.begin(), values.end()); }

double WignerGrid::integral() const {
  auto wx = axis_weights(xs);
  auto wp = axis_weights(ps);
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ps.size(); ++j) sum += wx[i] * wp[j] * at(i, j);
  return sum;
}

std::vector<double> WignerGrid::x_marginal() const {
  auto wp = axis_weights(ps);
  std::vector<double> out(xs.size(), 0.0);
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ps.size(); ++j) out[i] += wp[j] * at(i, j);
  return out;
}

WignerEvaluator::WignerEvaluator(const DensityMatrix& rho) : rho_(rho) {
  const int d = rho.dim();
  sqrt_ratio_.assign(static_cast<std::size_t>(d) * d, 0.0);
  for (int k = 0; k < d; ++k)
    for (int n = 0; n + k < d; ++n)
      sqrt_ratio_[k * d + n] = std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(n + k + 1.0)));
}

double WignerEvaluator::operator()(PhasePoint pt) const {
  // For m = n + k >= n:
  //   W_mn = (-1)^n / pi * sqrt(n!/m!) (sqrt2 (x - i p))^k e^{-(x^2+p^2)} L_n^k(2(x^2+p^2)),
  // and W_nm = conj(W_mn).
  const int d = rho_.dim();
  const ComplexMatrix& rho = rho_.matrix();
  const double r2 = pt.x * pt.x + pt.p * pt.p;
  const double t = 2.0 * r2;
  const double gauss = std::exp(-r2) / std::numbers::pi;
  const Complex z(std::numbers::sqrt2 * pt.x, -std::numbers::sqrt2 * pt.p);

  double w = 0.0;
  Complex z_pow(1.0, 0.0);
  for (int k = 0; k < d; ++k) {
    // Generalized Laguerre L_n^k(t) by three-term recurrence in n.
    double l_prev = 0.0, l_cur = 1.0;
    Complex partial(0.0, 0.0);
    for (int n = 0; n + k < d; ++n) {
      if (n == 1) {
        l_prev = 1.0;
        l_cur = 1.0 + k - t;
      } else if (n > 1) {
        double l_next = ((2.0 * (n - 1) + 1.0 + k - t) * l_cur - (n - 1 + k) * l_prev) / n;
        l_prev = l_cur;
        l_cur = l_next;
      }
      double sign = (n % 2 == 0) ? 1.0 : -1.0;
      partial += rho(n + k, n) * (sign * sqrt_ratio_[k * d + n] * l_cur);
    }
    Complex term = partial * z_pow;
    w += (k == 0 ? 1.0 : 2.0) * term.real();
    z_pow *= z;
  }
  return w * gauss;
}

double wigner_point(const DensityMatrix& rho, PhasePoint pt) { return WignerEvaluator(rho)(pt); }

std::vector<double> uniform_axis(double half_width, int n) {
  if (n < 2 || !(half_width > 0.0)) throw DomainError("axis needs n >= 2 and positive width");
  std::vector<double> axis(n);
  for (int i = 0; i < n; ++i) axis[i] = -half_width + 2.0 * half_width * i / (n - 1);
  // Pin the midpoint to exactly zero for odd n.
  if (n % 2 == 1) axis[n / 2] = 0.0;
  return axis;
}

WignerGrid wigner_grid(const DensityMatrix& rho, std::span<const double> xs,
                       std::span<const double> ps) {
  require_ascending(xs, "x");
  require_ascending(ps, "p");
  WignerGrid grid{{xs.begin(), xs.end()}, {ps.begin(), ps.end()}, {}};
  grid.values.resize(xs.size() * ps.size());
  WignerEvaluator eval(rho);
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ps.size(); ++j)
      grid.values[i * ps.size() + j] = eval({xs[i], ps[j]});
  return grid;
}

double wigner_negativity_grid(const WignerGrid& grid) {
  constexpr double kCover = kDefaultGridHalfWidth - 1e-12;
  if (grid.xs.empty() || grid.ps.empty() || grid.xs.front() > -kCover || grid.xs.back() < kCover ||
      grid.ps.front() > -kCover || grid.ps.back() < kCover)
    throw DomainError("negativity grid must cover [-5, 5] x [-5, 5]");
  return std::min(0.0, grid.min());
}

double wigner_negativity_grid(const DensityMatrix& rho) {
  auto axis = uniform_axis();
  return wigner_negativity_grid(wigner_grid(rho, axis, axis));
}

std::vector<double> oscillator_wavefunctions(double x, int dim) {
  std::vector<double> psi(dim, 0.0);
  psi[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (dim > 1) psi[1] = std::numbers::sqrt2 * x * psi[0];
  for (int n = 2; n < dim; ++n)
    psi[n] = std::sqrt(2.0 / n) * x * psi[n - 1] - std::sqrt((n - 1.0) / n) * psi[n - 2];
  return psi;
}

std::vector<double> quadrature_marginal(const DensityMatrix& rho, double theta,
                                        std::span<const double> xs) {
  const int d = rho.dim();
  const ComplexMatrix& m = rho.matrix();
  std::vector<double> out(xs.size());
  ComplexVector v(d);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    auto psi = oscillator_wavefunctions(xs[i], d);
    // pr = v^dagger rho v with v_n = e^{i n theta} psi_n.
    for (int n = 0; n < d; ++n) v(n) = psi[n] * std::exp(Complex(0.0, n * theta));
    double pr = (v.adjoint() * m * v)(0, 0).real();
    out[i] = pr < 0.0 && pr > -1e-10 ? 0.0 : pr;
  }
  return out;
}

}  // namespace catcoh
