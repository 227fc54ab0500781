#pragma once

// Phase-space representations with x = (a + a^dagger)/sqrt(2),
// p = (a - a^dagger)/(i sqrt(2)): vacuum variance 1/2, W_vac(0,0) = 1/pi.

#include <span>
#include <vector>

#include "catcoh/fock.hpp"

namespace catcoh {

struct PhasePoint {
  double x = 0.0;
  double p = 0.0;
};

inline constexpr double kDefaultGridHalfWidth = 5.0;
inline constexpr int kDefaultGridPoints = 201;

struct WignerGrid {
  std::vector<double> xs;
  std::vector<double> ps;
  std::vector<double> values;  // row-major over xs then ps

  double at(std::size_t ix, std::size_t ip) const { return values[ix * ps.size() + ip]; }
  double min() const;
  double max() const;
  // Riemann sum of W dx dp with uniform-spacing weights.
  double integral() const;
  // Riemann sum over p for each x.
  std::vector<double> x_marginal() const;
};

// Evaluates W(x, p) = sum_{m,n} rho_mn W_{mn}(x, p) using Laguerre
// polynomials in 2(x^2 + p^2). Holds only a reference to rho.
class WignerEvaluator {
 public:
  explicit WignerEvaluator(const DensityMatrix& rho);
  double operator()(PhasePoint pt) const;

 private:
  const DensityMatrix& rho_;
  std::vector<double> sqrt_ratio_;  // sqrt(n!/(n+k)!) at [k * d + n]
};

double wigner_point(const DensityMatrix& rho, PhasePoint pt);

// n ascending points spanning [-half_width, half_width].
std::vector<double> uniform_axis(double half_width = kDefaultGridHalfWidth,
                                 int n = kDefaultGridPoints);

WignerGrid wigner_grid(const DensityMatrix& rho, std::span<const double> xs,
                       std::span<const double> ps);

// min{0, min over the grid}. The grid must cover [-5, 5]^2.
double wigner_negativity_grid(const WignerGrid& grid);
double wigner_negativity_grid(const DensityMatrix& rho);

// psi_0..psi_{dim-1} at x, via the normalized Hermite-function recurrence.
std::vector<double> oscillator_wavefunctions(double x, int dim);

// pr(x | theta) = sum_mn rho_mn e^{i(n-m) theta} psi_m(x) psi_n(x), the
// distribution of x_theta = x cos(theta) + p sin(theta).
std::vector<double> quadrature_marginal(const DensityMatrix& rho, double theta,
                                        std::span<const double> xs);

}  // namespace catcoh
