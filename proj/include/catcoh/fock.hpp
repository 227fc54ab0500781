#pragma once

// Truncated Fock-basis states of a single bosonic mode.
//
// Kets and density matrices live in span{|0>, ..., |d-1>}. Constructors for
// infinite-dimensional states (coherent, cat, squeezed vacuum) renormalize
// over the truncated support and remember the probability mass that fell
// beyond the cutoff, so callers can decide whether d was large enough.

#include <complex>
#include <Eigen/Dense>

#include "catcoh/errors.hpp"

namespace catcoh {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr int kDefaultDim = 12;
inline constexpr double kTruncationThreshold = 1e-3;

// Tolerances for the DensityMatrix invariants.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

enum class Parity { Even, Odd };

Parity flipped(Parity p);
const char* to_string(Parity p);
Parity parity_from_string(const std::string& s);

class FockKet {
 public:
  // Takes ownership of normalized amplitudes; throws DomainError if the norm
  // is off by more than 1e-12 or dim < 2.
  explicit FockKet(ComplexVector amps, double tail_mass = 0.0);

  int dim() const { return static_cast<int>(amps_.size()); }
  const ComplexVector& amplitudes() const { return amps_; }
  Complex operator[](int n) const { return amps_(n); }
  double population(int n) const { return std::norm(amps_(n)); }
  double mean_photon_number() const;

  // Mass beyond |d-1> of the untruncated state, before renormalization.
  double tail_mass() const { return tail_mass_; }
  bool under_truncated(double threshold = kTruncationThreshold) const {
    return tail_mass_ > threshold;
  }

 private:
  ComplexVector amps_;
  double tail_mass_;
};

class DensityMatrix {
 public:
  // Validates Hermiticity, unit trace and positivity, then stores the
  // symmetrized matrix (rho + rho^dagger) / 2.
  explicit DensityMatrix(const ComplexMatrix& m, double tail_mass = 0.0);

  static DensityMatrix vacuum(int dim);
  static DensityMatrix number_state(int n, int dim);

  int dim() const { return static_cast<int>(rho_.rows()); }
  const ComplexMatrix& matrix() const { return rho_; }
  Complex operator()(int m, int n) const { return rho_(m, n); }

  double purity() const;
  double mean_photon_number() const;
  double population(int n) const { return rho_(n, n).real(); }
  double tail_mass() const { return tail_mass_; }

  // Largest |rho_mn - conj(rho_nm)|, trace, smallest eigenvalue.
  static double hermiticity_residual(const ComplexMatrix& m);
  static double min_eigenvalue(const ComplexMatrix& m);

 private:
  ComplexMatrix rho_;
  double tail_mass_;
};

struct CatSpec {
  double alpha = 0.0;
  Parity parity = Parity::Odd;
  int dim = kDefaultDim;
};

struct SqueezeSpec {
  double r = 0.0;
  int dim = kDefaultDim;

  // Squeezing in dB on the quadrature variance: e^{-2r} = 10^{db/10}.
  // Both -3 and 3 describe the same 3 dB squeezed state.
  static SqueezeSpec from_db(double db, int dim = kDefaultDim);
  double variance_ratio() const;
};

FockKet coherent_ket(double alpha, int dim = kDefaultDim);
FockKet cat_ket(const CatSpec& spec);
FockKet squeezed_vacuum_ket(const SqueezeSpec& spec);

DensityMatrix ket_to_density(const FockKet& ket);

// a rho a^dagger / Tr[a rho a^dagger]. The top Fock slot of the output is
// zero.
DensityMatrix photon_subtract(const DensityMatrix& rho);

double tail_mass(const FockKet& ket, int cutoff);
double tail_mass(const DensityMatrix& rho, int cutoff);

// Truncates rho to its leading dim x dim block and renormalizes.
DensityMatrix crop(const DensityMatrix& rho, int dim);

// Lowering operator with (a)_{n-1,n} = sqrt(n).
ComplexMatrix annihilation_operator(int dim);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// |<psi|rho|psi>| for a pure reference.
double overlap(const DensityMatrix& rho, const FockKet& ket);

}  // namespace catcoh
