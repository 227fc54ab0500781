#pragma once

// Coherence quantifiers in the Fock basis (entropies in bits), fidelity to
// ideal cat states, and closed forms for ideal cats under loss.

#include <span>

#include "catcoh/fock.hpp"

namespace catcoh {

// Eigenvalues in [-kPsdTol, 0) are treated as zero.
double von_neumann_entropy(const DensityMatrix& rho);
double shannon_entropy(std::span<const double> probabilities);

// S(rho_diag) - S(rho); values within -1e-9 of zero are clamped to zero.
double rel_entropy_coherence(const DensityMatrix& rho);

// Sum of |rho_mn| over m != n.
double l1_coherence(const DensityMatrix& rho);

struct CoherenceReport {
  double c_rel_ent = 0.0;
  double c_l1 = 0.0;
  int dim = 0;
  static constexpr const char* basis = "Fock";
};

CoherenceReport coherence_report(const DensityMatrix& rho);

// Closed forms for pure cats truncated to dim photon-number slots,
// normalized over the retained support. alpha = 0 gives the limiting
// number state (|0> or |1>), which carries no coherence.
double cat_rel_entropy_truncated(double alpha, Parity parity, int dim = kDefaultDim);
double cat_l1_truncated(double alpha, Parity parity, int dim = kDefaultDim);

// Coherence of an ideal cat after loss, assembled as the parity mixture
//   (1-P) C_same(sqrt(eta) alpha) + P C_flip(sqrt(eta) alpha).
CoherenceReport lossy_cat_coherence(double alpha, Parity parity, double eta,
                                    int dim = kDefaultDim);

// Tr[rho rho_cat(alpha_ref)] with the reference cat built at rho's dimension.
double fidelity_to_cat(const DensityMatrix& rho, double alpha_ref, Parity parity);

// F = cosh(alpha^2 (1-eta)) sinh(eta alpha^2) / sinh(alpha^2), the overlap of
// a lossy odd cat with the ideal odd cat of amplitude sqrt(eta) alpha.
double fidelity_loss_analytic(double alpha, double eta);

// W(0,0) of a lossy odd cat:
//   e^{-2 alpha^2 eta} (2 - 2 e^{-2 alpha^2 (1 - 2 eta)}) / (pi N_odd(alpha)).
double wigner_origin_analytic(double alpha, double eta);

// min{0, W(0,0)}.
double negativity_analytic(double alpha, double eta);

struct DecoherenceCurvePoint {
  double eta = 1.0;
  double c_rel_ent = 0.0;
  double c_l1 = 0.0;
  double fidelity = 0.0;
  double negativity = 0.0;
};

// Ideal odd cat of amplitude alpha after loss eta, from the closed forms.
DecoherenceCurvePoint ideal_odd_cat_point(double alpha, double eta, int dim = kDefaultDim);

}  // namespace catcoh
