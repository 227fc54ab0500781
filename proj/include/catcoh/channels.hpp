#pragma once

// Pure-loss bosonic channel: a beam splitter of intensity transmission eta
// coupling the mode to vacuum. Kraus operators
//   A_k |n> = sqrt(C(n,k) eta^{n-k} (1-eta)^k) |n-k>,   k = 0..d-1,
// exact on the truncated space.

#include "catcoh/fock.hpp"

namespace catcoh {

struct LossSpec {
  double eta = 1.0;

  void validate() const;
};

DensityMatrix loss_channel(const DensityMatrix& rho, LossSpec loss);

// Heisenberg-picture adjoint: Tr[op L(rho)] = Tr[L^dagger(op) rho].
ComplexMatrix dual_loss_on_operator(const ComplexMatrix& op, LossSpec loss);

// Probability that a cat of the given parity and amplitude alpha ends up in
// the opposite parity after loss:
//   P = N_flip(sqrt(eta) alpha) / (2 N_same(alpha)) * (1 - e^{-2(1-eta) alpha^2}),
// with N_even(a) = 2(1 + e^{-2a^2}) and N_odd(a) = 2(1 - e^{-2a^2}).
double conversion_probability(double alpha, Parity parity, LossSpec loss);

// Closed-form lossy cat: (1-P) rho_same(sqrt(eta) alpha) + P rho_flip(sqrt(eta) alpha),
// both components built with cat_ket at dimension dim.
DensityMatrix cat_loss_analytic(double alpha, Parity parity, LossSpec loss, int dim = kDefaultDim);

// Cat normalization factor N_pm(alpha).
double cat_normalization(double alpha, Parity parity);

}  // namespace catcoh
