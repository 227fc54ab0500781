#pragma once

// Independent reference computations for the tests. Everything here works on
// plain std::vector<double> with direct summation and does not call into the
// library.

#include <vector>

namespace oracle {

// alpha^n / sqrt(n!) on the parity support (odd = true), normalized over
// n < dim by explicit summation.
std::vector<double> cat_amplitudes(double alpha, bool odd, int dim);

// e^{-a^2} a^{2n} / n! for n < dim (not renormalized).
std::vector<double> poisson(double alpha, int dim);

// Sum over n >= from of Poisson weights by running product, first 400 terms.
double poisson_tail(double alpha, int from);

// Sum over n >= from on the parity support of alpha^{2n}/n! / (cosh or sinh).
double cat_tail(double alpha, bool odd, int from);

double shannon_bits(const std::vector<double>& p);

// (sum |c|)^2 - sum |c|^2
double l1_of_pure(const std::vector<double>& c);

// Closed forms from the conversion-probability mixture written out by hand.
double flip_probability(double alpha, bool odd, double eta);

double binary_entropy(double p);

// Hermite function psi_n(x) by explicit Hermite polynomial with factorials
// (small n only).
double hermite_function(int n, double x);

// Numerically integrates |psi_n|^2 over [a, b] with composite Simpson.
double simpson(double (*f)(double, void*), void* ctx, double a, double b, int panels);

}  // namespace oracle
