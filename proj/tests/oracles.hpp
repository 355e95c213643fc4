#pragma once

// Test-only oracles, kept independent of the library code paths they
// check: direct small-matrix algebra, entrywise spectral evaluation and
// brute-force maximization.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "semidecay/linop.hpp"

namespace oracles {

using semidecay::Complex;
using semidecay::Matrix;
using semidecay::Vector;

// Direct 2x2 inversion, cofactor formula.
inline Matrix inv2x2(const Matrix& m) {
  const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  Matrix out(2, 2);
  out << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return out / det;
}

// Primary matrix function of a 2x2 Jordan block [[l, g],[0, l]] with an
// analytically supplied derivative.
inline Matrix jordan_function(Complex lambda, Complex g,
                              const std::function<Complex(Complex)>& f,
                              const std::function<Complex(Complex)>& fprime) {
  Matrix out(2, 2);
  out << f(lambda), g * fprime(lambda), Complex(0), f(lambda);
  return out;
}

// ||(is + A)^{-1}|| for diagonal A in ell^2: exact distance formula.
inline double diag_resolvent_norm_signed(const Vector& eigs, double s) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < eigs.size(); ++k)
    best = std::min(best, std::abs(Complex(0.0, s) + eigs(k)));
  return 1.0 / best;
}

// max over +-s, matching the profile convention n(s).
inline double diag_resolvent_norm(const Vector& eigs, double s) {
  return std::max(diag_resolvent_norm_signed(eigs, s),
                  diag_resolvent_norm_signed(eigs, -s));
}

// sup_k |e^{-t lambda_k}| * w_k: closed-form diagonal decay maximization.
inline double diag_decay_value(const Vector& eigs, const std::vector<double>& weights,
                               double t) {
  double best = 0.0;
  for (Eigen::Index k = 0; k < eigs.size(); ++k)
    best = std::max(best, std::exp(-t * eigs(k).real()) * weights[k]);
  return best;
}

// Seeded random diagonal operator with spectrum in the right half-plane.
inline semidecay::OperatorModel random_diag(int n, std::uint64_t seed,
                                            double re_lo = 0.2, double re_hi = 3.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(re_lo, re_hi), im(-2.0, 2.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(re(rng), im(rng));
  return semidecay::OperatorModel::diagonal(v);
}

// Seeded random dense operator built from a known diagonal by a mild
// similarity, so the spectrum stays in the right half-plane.
inline semidecay::OperatorModel random_dense(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(0.3, 2.5), im(-1.5, 1.5), off(-0.2, 0.2);
  Matrix d = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = Complex(re(rng), im(rng));
  Matrix s = Matrix::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) s(i, j) = Complex(off(rng), off(rng));
  return semidecay::OperatorModel::from_dense(s * d * s.inverse());
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

inline double rel_err(Complex got, Complex want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

}  // namespace oracles
