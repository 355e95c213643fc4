#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semidecay/config.hpp"
#include "semidecay/opmatrix.hpp"

namespace semidecay {

/// Finite-dimensional model operator A. The semigroup convention is that
/// -A generates T(t) = exp(-tA), so decaying orbits correspond to
/// spectrum in the right half-plane.
struct OperatorModel {
  enum class Kind { Diagonal, BlockDiagonal, Dense };

  Kind kind = Kind::Diagonal;
  Vector eigen_data;            // Diagonal
  std::vector<Matrix> blocks;   // BlockDiagonal
  Matrix dense;                 // Dense
  bool injective = true;        // claimed; validate() checks it
  bool left_half_plane_resolvent = false;  // tag: Re sigma(A) > 0 claimed
  std::vector<std::string> tags;

  static OperatorModel diagonal(Vector eigenvalues);
  static OperatorModel block_diagonal(std::vector<Matrix> blocks);
  static OperatorModel from_dense(Matrix m);
  static OperatorModel jordan2(Complex lambda, Complex g);
  /// Wraps a structured matrix in a model of the same shape.
  static OperatorModel from_matrix_shape(const OpMatrix& m);

  Eigen::Index dim() const;
  OpMatrix as_matrix() const;

  /// Checks the stored-data invariants (finiteness, injectivity claim,
  /// half-plane tag) and throws DomainError on violation.
  void validate() const;
};

struct NormSpace {
  double p = 2.0;  // extended real in [1, inf]
};

struct OperatorNormResult {
  double value = 0.0;
  bool estimated = false;  // true for p outside {1,2,inf}: lower bound
};

struct SamplingPlan {
  double r_min = 1e-8;
  double r_max = 1e8;
  int per_decade = 64;
  int rays = 8;
  std::vector<double> extra_radii;  // e.g. known resonance locations
};

struct SectorialityReport {
  double omega = 0.0;
  double M_constant = 0.0;
  bool sampled_only = true;  // lower bound from sampling, never a proven sup
  bool valid = true;         // false for degenerate (empty) sampling plans
  std::size_t samples_taken = 0;
  // a thinned record of (lambda, |lambda| * ||(lambda - A)^{-1}||)
  std::vector<std::pair<Complex, double>> samples;
};

/// (lambda I + A)^{-1}, the resolvent of A at -lambda.
OpMatrix resolvent_shift(const OperatorModel& A, Complex lambda);

/// (I + qA)^{-1} computed without forming 1/q; stable down to q = 0.
OpMatrix resolvent_one_plus_scaled(const OperatorModel& A, double q);

OperatorNormResult operator_norm(const OpMatrix& M, const NormSpace& space,
                                 std::uint64_t seed = 1);

/// Eigenvalues sorted lexicographically by (Re, Im).
std::vector<Complex> spectrum(const OperatorModel& A);

SectorialityReport sectoriality(const OperatorModel& A, double omega,
                                const NormSpace& space, const SamplingPlan& plan);

/// 1/r = 1/p - 1/p' for p in [1,2]; p = 2 gives r = inf.
double fourier_r(double p);
/// 1/r directly (0 at p = 2); avoids inf arithmetic in rate formulas.
double fourier_inv_r(double p);

}  // namespace semidecay
