#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "semidecay/errors.hpp"

namespace semidecay {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// A square operator stored in the cheapest faithful shape. Functions of
/// the same operator share the shape, so products of weight factors,
/// semigroup snapshots and resolvents never densify diagonal or
/// block-diagonal families.
class OpMatrix {
 public:
  enum class Kind { Diagonal, BlockDiagonal, Dense };

  OpMatrix() = default;
  static OpMatrix diagonal(Vector d);
  static OpMatrix block_diagonal(std::vector<Matrix> blocks);
  static OpMatrix dense(Matrix m);
  static OpMatrix identity(Eigen::Index dim);

  Kind kind() const { return kind_; }
  Eigen::Index dim() const { return dim_; }

  const Vector& diag() const { return diag_; }
  const std::vector<Matrix>& blocks() const { return blocks_; }
  Matrix to_dense() const;

  Vector apply(const Vector& x) const;
  OpMatrix multiply(const OpMatrix& rhs) const;
  OpMatrix add(const OpMatrix& rhs) const;
  OpMatrix subtract(const OpMatrix& rhs) const;
  OpMatrix scale(Complex c) const;

  /// Exact operator norm on ell^p coordinates for p in {1, 2, inf}.
  /// (Diagonal blocks act on disjoint coordinates, so the norm of a
  /// direct sum is the max over blocks for every p.)
  double norm_p(double p) const;
  double frobenius() const;

  friend OpMatrix operator*(const OpMatrix& a, const OpMatrix& b) { return a.multiply(b); }
  friend OpMatrix operator+(const OpMatrix& a, const OpMatrix& b) { return a.add(b); }
  friend OpMatrix operator-(const OpMatrix& a, const OpMatrix& b) { return a.subtract(b); }
  friend OpMatrix operator*(const OpMatrix& a, double s) { return a.scale(Complex(s)); }
  friend OpMatrix operator*(const OpMatrix& a, Complex s) { return a.scale(s); }

 private:
  Kind kind_ = Kind::Dense;
  Eigen::Index dim_ = 0;
  Vector diag_;
  std::vector<Matrix> blocks_;
  Matrix dense_;

  std::vector<Matrix> diag_as_blocks(const std::vector<Matrix>& partition) const;
};

/// Largest singular value; closed form for 1x1/2x2, SVD otherwise.
double spectral_norm(const Matrix& m);

// Norm hook for the quadrature error control (found by ADL).
inline double qnorm(const OpMatrix& m) { return m.frobenius(); }

}  // namespace semidecay
