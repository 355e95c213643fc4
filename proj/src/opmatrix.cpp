#include "semidecay/opmatrix.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace semidecay {

OpMatrix OpMatrix::diagonal(Vector d) {
  OpMatrix m;
  m.kind_ = Kind::Diagonal;
  m.dim_ = d.size();
  m.diag_ = std::move(d);
  return m;
}

OpMatrix OpMatrix::block_diagonal(std::vector<Matrix> blocks) {
  OpMatrix m;
  m.kind_ = Kind::BlockDiagonal;
  Eigen::Index dim = 0;
  for (const auto& b : blocks) {
    if (b.rows() != b.cols()) throw DomainError("block-diagonal blocks must be square");
    dim += b.rows();
  }
  m.dim_ = dim;
  m.blocks_ = std::move(blocks);
  return m;
}

OpMatrix OpMatrix::dense(Matrix d) {
  if (d.rows() != d.cols()) throw DomainError("dense operator must be square");
  OpMatrix m;
  m.kind_ = Kind::Dense;
  m.dim_ = d.rows();
  m.dense_ = std::move(d);
  return m;
}

OpMatrix OpMatrix::identity(Eigen::Index dim) {
  return diagonal(Vector::Ones(dim));
}

Matrix OpMatrix::to_dense() const {
  switch (kind_) {
    case Kind::Diagonal:
      return diag_.asDiagonal();
    case Kind::BlockDiagonal: {
      Matrix out = Matrix::Zero(dim_, dim_);
      Eigen::Index at = 0;
      for (const auto& b : blocks_) {
        out.block(at, at, b.rows(), b.cols()) = b;
        at += b.rows();
      }
      return out;
    }
    case Kind::Dense:
      return dense_;
  }
  return {};
}

Vector OpMatrix::apply(const Vector& x) const {
  if (x.size() != dim_) throw DomainError("vector size mismatch");
  switch (kind_) {
    case Kind::Diagonal:
      return diag_.cwiseProduct(x);
    case Kind::BlockDiagonal: {
      Vector out(dim_);
      Eigen::Index at = 0;
      for (const auto& b : blocks_) {
        out.segment(at, b.rows()) = b * x.segment(at, b.rows());
        at += b.rows();
      }
      return out;
    }
    case Kind::Dense:
      return dense_ * x;
  }
  return {};
}

std::vector<Matrix> OpMatrix::diag_as_blocks(const std::vector<Matrix>& partition) const {
  std::vector<Matrix> out;
  out.reserve(partition.size());
  Eigen::Index at = 0;
  for (const auto& b : partition) {
    out.push_back(Matrix(diag_.segment(at, b.rows()).asDiagonal()));
    at += b.rows();
  }
  return out;
}

namespace {

bool same_partition(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].rows() != b[i].rows()) return false;
  return true;
}

}  // namespace

OpMatrix OpMatrix::multiply(const OpMatrix& rhs) const {
  if (dim_ != rhs.dim_) throw DomainError("dimension mismatch in product");
  if (kind_ == Kind::Diagonal && rhs.kind_ == Kind::Diagonal)
    return diagonal(diag_.cwiseProduct(rhs.diag_));
  if (kind_ == Kind::BlockDiagonal && rhs.kind_ == Kind::BlockDiagonal &&
      same_partition(blocks_, rhs.blocks_)) {
    std::vector<Matrix> out;
    out.reserve(blocks_.size());
    for (std::size_t i = 0; i < blocks_.size(); ++i) out.push_back(blocks_[i] * rhs.blocks_[i]);
    return block_diagonal(std::move(out));
  }
  if (kind_ == Kind::Diagonal && rhs.kind_ == Kind::BlockDiagonal)
    return block_diagonal(diag_as_blocks(rhs.blocks_)).multiply(rhs);
  if (kind_ == Kind::BlockDiagonal && rhs.kind_ == Kind::Diagonal)
    return multiply(block_diagonal(rhs.diag_as_blocks(blocks_)));
  return dense(to_dense() * rhs.to_dense());
}

OpMatrix OpMatrix::add(const OpMatrix& rhs) const {
  if (dim_ != rhs.dim_) throw DomainError("dimension mismatch in sum");
  if (kind_ == Kind::Diagonal && rhs.kind_ == Kind::Diagonal)
    return diagonal(diag_ + rhs.diag_);
  if (kind_ == Kind::BlockDiagonal && rhs.kind_ == Kind::BlockDiagonal &&
      same_partition(blocks_, rhs.blocks_)) {
    std::vector<Matrix> out;
    out.reserve(blocks_.size());
    for (std::size_t i = 0; i < blocks_.size(); ++i) out.push_back(blocks_[i] + rhs.blocks_[i]);
    return block_diagonal(std::move(out));
  }
  if (kind_ == Kind::Diagonal && rhs.kind_ == Kind::BlockDiagonal)
    return block_diagonal(diag_as_blocks(rhs.blocks_)).add(rhs);
  if (kind_ == Kind::BlockDiagonal && rhs.kind_ == Kind::Diagonal)
    return add(block_diagonal(rhs.diag_as_blocks(blocks_)));
  return dense(to_dense() + rhs.to_dense());
}

OpMatrix OpMatrix::subtract(const OpMatrix& rhs) const {
  return add(rhs.scale(Complex(-1.0)));
}

OpMatrix OpMatrix::scale(Complex c) const {
  switch (kind_) {
    case Kind::Diagonal:
      return diagonal(diag_ * c);
    case Kind::BlockDiagonal: {
      std::vector<Matrix> out;
      out.reserve(blocks_.size());
      for (const auto& b : blocks_) out.push_back(b * c);
      return block_diagonal(std::move(out));
    }
    case Kind::Dense:
      return dense(dense_ * c);
  }
  return {};
}

double spectral_norm(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  if (m.rows() == 1) return std::abs(m(0, 0));
  if (m.rows() == 2) {
    // sigma_max^2 = (f + sqrt(f^2 - 4 d^2)) / 2, f = ||M||_F^2, d = |det M|
    const double f = m.squaredNorm();
    const double d = std::abs(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
    const double disc = std::max(0.0, f * f - 4.0 * d * d);
    return std::sqrt(0.5 * (f + std::sqrt(disc)));
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double OpMatrix::norm_p(double p) const {
  const bool inf = std::isinf(p);
  if (!(p == 1.0 || p == 2.0 || inf))
    throw DomainError("exact operator norm only for p in {1,2,inf}");
  switch (kind_) {
    case Kind::Diagonal:
      return diag_.size() ? diag_.cwiseAbs().maxCoeff() : 0.0;
    case Kind::BlockDiagonal: {
      double best = 0.0;
      for (const auto& b : blocks_) {
        double v;
        if (p == 2.0)
          v = spectral_norm(b);
        else if (p == 1.0)
          v = b.cwiseAbs().colwise().sum().maxCoeff();
        else
          v = b.cwiseAbs().rowwise().sum().maxCoeff();
        best = std::max(best, v);
      }
      return best;
    }
    case Kind::Dense: {
      if (dense_.size() == 0) return 0.0;
      if (p == 2.0) return spectral_norm(dense_);
      if (p == 1.0) return dense_.cwiseAbs().colwise().sum().maxCoeff();
      return dense_.cwiseAbs().rowwise().sum().maxCoeff();
    }
  }
  return 0.0;
}

double OpMatrix::frobenius() const {
  switch (kind_) {
    case Kind::Diagonal:
      return diag_.norm();
    case Kind::BlockDiagonal: {
      double s = 0.0;
      for (const auto& b : blocks_) s += b.squaredNorm();
      return std::sqrt(s);
    }
    case Kind::Dense:
      return dense_.norm();
  }
  return 0.0;
}

}  // namespace semidecay
