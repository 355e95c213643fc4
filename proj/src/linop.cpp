#include "semidecay/linop.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#include "semidecay/errors.hpp"

namespace semidecay {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void sort_lex(std::vector<Complex>& v) {
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

std::vector<Complex> block_eigenvalues(const Matrix& b) {
  std::vector<Complex> out;
  if (b.rows() == 1) {
    out.push_back(b(0, 0));
  } else if (b.rows() == 2) {
    const Complex tr = b(0, 0) + b(1, 1);
    const Complex det = b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
    const Complex disc = std::sqrt(tr * tr - 4.0 * det);
    out.push_back(0.5 * (tr + disc));
    out.push_back(0.5 * (tr - disc));
  } else {
    Eigen::ComplexEigenSolver<Matrix> es(b, false);
    if (es.info() != Eigen::Success) throw ConvergenceFailure("block eigenvalue solve failed");
    for (Eigen::Index i = 0; i < b.rows(); ++i) out.push_back(es.eigenvalues()(i));
  }
  return out;
}

Matrix solve_shift(const Matrix& block, Complex lambda) {
  const Eigen::Index n = block.rows();
  Matrix shifted = block;
  shifted.diagonal().array() += lambda;
  if (n == 1) {
    if (shifted(0, 0) == Complex(0)) throw SingularShift("1x1 shift is singular");
    Matrix inv(1, 1);
    inv(0, 0) = 1.0 / shifted(0, 0);
    return inv;
  }
  if (n == 2) {
    const Complex det = shifted(0, 0) * shifted(1, 1) - shifted(0, 1) * shifted(1, 0);
    const double scale = shifted.cwiseAbs().maxCoeff();
    if (std::abs(det) < 1e-300 * std::max(1.0, scale * scale))
      throw SingularShift("2x2 shift is singular");
    Matrix inv(2, 2);
    inv << shifted(1, 1), -shifted(0, 1), -shifted(1, 0), shifted(0, 0);
    return inv / det;
  }
  Eigen::PartialPivLU<Matrix> lu(shifted);
  return lu.solve(Matrix::Identity(n, n));
}

}  // namespace

OperatorModel OperatorModel::diagonal(Vector eigenvalues) {
  OperatorModel A;
  A.kind = Kind::Diagonal;
  A.eigen_data = std::move(eigenvalues);
  A.injective = true;
  for (Eigen::Index i = 0; i < A.eigen_data.size(); ++i)
    if (A.eigen_data(i) == Complex(0)) A.injective = false;
  return A;
}

OperatorModel OperatorModel::block_diagonal(std::vector<Matrix> blocks) {
  OperatorModel A;
  A.kind = Kind::BlockDiagonal;
  A.blocks = std::move(blocks);
  return A;
}

OperatorModel OperatorModel::from_dense(Matrix m) {
  if (m.rows() != m.cols()) throw DomainError("dense operator must be square");
  OperatorModel A;
  A.kind = Kind::Dense;
  A.dense = std::move(m);
  return A;
}

OperatorModel OperatorModel::jordan2(Complex lambda, Complex g) {
  Matrix b(2, 2);
  b << lambda, g, Complex(0), lambda;
  return block_diagonal({b});
}

OperatorModel OperatorModel::from_matrix_shape(const OpMatrix& m) {
  switch (m.kind()) {
    case OpMatrix::Kind::Diagonal:
      return diagonal(m.diag());
    case OpMatrix::Kind::BlockDiagonal:
      return block_diagonal(m.blocks());
    case OpMatrix::Kind::Dense:
      return from_dense(m.to_dense());
  }
  return {};
}

Eigen::Index OperatorModel::dim() const {
  switch (kind) {
    case Kind::Diagonal:
      return eigen_data.size();
    case Kind::BlockDiagonal: {
      Eigen::Index d = 0;
      for (const auto& b : blocks) d += b.rows();
      return d;
    }
    case Kind::Dense:
      return dense.rows();
  }
  return 0;
}

OpMatrix OperatorModel::as_matrix() const {
  switch (kind) {
    case Kind::Diagonal:
      return OpMatrix::diagonal(eigen_data);
    case Kind::BlockDiagonal:
      return OpMatrix::block_diagonal(blocks);
    case Kind::Dense:
      return OpMatrix::dense(dense);
  }
  return {};
}

void OperatorModel::validate() const {
  auto check_finite = [](Complex z) {
    if (!finite(z)) throw DomainError("operator entries must be finite");
  };
  switch (kind) {
    case Kind::Diagonal:
      for (Eigen::Index i = 0; i < eigen_data.size(); ++i) check_finite(eigen_data(i));
      break;
    case Kind::BlockDiagonal:
      for (const auto& b : blocks)
        for (Eigen::Index i = 0; i < b.size(); ++i) check_finite(b(i));
      break;
    case Kind::Dense:
      for (Eigen::Index i = 0; i < dense.size(); ++i) check_finite(dense(i));
      break;
  }
  const auto eigs = spectrum(*this);
  if (injective) {
    for (Complex z : eigs)
      if (std::abs(z) == 0.0) throw DomainError("injective flag set but 0 is an eigenvalue");
  }
  if (left_half_plane_resolvent) {
    for (Complex z : eigs)
      if (!(z.real() > 0.0))
        throw DomainError("leftHalfPlaneResolvent tag requires Re(lambda) > 0 for all eigenvalues");
  }
}

OpMatrix resolvent_shift(const OperatorModel& A, Complex lambda) {
  switch (A.kind) {
    case OperatorModel::Kind::Diagonal: {
      Vector inv(A.eigen_data.size());
      for (Eigen::Index i = 0; i < inv.size(); ++i) {
        const Complex d = lambda + A.eigen_data(i);
        const double tiny = 1e-15 * (std::abs(lambda) + std::abs(A.eigen_data(i)));
        if (std::abs(d) <= tiny || d == Complex(0))
          throw SingularShift("-lambda is (numerically) an eigenvalue");
        inv(i) = 1.0 / d;
      }
      return OpMatrix::diagonal(std::move(inv));
    }
    case OperatorModel::Kind::BlockDiagonal: {
      std::vector<Matrix> inv;
      inv.reserve(A.blocks.size());
      for (const auto& b : A.blocks) inv.push_back(solve_shift(b, lambda));
      return OpMatrix::block_diagonal(std::move(inv));
    }
    case OperatorModel::Kind::Dense: {
      const auto eigs = spectrum(A);
      double dist = std::numeric_limits<double>::infinity();
      double rad = 0.0;
      for (Complex z : eigs) {
        dist = std::min(dist, std::abs(lambda + z));
        rad = std::max(rad, std::abs(z));
      }
      if (dist < 1e-14 * std::max(1.0, std::abs(lambda) + rad))
        throw SingularShift("-lambda is within machine distance of sigma(A)");
      return OpMatrix::dense(solve_shift(A.dense, lambda));
    }
  }
  return {};
}

OpMatrix resolvent_one_plus_scaled(const OperatorModel& A, double q) {
  switch (A.kind) {
    case OperatorModel::Kind::Diagonal: {
      Vector inv(A.eigen_data.size());
      for (Eigen::Index i = 0; i < inv.size(); ++i) {
        const Complex d = 1.0 + q * A.eigen_data(i);
        if (d == Complex(0)) throw SingularShift("(I + qA) singular");
        inv(i) = 1.0 / d;
      }
      return OpMatrix::diagonal(std::move(inv));
    }
    case OperatorModel::Kind::BlockDiagonal: {
      std::vector<Matrix> out;
      out.reserve(A.blocks.size());
      for (const auto& b : A.blocks) {
        Matrix m = q * b;
        m.diagonal().array() += 1.0;
        out.push_back(solve_shift(m, Complex(0.0)));
      }
      return OpMatrix::block_diagonal(std::move(out));
    }
    case OperatorModel::Kind::Dense: {
      Matrix m = q * A.dense;
      m.diagonal().array() += 1.0;
      return OpMatrix::dense(
          Eigen::PartialPivLU<Matrix>(m).solve(Matrix::Identity(m.rows(), m.rows())));
    }
  }
  return {};
}

namespace {

double vector_norm_p(const Vector& v, double p) {
  if (std::isinf(p)) return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v(i)), p);
  return std::pow(s, 1.0 / p);
}

// Power-method style lower bound for the ell^p -> ell^p norm of a dense
// matrix. Each iterate evaluates an actual ratio, so the result is a
// certified lower bound; convergence to the true norm is heuristic.
double dense_norm_p_estimate(const Matrix& m, double p, std::uint64_t seed) {
  const double q = p / (p - 1.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double best = 0.0;
  const Eigen::Index n = m.rows();
  for (int start = 0; start < 4; ++start) {
    Vector x(n);
    if (start == 0)
      x = Vector::Ones(n);
    else
      for (Eigen::Index i = 0; i < n; ++i) x(i) = Complex(gauss(rng), gauss(rng));
    x /= vector_norm_p(x, p);
    for (int it = 0; it < 60; ++it) {
      Vector y = m * x;
      const double ny = vector_norm_p(y, p);
      best = std::max(best, ny);
      if (ny == 0.0) break;
      // gradient of ||y||_p, then dualize through the adjoint
      Vector u(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double a = std::abs(y(i));
        u(i) = a == 0.0 ? Complex(0) : std::pow(a, p - 1.0) * (y(i) / a);
      }
      Vector z = m.adjoint() * u;
      Vector xn(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double a = std::abs(z(i));
        xn(i) = a == 0.0 ? Complex(0) : std::pow(a, q - 1.0) * (z(i) / a);
      }
      const double nx = vector_norm_p(xn, p);
      if (nx == 0.0) break;
      xn /= nx;
      if ((xn - x).cwiseAbs().maxCoeff() < 1e-12) {
        x = xn;
        best = std::max(best, vector_norm_p(m * x, p));
        break;
      }
      x = xn;
    }
  }
  return best;
}

}  // namespace

OperatorNormResult operator_norm(const OpMatrix& M, const NormSpace& space, std::uint64_t seed) {
  if (space.p < 1.0) throw DomainError("p must be >= 1");
  if (M.dim() == 0) return {0.0, false};
  if (space.p == 1.0 || space.p == 2.0 || std::isinf(space.p))
    return {M.norm_p(space.p), false};
  // Diagonal operators have ||diag d||_p = max |d_k| for every p.
  if (M.kind() == OpMatrix::Kind::Diagonal)
    return {M.diag().cwiseAbs().maxCoeff(), false};
  if (M.kind() == OpMatrix::Kind::BlockDiagonal) {
    double best = 0.0;
    for (const auto& b : M.blocks())
      best = std::max(best, dense_norm_p_estimate(b, space.p, seed));
    return {best, true};
  }
  return {dense_norm_p_estimate(M.to_dense(), space.p, seed), true};
}

std::vector<Complex> spectrum(const OperatorModel& A) {
  std::vector<Complex> out;
  switch (A.kind) {
    case OperatorModel::Kind::Diagonal:
      for (Eigen::Index i = 0; i < A.eigen_data.size(); ++i) out.push_back(A.eigen_data(i));
      break;
    case OperatorModel::Kind::BlockDiagonal:
      for (const auto& b : A.blocks) {
        auto ev = block_eigenvalues(b);
        out.insert(out.end(), ev.begin(), ev.end());
      }
      break;
    case OperatorModel::Kind::Dense: {
      if (A.dense.rows() == 0) break;
      Eigen::ComplexEigenSolver<Matrix> es(A.dense, false);
      if (es.info() != Eigen::Success) throw ConvergenceFailure("dense eigenvalue solve failed");
      for (Eigen::Index i = 0; i < A.dense.rows(); ++i) out.push_back(es.eigenvalues()(i));
      break;
    }
  }
  sort_lex(out);
  return out;
}

SectorialityReport sectoriality(const OperatorModel& A, double omega,
                                const NormSpace& space, const SamplingPlan& plan) {
  if (!(omega > 0.0 && omega < M_PI)) throw DomainError("omega must lie in (0, pi)");
  SectorialityReport rep;
  rep.omega = omega;
  const auto eigs = spectrum(A);
  for (Complex z : eigs) {
    if (std::abs(z) == 0.0) continue;  // 0 lies in the closed sector
    if (std::abs(std::arg(z)) > omega + 1e-12)
      throw SpectrumOutsideSector("sigma(A) is not contained in the closed sector of angle omega");
  }
  if (plan.per_decade <= 0 || plan.rays <= 0 || !(plan.r_min < plan.r_max)) {
    rep.valid = false;
    return rep;
  }

  // Rays strictly outside S_{omega'} for a ladder of omega' in (omega, pi),
  // geometrically refined toward omega (the sup is typically attained just
  // outside the sector); each angle contributes mirrored rays.
  std::vector<double> angles;
  const int half = std::max(1, plan.rays / 2);
  for (int j = 0; j < half; ++j) {
    const double frac =
        half == 1 ? 0.5 : 1e-3 * std::pow(0.9 / 1e-3, double(j) / (half - 1));
    const double phi = omega + frac * (M_PI - omega);
    angles.push_back(phi);
    angles.push_back(-phi);
  }

  std::vector<double> radii = plan.extra_radii;
  const double decades = std::log10(plan.r_max / plan.r_min);
  const int nr = std::max(2, static_cast<int>(std::ceil(decades * plan.per_decade)));
  for (int i = 0; i <= nr; ++i)
    radii.push_back(plan.r_min * std::pow(plan.r_max / plan.r_min, double(i) / nr));

  const std::size_t keep_every = std::max<std::size_t>(1, radii.size() * angles.size() / 256);
  std::size_t count = 0;
  for (double r : radii) {
    for (double phi : angles) {
      const Complex lambda = std::polar(r, phi);
      // lambda R(lambda, A) = lambda (lambda - A)^{-1} = lambda ((-lambda) + A)^{-1} * (-1)
      OpMatrix res = resolvent_shift(A, -lambda);
      const double v = std::abs(lambda) * operator_norm(res, space).value;
      if (v > rep.M_constant) rep.M_constant = v;
      if (count % keep_every == 0) rep.samples.emplace_back(lambda, v);
      ++count;
    }
  }
  rep.samples_taken = count;
  return rep;
}

double fourier_r(double p) {
  const double ir = fourier_inv_r(p);
  return ir == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / ir;
}

double fourier_inv_r(double p) {
  if (!(p >= 1.0 && p <= 2.0)) throw DomainError("Fourier type p must lie in [1,2]");
  return 2.0 / p - 1.0;
}

}  // namespace semidecay
