#include "semidecay/funcalc.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "semidecay/errors.hpp"
#include "semidecay/quadrature.hpp"
#include "semidecay/semigroup.hpp"

namespace semidecay {

namespace {

double dist_to_negative_axis(Complex z) {
  return z.real() >= 0.0 ? std::abs(z) : std::abs(z.imag());
}

void require_off_negative_axis(const OperatorModel& A) {
  for (Complex z : spectrum(A))
    if (dist_to_negative_axis(z) == 0.0)
      throw BranchCutIntersection("spectrum touches (-inf, 0]");
}

void require_injective(const OperatorModel& A, const char* what) {
  if (!A.injective) throw NotInjective(what);
  for (Complex z : spectrum(A))
    if (std::abs(z) == 0.0) throw NotInjective(what);
}

double max_arg(const std::vector<Complex>& eigs) {
  double m = 0.0;
  for (Complex z : eigs)
    if (std::abs(z) > 0.0) m = std::max(m, std::abs(std::arg(z)));
  return m;
}

Complex derivative_on_circle(const std::function<Complex(Complex)>& f, Complex z0) {
  const double dist = dist_to_negative_axis(z0);
  if (dist == 0.0) throw BranchCutIntersection("derivative requested on the branch cut");
  const double r = std::min(0.05 * (1.0 + std::abs(z0)), 0.45 * dist);
  return quad::cauchy_derivatives(f, z0, r)[1];
}

Matrix upper_block_function(const std::function<Complex(Complex)>& f, const Matrix& b) {
  // 2x2 upper triangular: [[f(l1), g * f[l1,l2]],[0, f(l2)]] with the
  // divided difference degenerating to f' on the diagonal.
  const Complex l1 = b(0, 0), l2 = b(1, 1), g = b(0, 1);
  Matrix out(2, 2);
  out(1, 0) = Complex(0);
  out(0, 0) = f(l1);
  out(1, 1) = f(l2);
  const double scale = 1.0 + std::max(std::abs(l1), std::abs(l2));
  Complex dd;
  if (std::abs(l1 - l2) < 1e-6 * scale) {
    dd = derivative_on_circle(f, 0.5 * (l1 + l2));
  } else {
    dd = (out(0, 0) - out(1, 1)) / (l1 - l2);
  }
  out(0, 1) = g * dd;
  return out;
}

}  // namespace

Complex HInftyZeroSymbol::eval(Complex z) const {
  const Complex lz = std::log(z);
  Complex v = std::pow(z, alpha) / std::pow(1.0 + z, alpha + beta);
  if (upsilon1 != 0.0) v /= std::pow(std::log(2.0 + z), upsilon1);
  if (upsilon2 != 0.0) v /= std::pow(Complex(2.0 * M_PI, 0.0) - Complex(0.0, 1.0) * lz, upsilon2);
  return v;
}

void HInftyZeroSymbol::validate(bool operator_invertible) const {
  if (beta <= 0.0) throw ParameterDomain("symbol requires beta > 0");
  if (alpha < 0.0 || upsilon1 < 0.0 || upsilon2 < 0.0)
    throw ParameterDomain("symbol exponents must be nonnegative");
  if (alpha == 0.0 && !operator_invertible)
    throw ParameterDomain("alpha = 0 requires an invertible operator");
}

SectorContour default_contour(const OperatorModel& A, const Config& cfg) {
  const auto eigs = spectrum(A);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (Complex z : eigs) {
    const double a = std::abs(z);
    if (a > 0.0) lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  if (!std::isfinite(lo)) throw ContourTooTight("operator has spectrum only at the origin");
  SectorContour c;
  c.omega_prime = 0.5 * (max_arg(eigs) + M_PI);
  c.r_min = 1e-6 * lo;
  c.r_max = 1e6 * (1.0 + hi);
  c.nodes_per_decade = cfg.contour_nodes_per_decade;
  return c;
}

SectorContour default_contour(const OperatorModel& A, const HInftyZeroSymbol& symbol,
                              const Config& cfg) {
  SectorContour c = default_contour(A, cfg);
  // widen the radial window until the symbol-decay tail estimate (with a
  // generous sectoriality constant) is below the quadrature target
  const double target = std::max(100.0 * cfg.tol_quad_abs, 1e-9);
  const double m_guess = 20.0;
  const Complex up = std::polar(1.0, c.omega_prime);
  while (m_guess * std::abs(symbol.eval(c.r_max * up)) /
             std::max(symbol.beta, 0.01) >
         0.5 * target * M_PI) {
    c.r_max *= 10.0;
    if (c.r_max > 1e300) break;
  }
  if (symbol.alpha > 0.0) {
    while (m_guess * std::abs(symbol.eval(c.r_min * up)) /
               std::max(symbol.alpha, 0.01) >
           0.5 * target * M_PI) {
      c.r_min *= 0.1;
      if (c.r_min < 1e-300) break;
    }
  } else {
    // alpha = 0: the inner tail scales with r_min itself times the
    // resolvent plateau ~ 1/min|sigma|
    double lo = std::numeric_limits<double>::infinity();
    for (Complex z : spectrum(A))
      if (std::abs(z) > 0.0) lo = std::min(lo, std::abs(z));
    while (std::abs(symbol.eval(c.r_min * up)) * (2.0 / lo) * c.r_min >
           0.5 * target * M_PI) {
      c.r_min *= 0.1;
      if (c.r_min < 1e-300) break;
    }
  }
  return c;
}

DunfordResult dunford_apply(const HInftyZeroSymbol& symbol, const OperatorModel& A,
                            const SectorContour& contour, const Config& cfg) {
  const auto eigs = spectrum(A);
  bool invertible = A.injective;
  for (Complex z : eigs)
    if (std::abs(z) == 0.0) invertible = false;
  symbol.validate(invertible);

  const double wp = contour.omega_prime;
  if (!(wp > 0.0 && wp < M_PI)) throw DomainError("omega' must lie in (0, pi)");
  if (contour.nodes_per_decade < 4) throw DomainError("need at least 4 nodes per decade");
  if (!(contour.r_min < contour.r_max)) throw DomainError("r_min must be below r_max");
  if (max_arg(eigs) >= wp)
    throw SpectrumOutsideSector("spectrum not strictly inside the contour sector");

  const double h = std::log(10.0) / contour.nodes_per_decade;
  for (Complex z : eigs) {
    const double a = std::abs(z);
    if (a == 0.0) throw ContourTooTight("eigenvalue at the contour origin");
    const double gap = std::abs(std::abs(std::arg(z)) - wp);
    const double dist = a * std::sin(std::min(M_PI / 2.0, gap));
    if (dist < 2.0 * h * a)
      throw ContourTooTight("spectrum within two node spacings of the contour");
    if (a < contour.r_min || a > contour.r_max)
      throw ContourTooTight("spectrum outside the truncated radial window");
  }

  const Complex up = std::polar(1.0, wp), dn = std::polar(1.0, -wp);
  const double u_lo = std::log(contour.r_min), u_hi = std::log(contour.r_max);
  int n = std::max<int>(8, static_cast<int>(std::ceil((u_hi - u_lo) / h)));
  if (n % 2 == 1) ++n;  // keep the half-step Richardson comparison exact
  const Complex itwopi(0.0, 2.0 * M_PI);

  double m_est = 0.0;       // running sup of |z| ||R(z,A)|| along the contour
  double r_origin = 0.0;    // ||R|| near the origin, for the alpha = 0 tail
  std::vector<OpMatrix> nodes(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double r = std::exp(u_lo + (u_hi - u_lo) * i / n);
    const Complex zp = r * up, zm = r * dn;
    const OpMatrix rp = resolvent_shift(A, -zp);
    const OpMatrix rm = resolvent_shift(A, -zm);
    const double rn = std::max(rp.frobenius(), rm.frobenius());
    m_est = std::max(m_est, r * rn);
    if (i == 0) r_origin = rn;
    nodes[i] = (rp * (symbol.eval(zp) * up) - rm * (symbol.eval(zm) * dn)) * (r / 1.0);
  }
  const double step = (u_hi - u_lo) / n;
  auto trapezoid = [&](int stride) {
    OpMatrix acc = nodes[0] * 0.5;
    int count = 0;
    for (int i = stride; i < n; i += stride) {
      acc = acc + nodes[i];
      count = i;
    }
    (void)count;
    acc = acc + nodes[n] * 0.5;
    return acc * (step * stride);
  };
  OpMatrix I_h = trapezoid(1);
  const double refine = (I_h - trapezoid(2)).frobenius() / std::abs(itwopi);
  OpMatrix value = I_h * (1.0 / itwopi);

  // Truncation tails from the symbol decay: |f| ~ r^alpha at 0 (or the
  // resolvent plateau when alpha = 0) and |f| ~ r^{-beta} polylog at inf.
  const double f0 = std::abs(symbol.eval(contour.r_min * up));
  const double finf = std::abs(symbol.eval(contour.r_max * up));
  double tail0;
  if (symbol.alpha > 0.0)
    tail0 = m_est * f0 / std::max(symbol.alpha, 0.01) / M_PI;
  else
    tail0 = f0 * r_origin * contour.r_min / M_PI;
  const double tail_inf = m_est * finf / std::max(symbol.beta, 0.01) / M_PI;
  const double tail = tail0 + tail_inf;

  const double tol = std::max({1e-7, 100.0 * cfg.tol_quad_abs,
                               10.0 * cfg.tol_quad_rel * (1.0 + value.frobenius())});
  if (tail > tol) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e (tolerance %.3e)", tail, tol);
    throw TailBoundExceeded(std::string("estimated contour truncation error ") + buf);
  }
  return {std::move(value), tail, refine};
}

OpMatrix matrix_function_oracle(const std::function<Complex(Complex)>& f,
                                const OperatorModel& A, const Config& cfg) {
  (void)cfg;
  switch (A.kind) {
    case OperatorModel::Kind::Diagonal: {
      Vector out(A.eigen_data.size());
      for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = f(A.eigen_data(i));
      return OpMatrix::diagonal(std::move(out));
    }
    case OperatorModel::Kind::BlockDiagonal: {
      std::vector<Matrix> out;
      out.reserve(A.blocks.size());
      for (const auto& b : A.blocks) {
        if (b.rows() == 1) {
          Matrix m(1, 1);
          m(0, 0) = f(b(0, 0));
          out.push_back(m);
        } else if (b.rows() == 2 && b(1, 0) == Complex(0)) {
          out.push_back(upper_block_function(f, b));
        } else {
          OperatorModel sub = OperatorModel::from_dense(b);
          out.push_back(matrix_function_oracle(f, sub).to_dense());
        }
      }
      return OpMatrix::block_diagonal(std::move(out));
    }
    case OperatorModel::Kind::Dense: {
      Eigen::ComplexEigenSolver<Matrix> es(A.dense, true);
      if (es.info() != Eigen::Success)
        throw ConvergenceFailure("dense eigendecomposition failed");
      const Matrix& V = es.eigenvectors();
      Eigen::JacobiSVD<Matrix> svd(V);
      const double smin = svd.singularValues()(svd.singularValues().size() - 1);
      const double smax = svd.singularValues()(0);
      if (smin <= 0.0 || smax / smin > 1e8)
        throw IllConditionedEigenbasis(
            "eigenbasis condition estimate above 1e8; use the contour path");
      Vector fd(A.dense.rows());
      for (Eigen::Index i = 0; i < fd.size(); ++i) fd(i) = f(es.eigenvalues()(i));
      Matrix out = V * fd.asDiagonal() * Eigen::PartialPivLU<Matrix>(V).solve(
                                             Matrix::Identity(V.rows(), V.cols()));
      return OpMatrix::dense(std::move(out));
    }
  }
  return {};
}

OpMatrix frac_power_inv(const OperatorModel& A, double tau, const Config& cfg) {
  for (Complex z : spectrum(A)) {
    if (z.imag() == 0.0 && z.real() <= -1.0)
      throw BranchCutIntersection("sigma(A) meets (-inf, -1]");
  }
  return matrix_function_oracle(
      [tau](Complex z) { return std::pow(1.0 + z, -tau); }, A, cfg);
}

OpMatrix log_operator(const OperatorModel& A, const Config& cfg) {
  require_injective(A, "log(A) requires injective A");
  require_off_negative_axis(A);
  return nollau_log1p_matrix(A, cfg) - nollau_log1p_inverse_matrix(A, cfg);
}

CheckReport log_scaling_check(const OperatorModel& A, double sigma, const Config& cfg) {
  if (!(sigma >= 0.0 && sigma <= 1.0)) throw ParameterDomain("sigma must lie in [0,1]");
  CheckReport rep;
  const OpMatrix logA = log_operator(A, cfg);
  const OpMatrix As = matrix_function_oracle(
      [sigma](Complex z) { return std::pow(z, sigma); }, A, cfg);
  const OperatorModel As_model = OperatorModel::from_matrix_shape(As);
  const OpMatrix left = log_operator(As_model, cfg);
  const double diff = (left - logA * sigma).frobenius();
  const double tol = 1e-8 * (1.0 + logA.frobenius());
  rep.points_checked = 1;
  rep.max_violation = diff;
  rep.passed = diff <= tol;
  if (!rep.passed)
    rep.violations.push_back({"||log(A^sigma) - sigma log(A)|| = " + std::to_string(diff), diff});
  return rep;
}

OpMatrix two_pi_ilog_weight(const OperatorModel& A, double upsilon, const Config& cfg) {
  if (upsilon < 0.0) throw ParameterDomain("upsilon must be nonnegative");
  if (upsilon == 0.0) return OpMatrix::identity(A.dim());
  require_injective(A, "(2pi - i log A)^{-upsilon} requires injective A");
  require_off_negative_axis(A);
  return matrix_function_oracle(
      [upsilon](Complex z) {
        return std::pow(Complex(2.0 * M_PI, 0.0) - Complex(0.0, 1.0) * std::log(z), -upsilon);
      },
      A, cfg);
}

namespace {

void check_commutators(const std::vector<OpMatrix>& factors) {
  for (std::size_t i = 0; i < factors.size(); ++i) {
    for (std::size_t j = i + 1; j < factors.size(); ++j) {
      const double nf = factors[i].frobenius(), ng = factors[j].frobenius();
      if (nf == 0.0 || ng == 0.0) continue;
      const double c = (factors[i] * factors[j] - factors[j] * factors[i]).frobenius();
      if (c > 1e-10 * nf * ng)
        throw Error("weight factors fail to commute: " + std::to_string(c / (nf * ng)));
    }
  }
}

std::string fmt_exp(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

}  // namespace

WeightOperator weight_operator(const OperatorModel& A, WeightFamily family,
                               const WeightParams& params, const Config& cfg) {
  WeightOperator w;
  w.family = family;
  w.params = params;
  std::vector<OpMatrix> factors;
  switch (family) {
    case WeightFamily::Infinity: {
      factors.push_back(frac_power_inv(A, params.nu, cfg));
      if (params.upsilon != 0.0)
        factors.push_back(matrix_function_oracle(
            [&](Complex z) { return std::pow(std::log(2.0 + z), -params.upsilon); }, A, cfg));
      w.description = "(1+A)^-" + fmt_exp(params.nu) + " log(2+A)^-" + fmt_exp(params.upsilon);
      break;
    }
    case WeightFamily::InfinityZero: {
      require_injective(A, "Phi^mu_nu(upsilon) requires injective A");
      if (params.mu != 0.0)
        factors.push_back(matrix_function_oracle(
            [&](Complex z) { return std::pow(z, params.mu); }, A, cfg));
      factors.push_back(frac_power_inv(A, params.mu + params.nu, cfg));
      if (params.upsilon != 0.0) factors.push_back(two_pi_ilog_weight(A, params.upsilon, cfg));
      w.description = "A^" + fmt_exp(params.mu) + " (1+A)^-" + fmt_exp(params.mu + params.nu) +
                      " (2pi-ilogA)^-" + fmt_exp(params.upsilon);
      break;
    }
    case WeightFamily::Zero: {
      require_injective(A, "Phi^mu(upsilon) requires injective A");
      if (params.mu != 0.0)
        factors.push_back(matrix_function_oracle(
            [&](Complex z) { return std::pow(z, params.mu); }, A, cfg));
      factors.push_back(frac_power_inv(A, params.mu, cfg));
      if (params.upsilon != 0.0)
        factors.push_back(matrix_function_oracle(
            [&](Complex z) { return std::pow(std::log(2.0 + 1.0 / z), -params.upsilon); }, A,
            cfg));
      w.description = "A^" + fmt_exp(params.mu) + " (1+A)^-" + fmt_exp(params.mu) +
                      " log(2+A^-1)^-" + fmt_exp(params.upsilon);
      break;
    }
  }
  check_commutators(factors);
  OpMatrix m = OpMatrix::identity(A.dim());
  for (const auto& f : factors) m = m * f;
  w.matrix = std::move(m);
  return w;
}

CheckReport moment_inequality_check(const OperatorModel& A,
                                    const std::function<Complex(Complex)>& g,
                                    double theta, const std::vector<double>& t_grid,
                                    const WeightOperator& W, const Config& cfg) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw ParameterDomain("theta must lie in [0,1]");
  CheckReport rep;
  const OpMatrix C = matrix_function_oracle(g, A, cfg);
  const OpMatrix Ct = matrix_function_oracle(
      [&](Complex z) { return std::pow(g(z), theta); }, A, cfg);
  double max_ratio = 0.0;
  for (double t : t_grid) {
    const OpMatrix E = evolve(A, t);
    const double num = (E * Ct * W.matrix).norm_p(2.0);
    const double d1 = (E * W.matrix).norm_p(2.0);
    const double d2 = (E * C * W.matrix).norm_p(2.0);
    if (d1 <= 0.0 || d2 <= 0.0) {
      rep.skipped.push_back("t = " + std::to_string(t) + ": zero denominator");
      continue;
    }
    ++rep.points_checked;
    const double ratio = num / (std::pow(d1, 1.0 - theta) * std::pow(d2, theta));
    max_ratio = std::max(max_ratio, ratio);
  }
  rep.max_violation = max_ratio;
  rep.passed = max_ratio <= cfg.moment_K;
  rep.notes.push_back("max moment ratio " + std::to_string(max_ratio) + " vs K = " +
                      std::to_string(cfg.moment_K));
  return rep;
}

}  // namespace semidecay
