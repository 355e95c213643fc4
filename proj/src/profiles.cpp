#include "semidecay/profiles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "semidecay/errors.hpp"

namespace semidecay {

GrowthProfile resolvent_profile(const OperatorModel& A, const ProfilePlan& plan,
                                const NormSpace& space, const WorkerPool& pool) {
  std::vector<double> radii = plan.extra;
  auto add_cluster = [&](double lo, double hi) {
    if (!(lo > 0.0 && hi > lo)) throw DomainError("invalid profile window");
    const double decades = std::log10(hi / lo);
    const int n = std::max(2, static_cast<int>(std::ceil(decades * plan.per_decade)));
    for (int i = 0; i <= n; ++i) radii.push_back(lo * std::pow(hi / lo, double(i) / n));
  };
  if (plan.include_zero_cluster) add_cluster(plan.zero_lo, plan.zero_hi);
  if (plan.include_inf_cluster) add_cluster(plan.inf_lo, plan.inf_hi);
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

  GrowthProfile prof;
  prof.norm_p = space.p;
  prof.s = radii;
  prof.n.assign(radii.size(), 0.0);
  pool.parallel_for(radii.size(), [&](std::size_t i) {
    const double s = radii[i];
    const double up = operator_norm(resolvent_shift(A, Complex(0.0, s)), space).value;
    const double dn = operator_norm(resolvent_shift(A, Complex(0.0, -s)), space).value;
    prof.n[i] = std::max(up, dn);
  });
  prof.M.assign(radii.size(), 0.0);
  double run = 0.0;
  for (std::size_t i = 0; i < prof.n.size(); ++i) {
    run = std::max(run, prof.n[i]);
    prof.M[i] = run;
  }
  return prof;
}

namespace {

struct LsqFit {
  Eigen::Vector3d coef;
  Eigen::Vector3d stderr_;
  double r2 = 0.0;
};

// y ~ c0 + c1 x1 + c2 x2 (x2 column optional)
LsqFit least_squares(const std::vector<double>& y, const std::vector<double>& x1,
                     const std::vector<double>& x2, bool use_x2) {
  const int n = static_cast<int>(y.size());
  const int k = use_x2 ? 3 : 2;
  Eigen::MatrixXd X(n, k);
  Eigen::VectorXd Y(n);
  for (int i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = x1[i];
    if (use_x2) X(i, 2) = x2[i];
    Y(i) = y[i];
  }
  Eigen::MatrixXd G = X.transpose() * X;
  Eigen::VectorXd c = G.ldlt().solve(X.transpose() * Y);
  Eigen::VectorXd resid = Y - X * c;
  const double sse = resid.squaredNorm();
  const double mean = Y.mean();
  const double sst = (Y.array() - mean).square().sum();
  LsqFit fit;
  fit.coef.setZero();
  fit.stderr_.setZero();
  for (int j = 0; j < k; ++j) fit.coef(j) = c(j);
  if (n > k) {
    const double sigma2 = sse / (n - k);
    Eigen::MatrixXd Ginv = G.inverse();
    for (int j = 0; j < k; ++j) fit.stderr_(j) = std::sqrt(std::max(0.0, sigma2 * Ginv(j, j)));
  }
  fit.r2 = sst > 0.0 ? 1.0 - sse / sst : 1.0;
  return fit;
}

}  // namespace

GrowthFitInf fit_growth_infinity(const GrowthProfile& profile, double window_lo,
                                 double window_hi) {
  // envelope within the window: running max from below
  std::vector<double> y, x1, x2;
  double run = 0.0;
  for (std::size_t i = 0; i < profile.s.size(); ++i) {
    const double s = profile.s[i];
    if (s < window_lo || s > window_hi) continue;
    run = std::max(run, profile.n[i]);
    y.push_back(std::log(run));
    x1.push_back(std::log(s));
    x2.push_back(std::log(std::log(s) > 1.0 ? std::log(s) : 1.0));
  }
  if (y.size() < 12) throw InsufficientSamples("need at least 12 samples in the window");
  LsqFit full = least_squares(y, x1, x2, true);
  GrowthFitInf out;
  // parsimony: drop the log-log regressor when indistinguishable from 0
  if (std::abs(full.coef(2)) < std::max(2.0 * full.stderr_(2), 1e-6) ||
      full.coef(2) < 0.0) {
    LsqFit red = least_squares(y, x1, x2, false);
    out.beta = red.coef(1);
    out.b = 0.0;
    out.b_dropped = true;
    out.C = std::exp(red.coef(0));
    out.r2 = red.r2;
  } else {
    out.beta = full.coef(1);
    out.b = full.coef(2);
    out.C = std::exp(full.coef(0));
    out.r2 = full.r2;
  }
  if (out.beta < 0.0) {
    out.beta = 0.0;
    out.clamped = true;
  }
  return out;
}

GrowthFitZero fit_growth_zero(const GrowthProfile& profile, double window_lo,
                              double window_hi) {
  // envelope toward s -> 0: running max from above
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < profile.s.size(); ++i)
    if (profile.s[i] >= window_lo && profile.s[i] <= window_hi) idx.push_back(i);
  if (idx.size() < 12) throw InsufficientSamples("need at least 12 samples in the window");
  std::vector<double> y(idx.size()), x1(idx.size()), x2(idx.size());
  double run = 0.0;
  for (std::size_t j = idx.size(); j-- > 0;) {
    const std::size_t i = idx[j];
    run = std::max(run, profile.n[i]);
    const double inv = 1.0 / profile.s[i];
    y[j] = std::log(run);
    x1[j] = std::log(inv);
    x2[j] = std::log(std::log(inv) > 1.0 ? std::log(inv) : 1.0);
  }
  LsqFit full = least_squares(y, x1, x2, true);
  GrowthFitZero out;
  if (std::abs(full.coef(2)) < std::max(2.0 * full.stderr_(2), 1e-6) ||
      full.coef(2) < 0.0) {
    LsqFit red = least_squares(y, x1, x2, false);
    out.alpha = red.coef(1);
    out.a = 0.0;
    out.a_dropped = true;
    out.C = std::exp(red.coef(0));
    out.r2 = red.r2;
  } else {
    out.alpha = full.coef(1);
    out.a = full.coef(2);
    out.C = std::exp(full.coef(0));
    out.r2 = full.r2;
  }
  if (out.alpha < 1.0) {
    out.alpha = 1.0;  // 0 in sigma(A) forces alpha >= 1
    out.clamped = true;
  }
  return out;
}

FunctionTable m_log(const FunctionTable& M) {
  FunctionTable out;
  out.reserve(M.size());
  double prev = -std::numeric_limits<double>::infinity();
  for (auto [s, m] : M) {
    if (!(m > 0.0)) throw DomainError("M must be positive");
    if (m < prev) throw DomainError("M must be nondecreasing");
    prev = m;
    out.emplace_back(s, m * (std::log1p(m) + std::log1p(s)));
  }
  return out;
}

RightInverseResult m_log_right_inverse(const FunctionTable& mlog, double t) {
  if (mlog.empty()) throw DomainError("empty table");
  if (t < mlog.front().second) return {mlog.front().first, true};
  if (t > mlog.back().second) throw RangeExceeded("t above the table range");
  // locate the bracketing grid cell, then bisect the log-log interpolant
  std::size_t hi = 1;
  while (hi < mlog.size() && mlog[hi].second <= t) ++hi;
  if (hi == mlog.size()) return {mlog.back().first, false};
  const std::size_t lo = hi - 1;
  double a = mlog[lo].first, b = mlog[hi].first;
  auto interp = [&](double s) {
    const double w = (std::log(s) - std::log(mlog[lo].first)) /
                     (std::log(mlog[hi].first) - std::log(mlog[lo].first));
    return std::exp((1.0 - w) * std::log(mlog[lo].second) + w * std::log(mlog[hi].second));
  };
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(a * b);
    if (interp(mid) <= t)
      a = mid;
    else
      b = mid;
    if ((b - a) <= 1e-9 * a) break;
  }
  return {a, false};
}

CheckReport positive_increase_check(const FunctionTable& M, double alpha, double c,
                                    double s0) {
  if (!(alpha > 0.0) || !(c > 0.0 && c <= 1.0) || !(s0 > 0.0))
    throw ParameterDomain("need alpha > 0, c in (0,1], s0 > 0");
  CheckReport rep;
  auto value_at = [&](double s) -> double {
    // monotone log-log interpolation on the table
    if (s <= M.front().first) return M.front().second;
    if (s >= M.back().first) return M.back().second;
    std::size_t hi = 1;
    while (M[hi].first < s) ++hi;
    const std::size_t lo = hi - 1;
    const double w = (std::log(s) - std::log(M[lo].first)) /
                     (std::log(M[hi].first) - std::log(M[lo].first));
    return std::exp((1.0 - w) * std::log(M[lo].second) + w * std::log(M[hi].second));
  };
  for (double lambda : {1.0, 2.0, 5.0, 10.0, 100.0, 1000.0}) {
    for (const auto& [s, m] : M) {
      if (s < s0) continue;
      if (lambda * s > M.back().first) continue;
      ++rep.points_checked;
      const double lhs = value_at(lambda * s) / m;
      const double rhs = c * std::pow(lambda, alpha);
      if (lhs < rhs * (1.0 - 1e-12)) {
        rep.passed = false;
        const double short_by = rhs / lhs;
        rep.max_violation = std::max(rep.max_violation, short_by);
        if (rep.violations.size() < 16)
          rep.violations.push_back(
              {"lambda = " + std::to_string(lambda) + ", s = " + std::to_string(s), short_by});
      }
    }
  }
  return rep;
}

SlowlyVaryingReport slowly_varying_bound_check(const std::function<double(double)>& ell,
                                               double gamma,
                                               const std::vector<double>& grid,
                                               const Config& cfg) {
  if (!(gamma > 0.0)) throw ParameterDomain("gamma must be positive");
  SlowlyVaryingReport out;
  out.c_emp = std::numeric_limits<double>::infinity();
  out.C_emp = 0.0;
  for (double s : grid) {
    for (double t : grid) {
      if (!(t >= s)) continue;
      const double ls = ell(s), lt = ell(t);
      if (!(ls > 0.0 && lt > 0.0)) {
        out.check.skipped.push_back("nonpositive ell at s = " + std::to_string(s));
        continue;
      }
      ++out.check.points_checked;
      const double ratio = lt / ls;
      out.c_emp = std::min(out.c_emp, ratio * std::pow(t / s, gamma));
      out.C_emp = std::max(out.C_emp, ratio * std::pow(s / t, gamma));
    }
  }
  out.check.passed = std::isfinite(out.c_emp) && out.c_emp > 0.0 && out.C_emp > 0.0 &&
                     out.C_emp <= cfg.slow_var_C_max;
  out.check.max_violation = out.C_emp;
  out.check.notes.push_back("empirical c = " + std::to_string(out.c_emp) +
                            ", C = " + std::to_string(out.C_emp) + " (threshold " +
                            std::to_string(cfg.slow_var_C_max) + ")");
  return out;
}

double growth_bound(const std::vector<double>& t_grid, const std::vector<double>& norms,
                    double t0) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] < t0 || !(norms[i] > 0.0)) continue;
    const double x = t_grid[i], y = std::log(norms[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 4) throw InsufficientSamples("growth bound needs >= 4 positive tail points");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------------------
// Predictions
// ---------------------------------------------------------------------------

const char* theorem_name(TheoremId id) {
  switch (id) {
    case TheoremId::ThmInf: return "ThmInf";
    case TheoremId::CorHilbertInf: return "CorHilbertInf";
    case TheoremId::CorInfB0: return "CorInfB0";
    case TheoremId::ThmInfZero: return "ThmInfZero";
    case TheoremId::CorInfZeroAB0: return "CorInfZeroAB0";
    case TheoremId::ThmZero: return "ThmZero";
    case TheoremId::CorZeroA0: return "CorZeroA0";
    case TheoremId::LogOnlyBanach: return "LogOnlyBanach";
    case TheoremId::LogOnlyHilbert: return "LogOnlyHilbert";
    case TheoremId::ThmInfWeighted: return "ThmInfWeighted";
    case TheoremId::ThmInfZeroWeighted: return "ThmInfZeroWeighted";
  }
  return "?";
}

double DecayPrediction::envelope(double t) const {
  if (stretched)
    return std::exp(-stretch_rate * std::pow(t, stretch_power)) * std::pow(t, poly_exponent);
  return std::pow(t, poly_exponent) * std::pow(std::log1p(t), log_exponent);
}

namespace {

void require(bool ok, const std::string& inequality) {
  if (!ok) throw HypothesisViolated(inequality);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

}  // namespace

DecayPrediction predict_decay(TheoremId id, const TheoremParams& q, const Config& cfg) {
  (void)cfg;
  DecayPrediction out;
  out.id = id;
  out.params = q;
  const double inv_r = fourier_inv_r(q.p);  // 0 on Hilbert space

  auto rho_cap_inf = [&] { return (q.tau - inv_r) / q.beta - 1.0; };
  auto rho_cap_two_sided = [&] {
    return std::min((q.sigma + 1.0) / q.alpha - 1.0, (q.tau - inv_r) / q.beta - 1.0);
  };

  switch (id) {
    case TheoremId::ThmInf:
      require(q.beta > 0.0, "beta > 0");
      require(q.b >= 0.0, "b >= 0");
      require(q.tau > q.beta + inv_r, "tau > beta + 1/r");
      require(q.delta > 0.0, "delta > 0");
      out.poly_exponent = 1.0 - (q.tau - inv_r) / q.beta;
      out.log_exponent = q.b * (q.tau - inv_r) / q.beta + (1.0 + q.delta) * inv_r;
      break;
    case TheoremId::CorHilbertInf:
      require(q.p == 2.0, "p = 2 (Hilbert space)");
      require(q.beta > 0.0, "beta > 0");
      require(q.b >= 0.0, "b >= 0");
      require(q.tau > q.beta, "tau > beta");
      out.poly_exponent = 1.0 - q.tau / q.beta;
      out.log_exponent = q.b * q.tau / q.beta;
      break;
    case TheoremId::CorInfB0:
      require(q.beta > 0.0, "beta > 0");
      require(q.b == 0.0, "b = 0");
      require(q.tau > q.beta + inv_r, "tau > beta + 1/r");
      require(q.delta > 0.0, "delta > 0");
      require(q.rho >= 0.0 && q.rho <= rho_cap_inf(), "rho in [0, (tau-1/r)/beta - 1]");
      out.poly_exponent = -q.rho;
      out.log_exponent = (1.0 + q.delta) * inv_r;
      break;
    case TheoremId::ThmInfZero:
    case TheoremId::CorInfZeroAB0: {
      require(q.alpha >= 1.0, "alpha >= 1");
      require(q.beta > 0.0, "beta > 0");
      if (id == TheoremId::CorInfZeroAB0) require(q.a == 0.0 && q.b == 0.0, "a = b = 0");
      require(q.a >= 0.0 && q.b >= 0.0, "a, b >= 0");
      require(q.sigma > q.alpha - 1.0, "sigma > alpha - 1");
      require(q.tau > q.beta + inv_r, "tau > beta + 1/r");
      require(q.delta > 1.0 - inv_r, "delta > 1 - 1/r");
      require(q.rho >= 0.0 && q.rho <= rho_cap_two_sided(),
              "rho in [0, min{(sigma+1)/alpha - 1, (tau-1/r)/beta - 1}]");
      const double c = std::max(q.a, q.b);
      out.poly_exponent = -q.rho;
      out.log_exponent = c * (std::ceil(q.rho) + 1.0) + inv_r + q.delta;
      break;
    }
    case TheoremId::ThmZero:
    case TheoremId::CorZeroA0:
      require(q.alpha >= 1.0, "alpha >= 1");
      if (id == TheoremId::CorZeroA0) require(q.a == 0.0, "a = 0");
      require(q.a >= 0.0, "a >= 0");
      require(q.sigma > q.alpha - 1.0, "sigma > alpha - 1");
      require(q.delta > 0.0, "delta > 0");
      out.poly_exponent = 1.0 - (q.sigma + 1.0) / q.alpha;
      out.log_exponent = q.a * (q.sigma + 1.0) / q.alpha + 1.0 + q.delta;
      break;
    case TheoremId::LogOnlyBanach: {
      require(q.p >= 1.0 && q.p < 2.0, "p in [1,2)");
      require(q.b >= 0.0, "b >= 0");
      require(q.delta > 0.0, "delta > 0");
      require(q.epsilon > 0.0, "epsilon > 0");
      const double r = fourier_r(q.p);
      require(q.tau > 1.0 / r, "tau > 1/r");
      out.stretched = true;
      out.stretch_power = 1.0 / (q.b + 1.0);
      out.stretch_rate = cfg.log_only_c * q.tau * r;
      out.poly_exponent =
          q.tau * r / (q.b + 1.0) * (q.b * (q.epsilon + 1.0) + (1.0 + q.delta) / r);
      break;
    }
    case TheoremId::LogOnlyHilbert:
      require(q.p == 2.0, "p = 2 (Hilbert space)");
      require(q.b >= 0.0, "b >= 0");
      require(q.delta > 0.0 && q.delta < 0.5, "delta in (0, 1/2)");
      require(q.tau > q.delta, "tau > delta");
      require(q.epsilon > 0.0, "epsilon > 0");
      out.stretched = true;
      out.stretch_power = 1.0 / (q.b + 1.0);
      out.stretch_rate = q.tau;
      out.poly_exponent = q.tau * q.b * (q.epsilon + 1.0) / (q.delta * (q.b + 1.0));
      break;
    case TheoremId::ThmInfWeighted:
      require(q.beta > 0.0, "beta > 0");
      require(q.b >= 0.0, "b >= 0");
      require(q.tau > q.beta + inv_r, "tau > beta + 1/r");
      require(q.delta > 0.0, "delta > 0");
      require(q.rho >= 0.0 && q.rho <= rho_cap_inf(), "rho in [0, (tau-1/r)/beta - 1]");
      out.poly_exponent = -q.rho;
      out.log_exponent = 0.0;
      break;
    case TheoremId::ThmInfZeroWeighted: {
      require(q.alpha >= 1.0, "alpha >= 1");
      require(q.beta > 0.0, "beta > 0");
      require(q.a >= 0.0 && q.b >= 0.0, "a, b >= 0");
      require(q.sigma >= q.alpha - 1.0, "sigma >= alpha - 1");
      require(q.tau >= q.beta + inv_r, "tau >= beta + 1/r");
      require(q.delta > 1.0 - inv_r, "delta > 1 - 1/r");
      require(q.rho >= 0.0 && q.rho <= rho_cap_two_sided(),
              "rho in [0, min{(sigma+1)/alpha - 1, (tau-1/r)/beta - 1}]");
      out.poly_exponent = -q.rho;
      out.log_exponent = 0.0;
      break;
    }
  }

  if (out.stretched) {
    out.formula = "exp(-" + fmt(out.stretch_rate) + " t^" + fmt(out.stretch_power) +
                  ") * t^" + fmt(out.poly_exponent);
  } else {
    out.formula = "t^" + fmt(out.poly_exponent) + " * log(1+t)^" + fmt(out.log_exponent);
  }
  return out;
}

}  // namespace semidecay
