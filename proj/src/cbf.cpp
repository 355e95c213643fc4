#include "semidecay/cbf.hpp"

#include <cmath>
#include <cstdio>

#include "semidecay/errors.hpp"
#include "semidecay/quadrature.hpp"

namespace semidecay {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Stable branch forms of P = lambda*s/(lambda+s) and K = lambda/(lambda+s)
// at u = log s. Valid for any u including overflow-scale magnitudes.
inline void scalar_pk(double u, Complex lambda, Complex& P, Complex& K) {
  if (u >= 0.0) {
    const double q = std::exp(-u);  // underflows harmlessly for huge u
    const Complex den = 1.0 + lambda * q;
    P = lambda / den;
    K = lambda * q / den;
  } else {
    const double s = std::exp(u);
    const Complex den = 1.0 + s / lambda;
    P = s / den;
    K = 1.0 / den;
  }
}

struct StieltjesGrid {
  std::vector<double> core;  // sorted breakpoints of the core window
  bool upper_tail = false;
  bool lower_tail = false;
};

StieltjesGrid make_grid(const StieltjesRep& rep, double ulo_hint, double uhi_hint) {
  StieltjesGrid g;
  const double inf = std::numeric_limits<double>::infinity();
  const double u_lo = rep.s_lo > 0.0 ? std::log(rep.s_lo) : std::min(0.0, ulo_hint) - 45.0;
  const double u_hi = rep.s_hi < inf ? std::log(rep.s_hi) : std::max(0.0, uhi_hint) + 45.0;
  g.core.push_back(u_lo);
  for (double b : rep.u_breakpoints)
    if (b > u_lo && b < u_hi) g.core.push_back(b);
  for (double b : {ulo_hint, uhi_hint, 0.0})
    if (b > u_lo && b < u_hi) g.core.push_back(b);
  g.core.push_back(u_hi);
  std::sort(g.core.begin(), g.core.end());
  g.core.erase(std::unique(g.core.begin(), g.core.end()), g.core.end());
  g.upper_tail = !(rep.s_hi < inf) && rep.upper_tail_algebraic;
  g.lower_tail = rep.s_lo == 0.0 && rep.lower_tail_algebraic;
  return g;
}

template <class F, class T = std::decay_t<decltype(std::declval<F&>()(0.0))>>
quad::Result<T> integrate_stieltjes(F&& H, const StieltjesGrid& g, const Config& cfg) {
  auto res = quad::adaptive(H, g.core, cfg.tol_quad_abs, cfg.tol_quad_rel,
                            cfg.max_quad_evals * 4 / 5);
  const std::size_t tail_budget = cfg.max_quad_evals / 10;
  if (g.upper_tail) {
    auto t = quad::upper_tail(H, g.core.back(), cfg.tol_quad_abs, cfg.tol_quad_rel, tail_budget);
    res.value = res.value + t.value;
    res.error += t.error;
    res.evals += t.evals;
    res.converged = res.converged && t.converged;
  }
  if (g.lower_tail) {
    auto t = quad::lower_tail(H, g.core.front(), cfg.tol_quad_abs, cfg.tol_quad_rel, tail_budget);
    res.value = res.value + t.value;
    res.error += t.error;
    res.evals += t.evals;
    res.converged = res.converged && t.converged;
  }
  return res;
}

void require_spectrum_off_negative_axis(const OperatorModel& A) {
  for (Complex z : spectrum(A)) {
    if (z.imag() == 0.0 && z.real() < 0.0)
      throw SpectrumOutsideSector("spectrum meets the negative real axis");
  }
}

double spectral_log_radius_hi(const OperatorModel& A) {
  double m = 0.0;
  for (Complex z : spectrum(A)) m = std::max(m, std::abs(z));
  return m > 0.0 ? std::log(m) : 0.0;
}

double spectral_log_radius_lo(const OperatorModel& A) {
  double m = std::numeric_limits<double>::infinity();
  for (Complex z : spectrum(A))
    if (std::abs(z) > 0.0) m = std::min(m, std::abs(z));
  return std::isfinite(m) && m > 0.0 ? std::log(m) : 0.0;
}

}  // namespace

bool StieltjesRep::mass_finite(const Config& cfg) const {
  if (!coeff) return true;  // pure (a, b) representation
  auto H = [&](double u) -> double {
    double cP, cK;
    coeff(u, cP, cK);
    if (cP == 0.0 && cK == 0.0) return 0.0;
    Complex P, K;
    scalar_pk(u, Complex(1.0, 0.0), P, K);
    return (P * cP + K * cK).real();  // integrand of ∫ 1/(1+s) dmu
  };
  // full value with transformed tails (the quadrature engine must converge)
  auto grid = make_grid(*this, 0.0, 0.0);
  auto total = integrate_stieltjes(H, grid, cfg);
  if (!total.converged || !std::isfinite(total.value)) return false;
  // successive truncations [e^{-T}, e^{T}] must be Cauchy toward the total
  double prev_gap = std::numeric_limits<double>::infinity();
  for (double T : {15.0, 30.0, 45.0}) {
    const double u_lo = std::max(grid.core.front(), s_lo > 0.0 ? std::log(s_lo) : -T);
    const double u_hi = std::min(grid.core.back(), T);
    auto r = quad::adaptive(H, {u_lo, std::min(std::max(0.0, u_lo), u_hi), u_hi},
                            cfg.tol_quad_abs, cfg.tol_quad_rel, cfg.max_quad_evals / 4);
    if (!std::isfinite(r.value)) return false;
    const double gap = std::abs(total.value - r.value);
    if (gap > prev_gap * (1.0 + 1e-9)) return false;  // not shrinking
    prev_gap = gap;
  }
  return prev_gap <= 0.05 * (1.0 + std::abs(total.value));
}

Complex eval_cbf_scalar(const StieltjesRep& rep, Complex lambda, const Config& cfg,
                        QuadratureInfo* info) {
  if (!(lambda.real() > 0.0))
    throw DomainError("eval_cbf_scalar requires Re(lambda) > 0");
  Complex total = rep.a + rep.b * lambda;
  if (!rep.coeff) {
    if (info) *info = {};
    return total;
  }
  const double ul = std::log(std::abs(lambda));
  auto H = [&](double u) -> Complex {
    double cP, cK;
    rep.coeff(u, cP, cK);
    if (cP == 0.0 && cK == 0.0) return Complex(0);
    Complex P, K;
    scalar_pk(u, lambda, P, K);
    return P * cP + K * cK;
  };
  auto grid = make_grid(rep, ul, ul);
  auto res = integrate_stieltjes(H, grid, cfg);
  if (!res.converged)
    throw QuadratureNonConvergence("Stieltjes integral for " + rep.label);
  if (info) *info = {res.error, res.evals};
  return total + res.value;
}

Vector apply_cbf_operator(const StieltjesRep& rep, const OperatorModel& A,
                          const Vector& x, const Config& cfg) {
  require_spectrum_off_negative_axis(A);
  if (x.size() != A.dim()) throw DomainError("vector size mismatch");
  const OpMatrix Am = A.as_matrix();
  Vector total = rep.a * x + rep.b * Am.apply(x);
  if (!rep.coeff) return total;

  auto H = [&](double u) -> Vector {
    double cP, cK;
    rep.coeff(u, cP, cK);
    if (cP == 0.0 && cK == 0.0) return Vector::Zero(x.size());
    if (u >= 0.0) {
      const double q = std::exp(-u);
      // P_A x = A (I + qA)^{-1} x;  K_A x = q P_A x
      Vector y = resolvent_one_plus_scaled(A, q).apply(x);
      Vector Py = Am.apply(y);
      return (cP + q * cK) * Py;
    }
    const double s = std::exp(u);
    // K_A x = x - s (s+A)^{-1} x;  P_A x = s K_A x
    Vector Kx = x - s * resolvent_shift(A, Complex(s, 0.0)).apply(x);
    return (s * cP + cK) * Kx;
  };
  auto grid = make_grid(rep, spectral_log_radius_lo(A), spectral_log_radius_hi(A));
  auto res = integrate_stieltjes(H, grid, cfg);
  if (!res.converged)
    throw QuadratureNonConvergence("operator Stieltjes integral for " + rep.label);
  return total + res.value;
}

Vector nollau_log1p(const OperatorModel& A, const Vector& x, const Config& cfg) {
  require_spectrum_off_negative_axis(A);
  const OpMatrix Am = A.as_matrix();
  // ∫_1^inf A(A+t)^{-1} x dt/t  ==  ∫_0^inf K_A(e^u) x du
  auto H = [&](double u) -> Vector {
    const double q = std::exp(-u);
    Vector y = resolvent_one_plus_scaled(A, q).apply(x);
    return q * Am.apply(y);
  };
  const double u_max = std::max(0.0, spectral_log_radius_hi(A)) + 42.0;
  auto res = quad::adaptive(H, {0.0, std::min(u_max, std::max(1.0, spectral_log_radius_hi(A))), u_max},
                            cfg.tol_quad_abs, cfg.tol_quad_rel, cfg.max_quad_evals);
  if (!res.converged) throw QuadratureNonConvergence("Nollau log(1+A) quadrature");
  return res.value;
}

OpMatrix nollau_log1p_matrix(const OperatorModel& A, const Config& cfg) {
  require_spectrum_off_negative_axis(A);
  const OpMatrix Am = A.as_matrix();
  auto H = [&](double u) -> OpMatrix {
    const double q = std::exp(-u);
    return Am.multiply(resolvent_one_plus_scaled(A, q)) * q;
  };
  const double u_max = std::max(0.0, spectral_log_radius_hi(A)) + 42.0;
  auto res = quad::adaptive(H, {0.0, std::min(u_max, std::max(1.0, spectral_log_radius_hi(A))), u_max},
                            cfg.tol_quad_abs, cfg.tol_quad_rel, cfg.max_quad_evals);
  if (!res.converged) throw QuadratureNonConvergence("Nollau log(1+A) matrix quadrature");
  return res.value;
}

OpMatrix nollau_log1p_inverse_matrix(const OperatorModel& A, const Config& cfg) {
  if (!A.injective) throw NotInjective("log(1+A^{-1}) requires injective A");
  require_spectrum_off_negative_axis(A);
  // log(1+A^{-1}) = ∫_1^inf (1/t^2)(1/t + A)^{-1} dt via the resolvent
  // identity for A^{-1}; only resolvents of A appear.
  auto H = [&](double u) -> OpMatrix {
    const double r = std::exp(-u);
    return resolvent_shift(A, Complex(r, 0.0)) * r;
  };
  const double u_max = 42.0 + std::max(0.0, -spectral_log_radius_lo(A));
  auto res = quad::adaptive(H, {0.0, 0.5 * u_max, u_max}, cfg.tol_quad_abs, cfg.tol_quad_rel,
                            cfg.max_quad_evals);
  if (!res.converged) throw QuadratureNonConvergence("Nollau log(1+A^{-1}) matrix quadrature");
  return res.value;
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

namespace {

std::string fmt_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

Complex horner(const double* c, int n, Complex u) {
  Complex acc(c[n - 1]);
  for (int i = n - 2; i >= 0; --i) acc = acc * u + c[i];
  return acc;
}

// Taylor coefficients around lambda = 1 (u = lambda - 1) of the three
// log-ratio catalog functions; radius 0.15 keeps the truncation error
// below 1e-12.
constexpr double kSeriesD[13] = {
    1.0, 0.5, -0.08333333333333333, 0.041666666666666664, -0.02638888888888889,
    0.01875, -0.014269179894179895, 0.01136739417989418, -0.00935653659611993,
    0.00789255401234568, -0.006785849984634707, 0.005924056412337663,
    -0.005236693257950285};
constexpr double kSeriesE[13] = {
    0.5, 0.3333333333333333, -0.041666666666666664, 0.019444444444444445,
    -0.011805555555555555, 0.008134920634920636, -0.006043320105820106,
    0.004719466490299824, -0.0038193066578483246, 0.0031744862647640425,
    -0.0026938793106327827, 0.002324301440310865, -0.002032839803853982};
constexpr double kSeriesF[13] = {
    0.3333333333333333, 0.25, -0.025, 0.011111111111111112,
    -0.006547619047619048, 0.00441468253968254, -0.0032236552028218693,
    0.0024818121693121692, -0.0019840768799102133, 0.0016315832765485543,
    -0.0013714772629083145, 0.0011732381971717289, -0.001018154355101142};

Complex closed_d(Complex lam) {
  const Complex u = lam - 1.0;
  if (std::abs(u) <= 0.15) return horner(kSeriesD, 13, u);
  return u / std::log(lam);
}

Complex closed_e(Complex lam) {
  const Complex u = lam - 1.0;
  if (std::abs(u) <= 0.15) return horner(kSeriesE, 13, u);
  const Complex L = std::log(lam);
  return (lam * L - lam + 1.0) / (L * L);
}

Complex closed_f(Complex lam) {
  const Complex u = lam - 1.0;
  if (std::abs(u) <= 0.15) return horner(kSeriesF, 13, u);
  const Complex L = std::log(lam);
  return (-2.0 + 2.0 * lam - 2.0 * lam * L + lam * L * L) / (L * L * L);
}

}  // namespace

CbfCatalogEntry cbf_power(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterDomain("power exponent must be in [0,1]");
  CbfCatalogEntry e;
  e.name = "power(" + fmt_num(alpha) + ")";
  e.rep.label = e.name;
  e.rep.density_formula = "sin(alpha*pi)/pi * s^(alpha-1)";
  e.rep.a = alpha == 0.0 ? 1.0 : 0.0;
  e.rep.b = alpha == 1.0 ? 1.0 : 0.0;
  if (alpha > 0.0 && alpha < 1.0) {
    const double c = std::sin(alpha * kPi) / kPi;
    e.rep.coeff = [c, alpha](double u, double& cP, double& cK) {
      if (u >= 0.0) {
        cP = c * std::exp((alpha - 1.0) * u);
        cK = 0.0;
      } else {
        cP = 0.0;
        cK = c * std::exp(alpha * u);
      }
    };
    e.rep.density = [c, alpha](double s) { return c * std::pow(s, alpha - 1.0); };
  }
  e.closed_form = [alpha](Complex lam) { return std::pow(lam, alpha); };
  return e;
}

CbfCatalogEntry cbf_shifted_power(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ParameterDomain("shifted power exponent must be in (0,1)");
  CbfCatalogEntry e;
  e.name = "shifted_power(" + fmt_num(alpha) + ")";
  e.rep.label = e.name;
  e.rep.density_formula = "sin(alpha*pi)/pi * (s-1)^alpha / s  on (1,inf)";
  e.rep.s_lo = 1.0;
  const double c = std::sin(alpha * kPi) / kPi;
  e.rep.coeff = [c, alpha](double u, double& cP, double& cK) {
    if (u <= 0.0) {
      cP = cK = 0.0;
      return;
    }
    // (s-1)^alpha * K = P * e^{(alpha-1)u} (1-e^{-u})^alpha
    cP = c * std::exp((alpha - 1.0) * u) * std::pow(1.0 - std::exp(-u), alpha);
    cK = 0.0;
  };
  e.rep.density = [c, alpha](double s) {
    return s > 1.0 ? c * std::pow(s - 1.0, alpha) / s : 0.0;
  };
  e.closed_form = [alpha](Complex lam) { return std::pow(1.0 + lam, alpha) - 1.0; };
  return e;
}

CbfCatalogEntry cbf_log1p() {
  CbfCatalogEntry e;
  e.name = "log1p";
  e.rep.label = e.name;
  e.rep.density_formula = "1/s  on (1,inf)";
  e.rep.s_lo = 1.0;
  e.rep.coeff = [](double u, double& cP, double& cK) {
    cP = 0.0;
    cK = u > 0.0 ? 1.0 : 0.0;
  };
  e.rep.density = [](double s) { return s > 1.0 ? 1.0 / s : 0.0; };
  e.closed_form = [](Complex lam) { return std::log(1.0 + lam); };
  return e;
}

CbfCatalogEntry cbf_lambda_minus_one_over_log() {
  CbfCatalogEntry e;
  e.name = "lambda_minus_one_over_log";
  e.rep.label = e.name;
  e.rep.density_formula = "(s+1)/(s*(pi^2+log(s)^2))";
  e.rep.u_breakpoints = {0.0};
  e.rep.upper_tail_algebraic = true;
  e.rep.lower_tail_algebraic = true;
  e.rep.coeff = [](double u, double& cP, double& cK) {
    const double den = kPi * kPi + u * u;  // overflow-safe: 1/inf = 0
    cP = cK = 1.0 / den;
  };
  e.rep.density = [](double s) {
    const double L = std::log(s);
    return (s + 1.0) / (s * (kPi * kPi + L * L));
  };
  e.closed_form = closed_d;
  return e;
}

CbfCatalogEntry cbf_log_square_combination() {
  CbfCatalogEntry e;
  e.name = "log_square_combination";
  e.rep.label = e.name;
  e.rep.density_formula = "(pi^2 - 2(1+1/s)log(s) + log(s)^2)/(pi^2+log(s)^2)^2";
  e.rep.u_breakpoints = {0.0};
  e.rep.upper_tail_algebraic = true;
  e.rep.lower_tail_algebraic = true;
  e.rep.coeff = [](double u, double& cP, double& cK) {
    if (std::abs(u) < 2.0) {
      const double den = kPi * kPi + u * u;
      cP = (kPi * kPi + u * u - 2.0 * u) / (den * den);
      cK = -2.0 * u / (den * den);
    } else {  // same rational function written in r = 1/u
      const double r = 1.0 / u;
      const double den = 1.0 + kPi * kPi * r * r;
      cP = r * r * (1.0 - 2.0 * r + kPi * kPi * r * r) / (den * den);
      cK = -2.0 * r * r * r / (den * den);
    }
  };
  e.rep.density = [](double s) {
    const double L = std::log(s);
    const double den = kPi * kPi + L * L;
    return (kPi * kPi - 2.0 * (1.0 + 1.0 / s) * L + L * L) / (den * den);
  };
  e.closed_form = closed_e;
  return e;
}

CbfCatalogEntry cbf_log_cube_combination() {
  CbfCatalogEntry e;
  e.name = "log_cube_combination";
  e.rep.label = e.name;
  e.rep.density_formula =
      "(pi^2((pi^2-2)s-2) + s log^4 s - 4 s log^3 s + 2((3+pi^2)s+3)log^2 s - "
      "4 pi^2 s log s) / (s (pi^2+log^2 s)^3)";
  e.rep.u_breakpoints = {0.0};
  e.rep.upper_tail_algebraic = true;
  e.rep.lower_tail_algebraic = true;
  e.rep.coeff = [](double u, double& cP, double& cK) {
    const double p2 = kPi * kPi;
    if (std::abs(u) < 2.0) {
      const double den = p2 + u * u;
      const double den3 = den * den * den;
      const double q1 = p2 * (p2 - 2.0) + u * u * u * u - 4.0 * u * u * u +
                        2.0 * (3.0 + p2) * u * u - 4.0 * p2 * u;
      const double q2 = -2.0 * p2 + 6.0 * u * u;
      cP = q1 / den3;
      cK = q2 / den3;
    } else {
      const double r = 1.0 / u;
      const double den = 1.0 + p2 * r * r;
      const double den3 = den * den * den;
      cP = r * r *
           (1.0 - 4.0 * r + 2.0 * (3.0 + p2) * r * r - 4.0 * p2 * r * r * r +
            p2 * (p2 - 2.0) * r * r * r * r) /
           den3;
      cK = r * r * r * r * (6.0 - 2.0 * p2 * r * r) / den3;
    }
  };
  e.rep.density = [](double s) {
    const double p2 = kPi * kPi;
    const double L = std::log(s);
    const double g = p2 * ((p2 - 2.0) * s - 2.0) + s * L * L * L * L - 4.0 * s * L * L * L +
                     2.0 * ((3.0 + p2) * s + 3.0) * L * L - 4.0 * p2 * s * L;
    const double den = p2 + L * L;
    return g / (s * den * den * den);
  };
  e.closed_form = closed_f;
  return e;
}

std::vector<CbfCatalogEntry> cbf_catalog() {
  return {cbf_power(0.5),
          cbf_shifted_power(0.5),
          cbf_log1p(),
          cbf_lambda_minus_one_over_log(),
          cbf_log_square_combination(),
          cbf_log_cube_combination()};
}

// ---------------------------------------------------------------------------
// Pick property and closure operations
// ---------------------------------------------------------------------------

std::vector<Complex> default_pick_grid() {
  std::vector<Complex> grid;
  for (int k = 1; k <= 7; ++k) {
    const double phi = k * kPi / 8.0;
    for (int j = 0; j <= 12; ++j) {
      const double r = std::pow(10.0, -3.0 + 0.5 * j);
      grid.push_back(std::polar(r, phi));
    }
  }
  for (int j = 0; j <= 15; ++j) grid.push_back(Complex(std::pow(10.0, -3.0 + 0.4 * j), 0.0));
  return grid;
}

CheckReport pick_property_check(const std::function<Complex(Complex)>& f,
                                const std::vector<Complex>& grid, double tol) {
  CheckReport rep;
  for (Complex z : grid) {
    Complex v;
    try {
      v = f(z);
    } catch (const std::exception& ex) {
      rep.skipped.push_back("evaluation failed at (" + std::to_string(z.real()) + "," +
                            std::to_string(z.imag()) + "): " + ex.what());
      continue;
    }
    ++rep.points_checked;
    if (!(std::isfinite(v.real()) && std::isfinite(v.imag()))) {
      rep.skipped.push_back("non-finite value at (" + std::to_string(z.real()) + "," +
                            std::to_string(z.imag()) + ")");
      continue;
    }
    double bad = 0.0;
    if (z.imag() > 0.0) bad = -v.imag();        // need Im f >= 0 on C_+
    else if (z.imag() == 0.0 && z.real() > 0.0) bad = -v.real();  // f >= 0 on (0,inf)
    if (bad > tol) {
      rep.passed = false;
      rep.max_violation = std::max(rep.max_violation, bad);
      rep.violations.push_back({"z=(" + std::to_string(z.real()) + "," +
                                    std::to_string(z.imag()) + ")",
                                bad});
    }
  }
  rep.notes.push_back(rep.passed ? "no violation found (falsifier; not a proof)"
                                 : "Pick property violated");
  return rep;
}

std::pair<std::function<Complex(Complex)>, std::function<Complex(Complex)>>
cbf_closure_transforms(const CbfCatalogEntry& f) {
  auto cf = f.closed_form;
  // probe for zeros on (0,inf) before handing the transforms out
  for (double x : {1e-3, 1e-1, 1.0, 1e1, 1e3}) {
    if (std::abs(cf(Complex(x, 0.0))) == 0.0)
      throw DivisionByZero("f vanishes at probe point " + std::to_string(x));
  }
  auto first = [cf](Complex lam) -> Complex {
    const Complex v = cf(lam);
    if (std::abs(v) == 0.0) throw DivisionByZero("f(lambda) = 0");
    return lam / v;
  };
  auto second = [cf](Complex lam) -> Complex {
    if (std::abs(lam) == 0.0) throw DivisionByZero("lambda = 0");
    return lam * cf(1.0 / lam);
  };
  return {first, second};
}

std::function<Complex(Complex)> cbf_power_product(const CbfCatalogEntry& f,
                                                  const CbfCatalogEntry& g, double a1,
                                                  double a2) {
  if (!(a1 > 0.0 && a1 < 1.0 && a2 > 0.0 && a2 < 1.0))
    throw ParameterDomain("exponents must lie in (0,1)");
  if (a1 + a2 > 1.0) throw ParameterDomain("a1 + a2 must not exceed 1");
  auto cf = f.closed_form;
  auto cg = g.closed_form;
  return [cf, cg, a1, a2](Complex lam) {
    return std::pow(cf(lam), a1) * std::pow(cg(lam), a2);
  };
}

}  // namespace semidecay
