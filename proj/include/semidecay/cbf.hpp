#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "semidecay/config.hpp"
#include "semidecay/linop.hpp"

namespace semidecay {

/// Stieltjes representation f(lambda) = a + b*lambda + ∫ lambda/(lambda+s) w(s) ds.
///
/// Numerically the integral lives in u = log s. Writing
///   P(u) = lambda*s/(lambda+s),   K(u) = lambda/(lambda+s),
/// every catalog density factors as
///   kernel * w(s) * s  =  P(u)*cP(u) + K(u)*cK(u)
/// with cP, cK free of overflow for any u (see coeff below). P and K have
/// stable branch forms on both sides of u = 0, and the same decomposition
/// applies verbatim to the operator integral with
///   P_A x = A s (A+s)^{-1} x,   K_A x = A (A+s)^{-1} x.
struct StieltjesRep {
  double a = 0.0;
  double b = 0.0;
  double s_lo = 0.0;                      // support lower end (0 allowed)
  double s_hi = std::numeric_limits<double>::infinity();
  std::string label;
  std::string density_formula;            // display only
  std::vector<double> u_breakpoints;      // adaptivity hints, in u = log s

  /// cP, cK at u = log s; must be evaluable for |u| up to overflow scale.
  std::function<void(double u, double& cP, double& cK)> coeff;

  /// Plain density w(s) for reporting and sign checks (moderate s only).
  std::function<double(double s)> density;

  bool upper_tail_algebraic = false;  // cP/cK decay only algebraically in u
  bool lower_tail_algebraic = false;

  /// Numerical check of ∫ 1/(1+s) dmu < inf by successive truncations.
  bool mass_finite(const Config& cfg = default_config()) const;
};

struct CbfCatalogEntry {
  std::string name;
  StieltjesRep rep;
  std::function<Complex(Complex)> closed_form;
};

// Example catalog (the classical explicit representations):
CbfCatalogEntry cbf_power(double alpha);           // lambda^alpha, alpha in [0,1]
CbfCatalogEntry cbf_shifted_power(double alpha);   // (1+lambda)^alpha - 1, alpha in (0,1)
CbfCatalogEntry cbf_log1p();                       // log(1+lambda)
CbfCatalogEntry cbf_lambda_minus_one_over_log();   // (lambda-1)/log(lambda)
CbfCatalogEntry cbf_log_square_combination();      // (lambda log lambda - lambda + 1)/log^2
CbfCatalogEntry cbf_log_cube_combination();        // (-2+2l-2l log l+l log^2 l)/log^3
std::vector<CbfCatalogEntry> cbf_catalog();        // all six with alpha = 1/2

struct QuadratureInfo {
  double error = 0.0;
  std::size_t evals = 0;
};

/// Scalar Stieltjes evaluation; requires Re(lambda) > 0.
Complex eval_cbf_scalar(const StieltjesRep& rep, Complex lambda,
                        const Config& cfg = default_config(),
                        QuadratureInfo* info = nullptr);

/// Operator Stieltjes integral a x + b A x + ∫ A(A+s)^{-1} x dmu(s).
Vector apply_cbf_operator(const StieltjesRep& rep, const OperatorModel& A,
                          const Vector& x, const Config& cfg = default_config());

/// log(1+A)x = ∫_1^inf A(A+t)^{-1} x dt/t, as an independent code path
/// (semi-infinite quadrature with t = e^u).
Vector nollau_log1p(const OperatorModel& A, const Vector& x,
                    const Config& cfg = default_config());

/// Matrix-valued variants used by the operator logarithm.
OpMatrix nollau_log1p_matrix(const OperatorModel& A, const Config& cfg = default_config());
/// log(1+A^{-1}) = ∫_1^inf (1/t^2) (1/t + A)^{-1} dt, resolvents of A only.
OpMatrix nollau_log1p_inverse_matrix(const OperatorModel& A,
                                     const Config& cfg = default_config());

struct CheckViolation {
  std::string where;
  double amount = 0.0;
};

struct CheckReport {
  bool passed = true;
  std::size_t points_checked = 0;
  double max_violation = 0.0;
  std::vector<CheckViolation> violations;
  std::vector<std::string> skipped;
  std::vector<std::string> notes;
};

/// Nevanlinna-Pick falsifier: Im f >= -tol on the upper half-plane grid
/// and f >= -tol on (0,inf). A pass is evidence, not proof.
CheckReport pick_property_check(const std::function<Complex(Complex)>& f,
                                const std::vector<Complex>& grid,
                                double tol = default_config().pick_tol);

std::vector<Complex> default_pick_grid();

/// lambda/f(lambda) and lambda*f(1/lambda).
std::pair<std::function<Complex(Complex)>, std::function<Complex(Complex)>>
cbf_closure_transforms(const CbfCatalogEntry& f);

/// f^{a1} g^{a2} with principal powers; a1,a2 in (0,1), a1+a2 <= 1.
std::function<Complex(Complex)> cbf_power_product(const CbfCatalogEntry& f,
                                                  const CbfCatalogEntry& g,
                                                  double a1, double a2);

}  // namespace semidecay
