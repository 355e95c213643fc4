#pragma once

#include <vector>

#include "semidecay/funcalc.hpp"
#include "semidecay/linop.hpp"
#include "semidecay/parallel.hpp"

namespace semidecay {

/// T(t) = exp(-tA): entrywise for diagonals, closed form for triangular
/// 2x2 blocks, scaling-and-squaring Pade-13 for dense input.
OpMatrix evolve(const OperatorModel& A, double t);

/// Dense complex matrix exponential (Higham's scaling-and-squaring with
/// the order-13 diagonal Pade approximant).
Matrix expm_dense(const Matrix& m);

struct OrbitResult {
  Vector value;
  double tail_bound = 0.0;
  double quad_error = 0.0;
  std::size_t evals = 0;
};

/// g(t) = (1/2pi i) ∫_{iR} e^{-lambda t} (1+lambda)^{-nu} log(2+lambda)^{-upsilon}
///        R(lambda, A) y dlambda;  equals T(t) Phi_nu(upsilon) y.
/// If `profile_beta` is supplied, nu < beta + 1.25 is rejected.
OrbitResult laplace_orbit_infinity(const OperatorModel& A, double nu, double upsilon,
                                   double t, const Vector& y,
                                   const Config& cfg = default_config(),
                                   const double* profile_beta = nullptr);

/// Same with kernel lambda^mu (1+lambda)^{-nu-mu} (2pi - i log lambda)^{-upsilon};
/// equals T(t) Phi^mu_nu(upsilon) y. Branch point at 0 handled by
/// symmetric log-spaced refinement.
OrbitResult laplace_orbit_infinity_zero(const OperatorModel& A, double mu, double nu,
                                        double upsilon, double t, const Vector& y,
                                        const Config& cfg = default_config(),
                                        const double* profile_alpha = nullptr,
                                        const double* profile_beta = nullptr);

struct DecayCurve {
  std::vector<double> t_grid;
  std::vector<double> values;  // ||T(t) W||
  std::string weight_desc;
  double norm_p = 2.0;
  std::vector<std::size_t> floored;  // indices dropped below the value floor
};

DecayCurve decay_curve(const OperatorModel& A, const WeightOperator& W,
                       const std::vector<double>& t_grid, const NormSpace& space,
                       const WorkerPool& pool = serial_pool(),
                       const Config& cfg = default_config());

std::vector<double> log_spaced_grid(double t_min, double t_max, int per_decade);

enum class LemmaB1Variant { Log2, TwoPiILog };

/// Appendix-B vanishing integrals along iR; |value| <= tol_abs per t.
CheckReport lemma_b1_check(double nu, double zeta, double mu,
                           const std::vector<double>& t_list, LemmaB1Variant variant,
                           double tol_abs = 1e-6, const Config& cfg = default_config());

enum class LemmaB2Variant { A, B };

/// Appendix-B residue identities on the two-ray contour at angle theta;
/// the quadrature value is compared with the residue closed form.
CheckReport lemma_b2_check(double alpha, double beta, double zeta, double eta,
                           Complex lambda, LemmaB2Variant variant,
                           double theta = 0.9 * M_PI,
                           const Config& cfg = default_config());

/// The closed forms used by lemma_b2_check (residue at z = 1 - eta - lambda).
Complex lemma_b2_closed_form(double alpha, double beta, double zeta, double eta,
                             Complex lambda, LemmaB2Variant variant);

}  // namespace semidecay
