#pragma once

#include <functional>
#include <string>

#include "semidecay/cbf.hpp"
#include "semidecay/config.hpp"
#include "semidecay/linop.hpp"

namespace semidecay {

/// Quadrature discretization of the positively oriented sector boundary.
struct SectorContour {
  double omega_prime = 3.0 * M_PI / 4.0;  // in (omega_A, pi)
  double r_min = 1e-6;
  double r_max = 1e6;
  int nodes_per_decade = 32;
};

/// omega' = (omega_A + pi)/2, radii 1e-6*min|sigma| .. 1e6*max(1+|sigma|).
SectorContour default_contour(const OperatorModel& A,
                              const Config& cfg = default_config());

struct HInftyZeroSymbol;

/// Same angles, but the radial window is widened until the symbol-decay
/// truncation-tail estimate drops below the quadrature tolerance.
SectorContour default_contour(const OperatorModel& A, const HInftyZeroSymbol& symbol,
                              const Config& cfg = default_config());

/// f(z) = z^alpha / ((1+z)^{alpha+beta} log(2+z)^{u1} (2pi - i log z)^{u2}).
struct HInftyZeroSymbol {
  double alpha = 1.0;
  double beta = 1.0;
  double upsilon1 = 0.0;
  double upsilon2 = 0.0;

  Complex eval(Complex z) const;
  /// alpha = 0 is admissible only for invertible operators.
  void validate(bool operator_invertible) const;
};

struct DunfordResult {
  OpMatrix value;
  double tail_bound = 0.0;       // estimated truncation error
  double refinement_err = 0.0;   // |I_h - I_{2h}| Richardson discrepancy
};

/// Riesz-Dunford sector-contour calculus: trapezoid in log-radius along
/// both rays of the sector boundary, Richardson-checked, with reported
/// truncation tails.
DunfordResult dunford_apply(const HInftyZeroSymbol& symbol, const OperatorModel& A,
                            const SectorContour& contour,
                            const Config& cfg = default_config());

/// Spectral/primary-matrix-function oracle: entrywise for diagonals,
/// [[f, g f'],[0, f]] for 2x2 upper-triangular blocks (derivative by a
/// Cauchy circle), eigendecomposition for dense diagonalizable input.
OpMatrix matrix_function_oracle(const std::function<Complex(Complex)>& f,
                                const OperatorModel& A,
                                const Config& cfg = default_config());

/// (I + A)^{-tau}, principal branch.
OpMatrix frac_power_inv(const OperatorModel& A, double tau,
                        const Config& cfg = default_config());

/// log(A) = log(1+A) - log(1+A^{-1}) through the Nollau integrals; the
/// A^{-1} resolvents are rewritten as resolvents of A.
OpMatrix log_operator(const OperatorModel& A, const Config& cfg = default_config());

/// Checks log(A^sigma) = sigma log(A), sigma in [0,1].
CheckReport log_scaling_check(const OperatorModel& A, double sigma,
                              const Config& cfg = default_config());

/// (2 pi I - i log A)^{-upsilon}.
OpMatrix two_pi_ilog_weight(const OperatorModel& A, double upsilon,
                            const Config& cfg = default_config());

enum class WeightFamily { Infinity, InfinityZero, Zero };

struct WeightParams {
  double mu = 0.0;
  double nu = 0.0;
  double upsilon = 0.0;
};

struct WeightOperator {
  WeightFamily family = WeightFamily::Infinity;
  WeightParams params;
  OpMatrix matrix;
  std::string description;
};

/// Infinity:     (1+A)^{-nu} log(2+A)^{-upsilon}
/// InfinityZero: A^mu (1+A)^{-mu-nu} (2pi - i log A)^{-upsilon}
/// Zero:         A^mu (1+A)^{-mu} log(2 + A^{-1})^{-upsilon}
/// Built factor by factor; commutators are asserted below 1e-10 rel.
WeightOperator weight_operator(const OperatorModel& A, WeightFamily family,
                               const WeightParams& params,
                               const Config& cfg = default_config());

/// Moment-inequality ratio ||T(t) C^theta W|| /
/// (||T(t) W||^{1-theta} ||T(t) C W||^theta) scanned over t_grid; C = g(A).
CheckReport moment_inequality_check(const OperatorModel& A,
                                    const std::function<Complex(Complex)>& g,
                                    double theta, const std::vector<double>& t_grid,
                                    const WeightOperator& W,
                                    const Config& cfg = default_config());

}  // namespace semidecay
