#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace semidecay {

/// Runtime defaults. Every field can be overridden by an environment
/// variable with the SEMIDECAY_ prefix (see from_env), and the CLI maps
/// its flags onto the same fields.
struct Config {
  // Quadrature
  double tol_quad_abs = 1e-10;
  double tol_quad_rel = 1e-9;
  std::size_t max_quad_evals = 200000;   // per integral
  std::size_t max_orbit_evals = 800000;  // inverse-Laplace orbits oscillate

  // Sector contour defaults (Dunford calculus)
  int contour_nodes_per_decade = 32;

  // Pick-property falsifier tolerance on Im f
  double pick_tol = 1e-12;

  // Moment inequality holds up to an unspecified absolute constant.
  double moment_K = 10.0;

  // Decay verification
  double t0_fit = 10.0;           // envelope constants are fitted on t >= t0
  double value_floor = 1e-280;    // curve points below this are dropped
  double bound_margin = 0.25;     // PASS: max tail ratio <= (1+margin)*C
  double fit_tol_poly = 0.15;     // fitted exponent may exceed prediction by this
  double stability_max_growth = 1.2;  // allowed upward ratio drift per decade

  // Arbitrary-loss parameters of the rate theorems
  double delta_default = 0.1;
  double epsilon_default = 0.1;
  double log_only_c = 0.25;  // the c in (0,1/2) of the stretched-exponential rate

  // Slowly-varying empirical bound threshold
  double slow_var_C_max = 10.0;

  // Parallelism / reproducibility
  int workers = 1;
  std::uint64_t seed = 1;

  /// Defaults overridden by SEMIDECAY_* environment variables
  /// (SEMIDECAY_TOL_QUAD_ABS, SEMIDECAY_WORKERS, SEMIDECAY_SEED, ...).
  static Config from_env();
};

const Config& default_config();

}  // namespace semidecay
