#include "semidecay/config.hpp"

#include <cstdlib>
#include <string>

namespace semidecay {

namespace {

void read_env(const char* name, double& out) {
  if (const char* v = std::getenv(name)) out = std::strtod(v, nullptr);
}

void read_env(const char* name, int& out) {
  if (const char* v = std::getenv(name)) out = static_cast<int>(std::strtol(v, nullptr, 10));
}

void read_env(const char* name, std::uint64_t& out) {
  if (const char* v = std::getenv(name)) out = std::strtoull(v, nullptr, 10);
}

}  // namespace

Config Config::from_env() {
  Config c;
  read_env("SEMIDECAY_TOL_QUAD_ABS", c.tol_quad_abs);
  read_env("SEMIDECAY_TOL_QUAD_REL", c.tol_quad_rel);
  read_env("SEMIDECAY_MAX_QUAD_EVALS", c.max_quad_evals);
  read_env("SEMIDECAY_MAX_ORBIT_EVALS", c.max_orbit_evals);
  read_env("SEMIDECAY_CONTOUR_NODES_PER_DECADE", c.contour_nodes_per_decade);
  read_env("SEMIDECAY_PICK_TOL", c.pick_tol);
  read_env("SEMIDECAY_MOMENT_K", c.moment_K);
  read_env("SEMIDECAY_T0_FIT", c.t0_fit);
  read_env("SEMIDECAY_VALUE_FLOOR", c.value_floor);
  read_env("SEMIDECAY_BOUND_MARGIN", c.bound_margin);
  read_env("SEMIDECAY_FIT_TOL_POLY", c.fit_tol_poly);
  read_env("SEMIDECAY_STABILITY_MAX_GROWTH", c.stability_max_growth);
  read_env("SEMIDECAY_DELTA", c.delta_default);
  read_env("SEMIDECAY_EPSILON", c.epsilon_default);
  read_env("SEMIDECAY_LOG_ONLY_C", c.log_only_c);
  read_env("SEMIDECAY_SLOW_VAR_C_MAX", c.slow_var_C_max);
  read_env("SEMIDECAY_WORKERS", c.workers);
  read_env("SEMIDECAY_SEED", c.seed);
  return c;
}

const Config& default_config() {
  static const Config c = Config::from_env();
  return c;
}

}  // namespace semidecay
