#pragma once

#include <optional>
#include <vector>

#include "semidecay/cbf.hpp"
#include "semidecay/linop.hpp"
#include "semidecay/parallel.hpp"

namespace semidecay {

struct ProfilePlan {
  double zero_lo = 1e-6, zero_hi = 1e-2;  // near-zero cluster
  double inf_lo = 1e2, inf_hi = 1e6;      // near-infinity cluster
  int per_decade = 64;
  std::vector<double> extra;  // resonance radii etc.
  bool include_zero_cluster = true;
  bool include_inf_cluster = true;
};

struct GrowthFitInf {
  double beta = 0.0, b = 0.0, C = 1.0, r2 = 0.0;
  bool b_dropped = false;  // parsimony: log-log regressor insignificant
  bool clamped = false;
};

struct GrowthFitZero {
  double alpha = 1.0, a = 0.0, C = 1.0, r2 = 0.0;
  bool a_dropped = false;
  bool clamped = false;  // alpha raised to 1 per the spectral lower bound
};

struct GrowthProfile {
  std::vector<double> s;         // sorted sample radii
  std::vector<double> n;         // max(||(is+A)^{-1}||, ||(-is+A)^{-1}||)
  std::vector<double> M;         // running sup of n from the smallest radius
  double norm_p = 2.0;
  std::optional<GrowthFitInf> fit_inf;
  std::optional<GrowthFitZero> fit_zero;
};

/// Samples n(s) on the plan's clusters; M(s) is the running max.
GrowthProfile resolvent_profile(const OperatorModel& A, const ProfilePlan& plan,
                                const NormSpace& space,
                                const WorkerPool& pool = serial_pool());

/// LS of log(envelope n) on [1, log s, log log s] over the window. The
/// envelope (running max within the window) is fitted rather than raw
/// n(s): normal families produce resonance combs whose pointwise values
/// say nothing about the growth hypothesis.
GrowthFitInf fit_growth_infinity(const GrowthProfile& profile, double window_lo,
                                 double window_hi);

/// Mirror near zero with regressors [1, log(1/s), log log(1/s)]; the
/// envelope is the running max toward s -> 0. alpha is clamped to >= 1.
GrowthFitZero fit_growth_zero(const GrowthProfile& profile, double window_lo,
                              double window_hi);

using FunctionTable = std::vector<std::pair<double, double>>;  // (s, value), s increasing

/// M_log(s) = M(s) (log(1+M(s)) + log(1+s)) pointwise.
FunctionTable m_log(const FunctionTable& M);

struct RightInverseResult {
  double s = 0.0;
  bool below_range = false;
};

/// Largest s with M_log(s) <= t, bisected on the monotone interpolant.
RightInverseResult m_log_right_inverse(const FunctionTable& mlog, double t);

/// Scans M(lambda s)/M(s) >= c lambda^alpha over lambda in {1,2,5,10,1e2,1e3}.
CheckReport positive_increase_check(const FunctionTable& M, double alpha, double c,
                                    double s0);

struct SlowlyVaryingReport {
  CheckReport check;
  double c_emp = 0.0;  // min over pairs of ratio / (s/t)^gamma
  double C_emp = 0.0;  // max over pairs of ratio / (t/s)^gamma
};

SlowlyVaryingReport slowly_varying_bound_check(const std::function<double(double)>& ell,
                                               double gamma,
                                               const std::vector<double>& grid,
                                               const Config& cfg = default_config());

/// omega_0(T) = lim log||T(t)||/t, fitted as the slope of log-norm
/// against t on the tail of a measured curve (t >= t0).
double growth_bound(const std::vector<double>& t_grid, const std::vector<double>& norms,
                    double t0 = 1.0);

// ---------------------------------------------------------------------------
// Decay-rate predictions
// ---------------------------------------------------------------------------

enum class TheoremId {
  ThmInf,             // Banach, growth at infinity, tau-smoothing
  CorHilbertInf,      // Hilbert specialization
  CorInfB0,           // b = 0, rho-form with log loss
  ThmInfZero,         // two-sided growth, A^sigma(1+A)^{-sigma-tau}
  CorInfZeroAB0,      // a = b = 0
  ThmZero,            // zero singularity only
  CorZeroA0,          // a = 0
  LogOnlyBanach,      // resolvent ~ log^b, stretched exponential
  LogOnlyHilbert,
  ThmInfWeighted,     // weighted form: envelope t^{-rho}, log(2+A) weight
  ThmInfZeroWeighted  // weighted form: envelope t^{-rho}, (2pi-ilogA) weight
};

const char* theorem_name(TheoremId id);

struct TheoremParams {
  double alpha = 1.0, a = 0.0;   // zero-side growth
  double beta = 1.0, b = 0.0;    // infinity-side growth
  double sigma = 0.0, tau = 0.0; // smoothing exponents
  double rho = 0.0;              // target polynomial rate where applicable
  double delta = 0.1, epsilon = 0.1;
  double p = 2.0;                // Fourier type
};

struct DecayPrediction {
  TheoremId id = TheoremId::CorHilbertInf;
  TheoremParams params;
  bool stretched = false;
  double poly_exponent = 0.0;  // envelope t^{poly} ...
  double log_exponent = 0.0;   // ... * log(1+t)^{logexp}
  double stretch_rate = 0.0;   // envelope exp(-rate * t^{stretch_power}) * t^{poly}
  double stretch_power = 0.0;
  std::string formula;

  /// C-free envelope shape e(t).
  double envelope(double t) const;
};

/// Validates the selected theorem's hypotheses (HypothesisViolated names
/// the failing inequality) and returns the envelope exponents.
DecayPrediction predict_decay(TheoremId id, const TheoremParams& params,
                              const Config& cfg = default_config());

}  // namespace semidecay
