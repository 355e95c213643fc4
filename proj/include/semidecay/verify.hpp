#pragma once

#include <string>
#include <vector>

#include "semidecay/profiles.hpp"
#include "semidecay/semigroup.hpp"

namespace semidecay {

enum class FamilyKind { DiagInf, DiagZero, DiagTwoSided, JordanUnboundedInf, LogOnly };

const char* family_name(FamilyKind kind);

/// Synthetic operator families with prescribed resolvent growth. All of
/// them have Re sigma(A) > 0 and the imaginary parts march off to
/// infinity (or cluster at zero), so the resolvent peaks at s = k (or
/// s = 1/k) realize the target envelope.
struct FamilySpec {
  FamilyKind kind = FamilyKind::DiagInf;
  double alpha = 1.0, a = 0.0;  // zero-side parameters
  double beta = 1.0, b = 0.0;   // infinity-side parameters
  double g = 1.0;               // Jordan coupling
  int N = 256;
  std::uint64_t seed = 0;       // reserved for jittered variants; reports echo it
};

OperatorModel build_family(const FamilySpec& spec);

/// Imaginary-axis radii where the family's resolvent peaks (s = k or 1/k);
/// used to sample the envelope rather than the comb between peaks.
std::vector<double> family_resonances(const FamilySpec& spec);

/// Profiles the built family on a resonance-aware plan, fits both sides,
/// and checks the fits against the nominal parameters
/// (|beta - beta_fit| <= 0.05, |b - b_fit| <= 0.3, same near zero).
/// Throws CalibrationFailed.
GrowthProfile family_profile_calibration(const FamilySpec& spec,
                                         const Config& cfg = default_config(),
                                         const WorkerPool& pool = serial_pool());

struct TGridSpec {
  double t_min = 1.0;
  double t_max = 1e4;
  int per_decade = 25;
};

struct VerifyTolerances {
  double fit_tol_poly = 0.15;
  double bound_margin = 0.25;
  double stability_max_growth = 1.2;  // allowed tail-ratio growth per decade
  double stretch_slope_factor = 0.9;  // stretched fits must reach this rate share
};

struct ExperimentSpec {
  std::string name;
  FamilySpec family;
  TheoremId theorem = TheoremId::CorHilbertInf;
  TheoremParams params;
  TGridSpec t_grid;
  double p = 2.0;
  VerifyTolerances tol;
};

enum class Verdict { PASS, FAIL, INCONCLUSIVE };

const char* verdict_name(Verdict v);

enum class FitModel { Poly, PolyLog, Stretched };

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  std::size_t n_points = 0;
};

/// poly: slope of log v vs log t; poly_log(q): same after dividing out
/// log(1+t)^q; stretched(b): slope of log v vs t^{1/(b+1)}.
FitResult fit_exponents(const DecayCurve& curve, FitModel model, double fixed_param,
                        double t0, double value_floor = default_config().value_floor);

struct DecayReport {
  ExperimentSpec spec;
  DecayPrediction prediction;
  DecayCurve curve;
  double fitted_C = 0.0;
  std::vector<double> bound_ratio;     // measured / envelope shape, per kept t
  double max_ratio_tail = 0.0;         // max ratio over the last kept decade
  double ratio_tail_growth = 1.0;      // fitted ratio growth factor per decade
  double fitted_poly_exponent = 0.0;   // slope in the prediction's model
  double fit_stderr = 0.0;
  bool grid_shortened = false;
  Verdict verdict = Verdict::INCONCLUSIVE;
  std::vector<std::string> reasons;
};

DecayReport run_experiment(const ExperimentSpec& spec,
                           const Config& cfg = default_config(),
                           const WorkerPool& pool = serial_pool());

/// The shipped acceptance matrix.
std::vector<ExperimentSpec> paper_suite();

}  // namespace semidecay
