#pragma once

#include <stdexcept>
#include <string>

namespace semidecay {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define SEMIDECAY_DEFINE_ERROR(Name)                                  \
  struct Name : Error {                                               \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

SEMIDECAY_DEFINE_ERROR(SingularShift);
SEMIDECAY_DEFINE_ERROR(ConvergenceFailure);
SEMIDECAY_DEFINE_ERROR(SpectrumOutsideSector);
SEMIDECAY_DEFINE_ERROR(DomainError);
SEMIDECAY_DEFINE_ERROR(QuadratureNonConvergence);
SEMIDECAY_DEFINE_ERROR(ParameterDomain);
SEMIDECAY_DEFINE_ERROR(DivisionByZero);
SEMIDECAY_DEFINE_ERROR(EvaluationFailure);
SEMIDECAY_DEFINE_ERROR(ContourTooTight);
SEMIDECAY_DEFINE_ERROR(TailBoundExceeded);
SEMIDECAY_DEFINE_ERROR(IllConditionedEigenbasis);
SEMIDECAY_DEFINE_ERROR(BranchCutIntersection);
SEMIDECAY_DEFINE_ERROR(NotInjective);
SEMIDECAY_DEFINE_ERROR(OverflowRisk);
SEMIDECAY_DEFINE_ERROR(IntegrabilityRejected);
SEMIDECAY_DEFINE_ERROR(InsufficientSamples);
SEMIDECAY_DEFINE_ERROR(RangeExceeded);
SEMIDECAY_DEFINE_ERROR(HypothesisViolated);
SEMIDECAY_DEFINE_ERROR(CalibrationFailed);
SEMIDECAY_DEFINE_ERROR(ConfigError);

#undef SEMIDECAY_DEFINE_ERROR

}  // namespace semidecay
