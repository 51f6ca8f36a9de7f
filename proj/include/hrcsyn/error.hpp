#pragma once

#include <stdexcept>
#include <string>

namespace hrcsyn {

/// Base of every error raised by the library. `kind()` is a stable tag used
/// by the CLI and by per-entry diagnostics in the synergy matrix.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define HRCSYN_DEFINE_ERROR(Name)                                         \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& what) : Error(#Name, what) {}        \
  }

HRCSYN_DEFINE_ERROR(InvalidInterval);
HRCSYN_DEFINE_ERROR(ZeroDurationTask);
HRCSYN_DEFINE_ERROR(MissingDuration);
HRCSYN_DEFINE_ERROR(InvalidSchedule);
HRCSYN_DEFINE_ERROR(EmptySampleSet);
HRCSYN_DEFINE_ERROR(NonPositiveSample);
HRCSYN_DEFINE_ERROR(NoSamples);
HRCSYN_DEFINE_ERROR(EmptyProblem);
HRCSYN_DEFINE_ERROR(InvalidProgram);
HRCSYN_DEFINE_ERROR(InvalidConfig);
HRCSYN_DEFINE_ERROR(InfeasibleDomain);
HRCSYN_DEFINE_ERROR(NonConvergence);
HRCSYN_DEFINE_ERROR(SchemaViolation);
HRCSYN_DEFINE_ERROR(IoFailure);
HRCSYN_DEFINE_ERROR(UnknownCollection);
HRCSYN_DEFINE_ERROR(UnknownPlan);
HRCSYN_DEFINE_ERROR(EmptyStore);
HRCSYN_DEFINE_ERROR(MissingEstimates);

#undef HRCSYN_DEFINE_ERROR

}  // namespace hrcsyn
