#ifndef HULLSCOPE_ERRORS_HPP
#define HULLSCOPE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hullscope {

// Process exit codes shared between the error taxonomy and the CLI.
enum class ExitCode : int {
  ok = 0,
  config = 2,    // schema / configuration problems
  numeric = 3,   // numerical failure (non-finite values, failed root finds)
  unstable = 4,  // verdicts that did not survive refinement
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

#define HULLSCOPE_DEFINE_ERROR(Name, code)                          \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what) : Error(code, what) {}   \
  }

HULLSCOPE_DEFINE_ERROR(SchemaError, ExitCode::config);
HULLSCOPE_DEFINE_ERROR(UnknownFamilyError, ExitCode::config);
HULLSCOPE_DEFINE_ERROR(DimensionError, ExitCode::config);
HULLSCOPE_DEFINE_ERROR(ConfigError, ExitCode::config);
HULLSCOPE_DEFINE_ERROR(IoError, ExitCode::config);
HULLSCOPE_DEFINE_ERROR(BadDirectionError, ExitCode::config);
HULLSCOPE_DEFINE_ERROR(OutsideDiskError, ExitCode::config);
HULLSCOPE_DEFINE_ERROR(DegenerateGradientError, ExitCode::numeric);
HULLSCOPE_DEFINE_ERROR(RootFindFailureError, ExitCode::numeric);
HULLSCOPE_DEFINE_ERROR(PushTooDeepError, ExitCode::numeric);
HULLSCOPE_DEFINE_ERROR(GradientOrderViolationError, ExitCode::numeric);
HULLSCOPE_DEFINE_ERROR(VanishingDenominatorError, ExitCode::numeric);
HULLSCOPE_DEFINE_ERROR(NonFiniteError, ExitCode::numeric);
HULLSCOPE_DEFINE_ERROR(InconclusiveError, ExitCode::unstable);

#undef HULLSCOPE_DEFINE_ERROR

}  // namespace hullscope

#endif  // HULLSCOPE_ERRORS_HPP
