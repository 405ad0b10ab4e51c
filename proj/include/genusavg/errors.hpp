#ifndef GENUSAVG_ERRORS_HPP
#define GENUSAVG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace genusavg {

// Base class for all computation errors.  `code` is a stable, machine-readable
// identifier used by the CLI error objects; `what()` carries a human message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(msg), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define GENUSAVG_DEFINE_ERROR(Name, code_str)                                 \
    class Name : public Error {                                               \
    public:                                                                    \
        explicit Name(const std::string& msg) : Error(code_str, msg) {}        \
    }

GENUSAVG_DEFINE_ERROR(NotSymmetric, "not_symmetric");
GENUSAVG_DEFINE_ERROR(NotPositiveDefinite, "not_positive_definite");
GENUSAVG_DEFINE_ERROR(NotPrimitive, "not_primitive");
GENUSAVG_DEFINE_ERROR(NotStableAtP, "not_stable_at_p");
GENUSAVG_DEFINE_ERROR(NotStable, "not_stable");
GENUSAVG_DEFINE_ERROR(CoprimalityViolated, "coprimality_violated");
GENUSAVG_DEFINE_ERROR(HypothesisViolated, "hypothesis_violated");
GENUSAVG_DEFINE_ERROR(DepthLimitExceeded, "depth_limit_exceeded");
GENUSAVG_DEFINE_ERROR(BudgetExceeded, "budget_exceeded");
GENUSAVG_DEFINE_ERROR(VerificationFailed, "verification_failed");
GENUSAVG_DEFINE_ERROR(RecursionDepthExceeded, "recursion_depth_exceeded");
GENUSAVG_DEFINE_ERROR(InvalidArgument, "invalid_argument");

#undef GENUSAVG_DEFINE_ERROR

} // namespace genusavg

#endif // GENUSAVG_ERRORS_HPP
