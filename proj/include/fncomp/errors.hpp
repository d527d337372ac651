#ifndef FNCOMP_ERRORS_HPP
#define FNCOMP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fncomp {

// Error taxonomy. Exit-code mapping (see cli): validation/hypothesis -> 1,
// budget/size -> 2.
enum class ErrorKind {
    Schema,            // problem file missing field / unknown symbol
    Normalization,     // pmf sum off by > 1e-9
    PartialFunction,   // f missing a triple
    Role,              // overlapping/unknown roles
    InconsistentF,     // f multivalued on a (target, given) support cell
    InconsistentFTilde,// membership not an independent-set family
    MembershipViolation,
    Mask,              // W mask not independent in the induced graph
    Hypothesis,        // theorem preconditions not met
    EquivalenceViolation, // two-sided law checkers disagree (internal bug trap)
    Size,              // vertex cap / grid cap exceeded
    Budget,            // enumeration budget exceeded
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

    bool is_budget_class() const {
        return kind_ == ErrorKind::Size || kind_ == ErrorKind::Budget;
    }

  private:
    ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::Schema: return "SchemaError";
        case ErrorKind::Normalization: return "NormalizationError";
        case ErrorKind::PartialFunction: return "PartialFunctionError";
        case ErrorKind::Role: return "RoleError";
        case ErrorKind::InconsistentF: return "InconsistentF";
        case ErrorKind::InconsistentFTilde: return "InconsistentFTilde";
        case ErrorKind::MembershipViolation: return "MembershipViolation";
        case ErrorKind::Mask: return "MaskError";
        case ErrorKind::Hypothesis: return "HypothesisError";
        case ErrorKind::EquivalenceViolation: return "EquivalenceViolation";
        case ErrorKind::Size: return "SizeError";
        case ErrorKind::Budget: return "BudgetExceeded";
    }
    return "Error";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
    throw Error(kind, std::string(error_kind_name(kind)) + ": " + msg);
}

} // namespace fncomp

#endif
