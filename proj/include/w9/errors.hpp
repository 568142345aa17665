#pragma once

#include <stdexcept>
#include <string>

namespace w9 {

/// Base of every error raised by the library. `numerical()` separates
/// failures of a computation from rejected inputs; the CLI maps the two
/// onto different exit codes.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what, bool numerical = false)
        : std::runtime_error(what), numerical_(numerical) {}
    bool numerical() const noexcept { return numerical_; }

private:
    bool numerical_;
};

// Input validation.
struct DimensionError : Error { explicit DimensionError(const std::string& w) : Error(w) {} };
struct ParameterError : Error { explicit ParameterError(const std::string& w) : Error(w) {} };
struct LayoutError : Error { explicit LayoutError(const std::string& w) : Error(w) {} };
struct DomainError : Error { explicit DomainError(const std::string& w) : Error(w) {} };
struct PoleError : Error { explicit PoleError(const std::string& w) : Error(w) {} };
struct PathError : Error { explicit PathError(const std::string& w) : Error(w) {} };
struct ContractError : Error { explicit ContractError(const std::string& w) : Error(w) {} };

// Numerical failures.
struct SingularityError : Error { explicit SingularityError(const std::string& w) : Error(w, true) {} };
struct TruncationError : Error { explicit TruncationError(const std::string& w) : Error(w, true) {} };
struct AccuracyError : Error { explicit AccuracyError(const std::string& w) : Error(w, true) {} };
struct TrackingError : Error { explicit TrackingError(const std::string& w) : Error(w, true) {} };
struct DegeneracyError : Error { explicit DegeneracyError(const std::string& w) : Error(w, true) {} };
struct ShapeMismatchError : Error { explicit ShapeMismatchError(const std::string& w) : Error(w, true) {} };
struct BracketError : Error { explicit BracketError(const std::string& w) : Error(w, true) {} };

}  // namespace w9
