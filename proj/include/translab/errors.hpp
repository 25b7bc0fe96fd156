#pragma once

#include <stdexcept>
#include <string>

namespace translab {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Two sampled functions that must share a grid do not.
class GridMismatchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The modular never drops to 1 before the overflow guard.
class NotInClassError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A named precondition of an estimate is violated.
class PreconditionError : public std::invalid_argument {
public:
    PreconditionError(const std::string& condition, const std::string& detail)
        : std::invalid_argument(condition + ": " + detail), condition_(condition) {}
    const std::string& condition() const noexcept { return condition_; }

private:
    std::string condition_;
};

// Resolution too coarse for the requested operation.
class ResolutionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace translab
