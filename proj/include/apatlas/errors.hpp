#pragma once

#include <stdexcept>
#include <string>

namespace apatlas {

/// Input violates a documented precondition (bad parameter range, point
/// outside an operation's domain, ...).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// No sign change found while scanning for a root bracket.
class BracketError : public std::runtime_error {
public:
    explicit BracketError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative solver or quadrature failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Two angular sectors that must be disjoint intersect.
class OverlapError : public std::invalid_argument {
public:
    explicit OverlapError(const std::string& what) : std::invalid_argument(what) {}
};

/// A least-squares fit came back with unacceptable quality.
class FitError : public std::runtime_error {
public:
    explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

/// An ODE integration had to stop before covering the requested interval.
class StepFailure : public std::runtime_error {
public:
    explicit StepFailure(const std::string& what) : std::runtime_error(what) {}
};

} // namespace apatlas
