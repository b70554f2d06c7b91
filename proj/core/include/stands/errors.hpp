#pragma once

#include <stdexcept>
#include <string>

namespace stands {

/// Scenario text that is syntactically broken: malformed lines, unknown or
/// duplicate keys, values that do not parse. Maps to CLI exit code 2.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Well-formed input whose values violate a domain invariant. Maps to CLI
/// exit code 3.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Two attack entries target the same sensor in the same run.
class ScheduleConflict : public ValidationError {
public:
    explicit ScheduleConflict(const std::string& msg) : ValidationError(msg) {}
};

/// A calibration baseline with fewer than two reports.
class InsufficientBaseline : public ValidationError {
public:
    explicit InsufficientBaseline(const std::string& msg) : ValidationError(msg) {}
};

/// Consecutive-frame operation fed non-consecutive run indices.
class FrameGap : public std::runtime_error {
public:
    explicit FrameGap(const std::string& msg) : std::runtime_error(msg) {}
};

/// Quantile bisection failed to bracket; signals an implementation bug, not
/// bad input.
class NonConvergence : public std::runtime_error {
public:
    explicit NonConvergence(const std::string& msg) : std::runtime_error(msg) {}
};

/// Sweep request over a parameter the harness does not know.
class UnknownParameter : public std::runtime_error {
public:
    explicit UnknownParameter(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace stands
