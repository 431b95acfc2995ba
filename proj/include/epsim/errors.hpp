#pragma once

#include <stdexcept>
#include <string>

namespace epsim {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Field evaluation inside the exceptional-point exclusion disk.
class DivergentFieldError : public Error {
public:
    explicit DivergentFieldError(const std::string& msg) : Error(msg) {}
};

// Metric construction refused near an exceptional point.
class IllConditionedMetricError : public Error {
public:
    explicit IllConditionedMetricError(const std::string& msg) : Error(msg) {}
};

// QR iteration exceeded its iteration cap.
class NoConvergenceError : public Error {
public:
    explicit NoConvergenceError(const std::string& msg) : Error(msg) {}
};

// Eigenvector matching across the branch cut fell below the overlap threshold.
class AmbiguousPairingError : public Error {
public:
    explicit AmbiguousPairingError(const std::string& msg) : Error(msg) {}
};

// State norm blow-up during time evolution.
class StepUnstableError : public Error {
public:
    explicit StepUnstableError(const std::string& msg) : Error(msg) {}
};

// Permutation cycle input errors (overlapping entries, out-of-range points).
class CycleError : public Error {
public:
    explicit CycleError(const std::string& msg) : Error(msg) {}
};

class DegreeMismatchError : public Error {
public:
    explicit DegreeMismatchError(const std::string& msg) : Error(msg) {}
};

// Group closure exceeded the configured element cap.
class SizeLimitError : public Error {
public:
    explicit SizeLimitError(const std::string& msg) : Error(msg) {}
};

// Metric has a non-positive eigenvalue; no dilation exists.
class MetricNotDilatableError : public Error {
public:
    explicit MetricNotDilatableError(const std::string& msg) : Error(msg) {}
};

// D = sqrt(eta - I) is numerically singular; h2 cannot be recovered.
class PartialDilationError : public Error {
public:
    explicit PartialDilationError(const std::string& msg) : Error(msg) {}
};

// Configuration file / run configuration problems.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace epsim
