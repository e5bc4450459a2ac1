#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hyperlap {

enum class ErrorKind {
    EmptyEdge,
    SingletonEdge,
    NonpositiveWeight,
    IndexOutOfRange,
    NoEdges,
    NotAnOrdinaryGraph,
    NonConvergence,
    IncompatibleForcing,
    GridMismatch,
    Parse,
    InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so front ends can map it
// to an exit code without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Solver ran out of iterations; `residual` is the best certificate reached.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& message, double residual)
        : Error(ErrorKind::NonConvergence, message), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// Forcing fails the periodic compatibility condition; carries the
// per-component residuals so callers can still report them.
class IncompatibleForcing : public Error {
public:
    IncompatibleForcing(const std::string& message, std::vector<double> residuals)
        : Error(ErrorKind::IncompatibleForcing, message), residuals_(std::move(residuals)) {}

    const std::vector<double>& residuals() const noexcept { return residuals_; }

private:
    std::vector<double> residuals_;
};

}  // namespace hyperlap
