#pragma once

#include <stdexcept>
#include <string>

namespace mfvdm {

/// Broad class of a failure; the CLI maps these onto exit codes.
enum class ErrorKind { Config, Io, Numerical };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Bad parameter value, empty input, bad geometry, or an unsupported manifold.
class ParameterError : public Error {
public:
    explicit ParameterError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

/// Numerical breakdown: zero degree, degenerate alignment, non-convergence, ...
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class ZeroDegreeError : public NumericalError {
public:
    explicit ZeroDegreeError(std::size_t node)
        : NumericalError("node " + std::to_string(node) + " has zero degree"), node_(node) {}
    std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

class DegenerateEmbeddingError : public NumericalError {
public:
    explicit DegenerateEmbeddingError(std::size_t node)
        : NumericalError("embedding of node " + std::to_string(node) + " has zero norm"), node_(node) {}
    std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, double worst_residual)
        : NumericalError(what), worst_residual_(worst_residual) {}
    double worst_residual() const noexcept { return worst_residual_; }

private:
    double worst_residual_;
};

}  // namespace mfvdm
