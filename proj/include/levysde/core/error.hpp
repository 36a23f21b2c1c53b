#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace levysde {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the operation's input domain (negative horizon, bad dimension, ...).
class InputDomainError : public Error {
public:
    using Error::Error;
};

/// Rejection sampling exhausted its attempt cap.
class SamplingFailure : public Error {
public:
    using Error::Error;
};

/// kappa vanishes (or goes negative) where it must be strictly positive.
class ModulusInvalidError : public Error {
public:
    using Error::Error;
};

/// The modulus lacks the affine domination constants (a, b).
class ModulusIncompleteError : public Error {
public:
    using Error::Error;
};

/// Argument outside Dom(G^-1).
class OutOfDomainError : public Error {
public:
    using Error::Error;
};

/// No delta satisfies the integral condition for the requested epsilon.
class NoCertificateError : public Error {
public:
    using Error::Error;
};

/// Two objects that must share a noise bundle / grid do not.
class ContractError : public Error {
public:
    using Error::Error;
};

/// Deterministic replay produced different trajectories.
class ReplayBrokenError : public Error {
public:
    using Error::Error;
};

class CoefficientEvaluationError : public Error {
public:
    CoefficientEvaluationError(const std::string& what, double t, std::string state)
        : Error(what + " at t=" + std::to_string(t) + ", y=" + state), t_(t), state_(std::move(state)) {}

    double time() const noexcept { return t_; }
    const std::string& state() const noexcept { return state_; }

private:
    double t_;
    std::string state_;
};

/// A Picard iterate produced a non-finite state.
class DivergenceError : public Error {
public:
    DivergenceError(std::size_t path, std::size_t node, std::size_t iterate)
        : Error("non-finite state at path " + std::to_string(path) + ", node " + std::to_string(node) +
                ", iterate " + std::to_string(iterate)),
          path_(path), node_(node), iterate_(iterate) {}

    std::size_t path() const noexcept { return path_; }
    std::size_t node() const noexcept { return node_; }
    std::size_t iterate() const noexcept { return iterate_; }

private:
    std::size_t path_;
    std::size_t node_;
    std::size_t iterate_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace levysde
