#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace immersion {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// geometry-core

/// The tangent vectors are (numerically) dependent: rank of [xu | xv] < 2.
class DegenerateMetric : public Error {
public:
    using Error::Error;
};

/// A frame vector is not normal to the tangent plane of the jet it is paired with.
class FrameMismatch : public Error {
public:
    using Error::Error;
};

/// The operation only holds in conformal parameters and the point is not conformal.
class NotConformal : public Error {
public:
    using Error::Error;
};

class MissingDerivatives : public Error {
public:
    using Error::Error;
};

// expressions

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& what)
        : Error(what), offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

class UnknownIdentifier : public Error {
public:
    UnknownIdentifier(std::size_t offset, std::string name)
        : Error("unknown identifier '" + name + "' at offset " + std::to_string(offset)),
          offset_(offset), name_(std::move(name)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& name() const noexcept { return name_; }

private:
    std::size_t offset_;
    std::string name_;
};

/// Evaluation left the real domain of a node (log of non-positive value, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// catalogue

class UnknownSurface : public Error {
public:
    using Error::Error;
};

class BadParameter : public Error {
public:
    using Error::Error;
};

class StencilOutOfDomain : public Error {
public:
    using Error::Error;
};

// frames

/// Any failure to build an orthonormal normal frame.
class FrameError : public Error {
public:
    using Error::Error;
};

/// |N*_k|^2 fell below the norm threshold: the anchor is too close to the tangent plane.
class NormBelowThreshold : public FrameError {
public:
    using FrameError::FrameError;
};

/// |Ñ_1·Ñ_2| exceeded the angle threshold.
class AngleThreshold : public FrameError {
public:
    using FrameError::FrameError;
};

class InvalidRecipe : public FrameError {
public:
    using FrameError::FrameError;
};

// estimates

class EmptyGrid : public Error {
public:
    using Error::Error;
};

class DisconnectedMask : public Error {
public:
    using Error::Error;
};

// pde solver

class BadSpacing : public Error {
public:
    using Error::Error;
};

class LinearSolveDiverged : public Error {
public:
    using Error::Error;
};

/// A frame threshold was violated while iterating; carries the outer iteration index.
class FrameFailure : public FrameError {
public:
    FrameFailure(int iteration, const std::string& what)
        : FrameError("iteration " + std::to_string(iteration) + ": " + what), iteration_(iteration) {}

    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

} // namespace immersion
