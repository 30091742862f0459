#pragma once

#include <stdexcept>
#include <string>

namespace yamabe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DivergentIntegral : public Error {
public:
    enum class Kind { Logarithmic, Power };

    DivergentIntegral(Kind kind, const std::string& what)
        : Error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }
    bool logarithmic() const noexcept { return kind_ == Kind::Logarithmic; }

private:
    Kind kind_;
};

class ParityMismatch : public Error {
public:
    using Error::Error;
};

/// Raised when two scaled values with different symbolic factors are added.
class IncompatibleBasis : public Error {
public:
    using Error::Error;
};

/// Curvature data violating one of the algebraic identities at the base point.
/// `label()` names the first identity that failed.
class SymmetryViolation : public Error {
public:
    explicit SymmetryViolation(std::string label)
        : Error("symmetry violation: " + label), label_(std::move(label)) {}

    const std::string& label() const noexcept { return label_; }

private:
    std::string label_;
};

class UnsupportedOrder : public Error {
public:
    using Error::Error;
};

class CancellationFailure : public Error {
public:
    using Error::Error;
};

class PreconditionViolation : public Error {
public:
    using Error::Error;
};

class ToleranceNotMet : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace yamabe
