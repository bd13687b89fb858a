#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace emergence {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A caller violated a documented precondition (bad argument, empty list, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// -- matrix / distribution validation ---------------------------------------

class NonSquare : public Error {
public:
    using Error::Error;
};

class NonFiniteEntry : public Error {
public:
    using Error::Error;
};

class NegativeEntry : public Error {
public:
    using Error::Error;
};

class RowSumOutOfTolerance : public Error {
public:
    RowSumOutOfTolerance(std::size_t row, double sum)
        : Error("row " + std::to_string(row) + " sums to " + std::to_string(sum) +
                ", outside the stochasticity tolerance"),
          row(row), sum(sum) {}

    std::size_t row;
    double sum;
};

class InvalidDistribution : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

class AbsoluteContinuityViolation : public Error {
public:
    explicit AbsoluteContinuityViolation(std::size_t index)
        : Error("p has mass at index " + std::to_string(index) + " where q is zero"),
          index(index) {}

    std::size_t index;
};

// -- measures ----------------------------------------------------------------

class StateOutsideSupport : public Error {
public:
    explicit StateOutsideSupport(std::size_t state)
        : Error("state " + std::to_string(state) +
                " has zero intervention probability"),
          state(state) {}

    std::size_t state;
};

// -- model space -------------------------------------------------------------

class InvalidPartition : public Error {
public:
    using Error::Error;
};

class InvalidChoice : public Error {
public:
    using Error::Error;
};

class EmptyEndogenous : public Error {
public:
    EmptyEndogenous() : Error("a model choice needs at least one endogenous state") {}
};

class MassEscapesEndogenous : public Error {
public:
    MassEscapesEndogenous(std::size_t row, double leaked)
        : Error("endogenous state " + std::to_string(row) + " transitions into the "
                "exogenous set with probability " + std::to_string(leaked)),
          row(row), leaked(leaked) {}

    std::size_t row;
    double leaked;
};

// -- gate networks -----------------------------------------------------------

class FanInStateMissing : public Error {
public:
    using Error::Error;
};

class TooManyElements : public Error {
public:
    using Error::Error;
};

// -- search ------------------------------------------------------------------

class RefusedAboveThreshold : public Error {
public:
    explicit RefusedAboveThreshold(std::uint64_t count)
        : Error("search space of " + std::to_string(count) +
                " choices exceeds the configured budget"),
          count(count) {}

    std::uint64_t count;
};

// -- coding ------------------------------------------------------------------

class IndivisibleMessage : public Error {
public:
    using Error::Error;
};

class AlphabetNotPowerOfTwo : public Error {
public:
    using Error::Error;
};

// -- i/o ---------------------------------------------------------------------

class ParseError : public Error {
public:
    using Error::Error;
};

class UnknownFixture : public Error {
public:
    explicit UnknownFixture(const std::string& name)
        : Error("unknown fixture '" + name + "'") {}
};

}  // namespace emergence
