#pragma once

#include <stdexcept>
#include <string>

namespace origami {

// Base of every domain error raised by the library. Each axiom/solver
// precondition failure has its own type so callers can catch precisely;
// name() is stable text used by the CLI when rendering failures.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), name_(std::move(name)), raw_(what) {}
    const std::string& name() const noexcept { return name_; }
    const std::string& raw() const noexcept { return raw_; }

private:
    std::string name_;
    std::string raw_;
};

#define ORIGAMI_DEFINE_ERROR(NAME)                                    \
    class NAME : public Error {                                       \
    public:                                                           \
        explicit NAME(const std::string& what = "") : Error(#NAME, what) {} \
    }

// euclid
ORIGAMI_DEFINE_ERROR(CoincidentPoints);
ORIGAMI_DEFINE_ERROR(CoincidentLines);
ORIGAMI_DEFINE_ERROR(ParallelLines);
ORIGAMI_DEFINE_ERROR(DegenerateParabola);

// cyclic
ORIGAMI_DEFINE_ERROR(ConditionViolated);
ORIGAMI_DEFINE_ERROR(DegenerateFlat);
ORIGAMI_DEFINE_ERROR(SideMismatch);
ORIGAMI_DEFINE_ERROR(NotRegular);
ORIGAMI_DEFINE_ERROR(NotCentral);
ORIGAMI_DEFINE_ERROR(TooFewSides);
ORIGAMI_DEFINE_ERROR(RadiusNotDecreasing);
ORIGAMI_DEFINE_ERROR(ApexAngleOverflow);
ORIGAMI_DEFINE_ERROR(ChordTooLong);

// algebra
ORIGAMI_DEFINE_ERROR(ZeroPolynomial);
ORIGAMI_DEFINE_ERROR(NonIntegerCoefficients);
ORIGAMI_DEFINE_ERROR(BadPrime);

// script
ORIGAMI_DEFINE_ERROR(UndefinedIdentifier);
ORIGAMI_DEFINE_ERROR(ArityMismatch);
ORIGAMI_DEFINE_ERROR(TypeMismatch);
ORIGAMI_DEFINE_ERROR(IndexOutOfRange);
ORIGAMI_DEFINE_ERROR(AssertionFailed);
ORIGAMI_DEFINE_ERROR(TraceCorrupt);

#undef ORIGAMI_DEFINE_ERROR

// A library error surfacing during script execution, annotated with the
// statement's line. name() keeps the inner error's name so callers can still
// tell an IndexOutOfRange from an AssertionFailed.
class ScriptRuntimeError : public Error {
public:
    ScriptRuntimeError(const std::string& inner_name, int line, const std::string& what)
        : Error(inner_name, "line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

// Script parse failures carry a source position. Kept apart from Error's
// runtime family: the CLI maps SyntaxError to exit 1, everything else to 2.
class SyntaxError : public std::runtime_error {
public:
    SyntaxError(int line, int column, const std::string& what)
        : std::runtime_error("SyntaxError at " + std::to_string(line) + ":" +
                             std::to_string(column) + ": " + what),
          line_(line), column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

} // namespace origami
