#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace yamabe3h {

// Base of every error raised by the library. Callers that only care about
// "did it work" can catch this; the CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain (non-positive radius, radius outside
// the configured guard band, length mismatch).
class DomainError : public Error {
 public:
  using Error::Error;
};

// An operation that needs a real tetrahedron (Q > 0) received a virtual one.
class DegenerateTetraError : public Error {
 public:
  using Error::Error;
};

// Floating point trouble: cosine far outside [-1, 1], negative cofactor
// product, non-finite state, step-size underflow.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Q <= 0 but the two smallest radii coincide within the guard band, so the
// virtual index is not decidable in floating point.
class NearBoundaryError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public NumericError {
 public:
  QuadratureError(const std::string& what, double achieved)
      : NumericError(what), achieved_error(achieved) {}
  double achieved_error;
};

class ParseError : public Error {
 public:
  enum class Kind { Syntax, Schema, IndexOutOfRange, DuplicateTetrahedron };

  // Syntax errors carry a 1-based line and column.
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        kind(Kind::Syntax),
        line(line),
        column(column) {}
  ParseError(Kind kind, const std::string& what)
      : Error(what), kind(kind), line(0), column(0) {}

  Kind kind;
  std::size_t line;
  std::size_t column;
};

// Requested a quantity the library refuses to extend (Hessian at a packing
// with virtual tetrahedra).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// A degree hypothesis (d_max <= 22, d_min >= 23) does not hold.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

class NoSolutionError : public Error {
 public:
  using Error::Error;
};

}  // namespace yamabe3h
