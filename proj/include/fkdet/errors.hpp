#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fkdet {

/// Thrown for malformed arguments: arity mismatch, shape mismatch, bad group.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Syntax error in a group, ring-expression or complex-file text.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Numerical failure inside a spectral routine.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotPositiveDefinite : public NumericalError {
 public:
  enum class Kind { Singular, Indefinite };
  NotPositiveDefinite(Kind kind, std::size_t pivot)
      : NumericalError(std::string("not positive definite (") +
                       (kind == Kind::Singular ? "singular" : "indefinite") + ", pivot " +
                       std::to_string(pivot) + ")"),
        kind_(kind),
        pivot_(pivot) {}
  Kind kind() const noexcept { return kind_; }
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  Kind kind_;
  std::size_t pivot_;
};

}  // namespace fkdet
