#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace icf {

// Base for every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t lhs, std::size_t rhs)
      : Error("dimension mismatch: " + std::to_string(lhs) + " vs " + std::to_string(rhs)),
        lhs_(lhs), rhs_(rhs) {}
  std::size_t lhs() const noexcept { return lhs_; }
  std::size_t rhs() const noexcept { return rhs_; }

 private:
  std::size_t lhs_, rhs_;
};

class SingularMatrix : public Error {
 public:
  explicit SingularMatrix(std::size_t pivot_index)
      : Error("singular matrix at pivot " + std::to_string(pivot_index)), pivot_(pivot_index) {}
  std::size_t pivot_index() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

// NaN or Inf reached a float computation.
class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

// Input data violates a documented precondition (duplicate nodes, wrong shapes, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The tail bracket at `level` of a continued fraction is not invertible.
class TailSingular : public Error {
 public:
  explicit TailSingular(std::size_t level)
      : Error("tail singular at level " + std::to_string(level)), level_(level) {}
  std::size_t level() const noexcept { return level_; }

 private:
  std::size_t level_;
};

// A level function could not be formed during construction.
class LevelSingular : public Error {
 public:
  LevelSingular(std::size_t level, std::string where)
      : Error("level " + std::to_string(level) + " singular at " + where),
        level_(level), where_(std::move(where)) {}
  std::size_t level() const noexcept { return level_; }
  const std::string& where() const noexcept { return where_; }

 private:
  std::size_t level_;
  std::string where_;
};

class BreakdownError : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace icf
