#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace endslab {

enum class ErrorKind {
  invalid_parameter,
  budget_exceeded,
  no_axis,
  not_geodesic,
  truncation_too_small,
  infeasible,
  trivial_partition,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidParameter : public Error {
 public:
  explicit InvalidParameter(const std::string& what)
      : Error(ErrorKind::invalid_parameter, what) {}
};

// Thrown when an exploration would hold more elements than allowed.
// radius_reached is the last radius whose layer was fully materialized.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(int radius_reached, std::size_t budget)
      : Error(ErrorKind::budget_exceeded,
              "node budget of " + std::to_string(budget) +
                  " exceeded after completing radius " +
                  std::to_string(radius_reached)),
        radius_reached_(radius_reached),
        budget_(budget) {}

  int radius_reached() const noexcept { return radius_reached_; }
  std::size_t budget() const noexcept { return budget_; }

 private:
  int radius_reached_;
  std::size_t budget_;
};

class NoAxis : public Error {
 public:
  explicit NoAxis(const std::string& what) : Error(ErrorKind::no_axis, what) {}
};

class NotGeodesic : public Error {
 public:
  explicit NotGeodesic(const std::string& what)
      : Error(ErrorKind::not_geodesic, what) {}
};

class TruncationTooSmall : public Error {
 public:
  explicit TruncationTooSmall(const std::string& what)
      : Error(ErrorKind::truncation_too_small, what) {}
};

class Infeasible : public Error {
 public:
  explicit Infeasible(const std::string& what)
      : Error(ErrorKind::infeasible, what) {}
};

class TrivialPartition : public Error {
 public:
  explicit TrivialPartition(const std::string& what)
      : Error(ErrorKind::trivial_partition, what) {}
};

}  // namespace endslab
