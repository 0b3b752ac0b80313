#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace weylhelp {

enum class ErrorKind {
  domain,
  degenerate_weight,
  tolerance_miss,
  overflow,
  near_pole,
  range,
  scan_range,
  degenerate_trial,
  config,
  consistency,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Requested accuracy not reached. `achieved` is the best error estimate at the
/// point of giving up; `position` is how far the computation got.
class ToleranceMiss : public Error {
 public:
  ToleranceMiss(const std::string& what, double achieved, double position = 0.0)
      : Error(ErrorKind::tolerance_miss, what), achieved_(achieved), position_(position) {}
  double achieved() const noexcept { return achieved_; }
  double position() const noexcept { return position_; }

 private:
  double achieved_;
  double position_;
};

class OverflowError : public Error {
 public:
  OverflowError(const std::string& what, double position)
      : Error(ErrorKind::overflow, what), position_(position) {}
  double position() const noexcept { return position_; }

 private:
  double position_;
};

/// λ sits (numerically) on an eigenvalue of a one-sided problem, so the
/// defining ratio of an m-function has a vanishing denominator.
class NearPole : public Error {
 public:
  NearPole(const std::string& what, std::complex<double> lambda, double denominator)
      : Error(ErrorKind::near_pole, what), lambda_(lambda), denominator_(denominator) {}
  std::complex<double> lambda() const noexcept { return lambda_; }
  double denominator() const noexcept { return denominator_; }

 private:
  std::complex<double> lambda_;
  double denominator_;
};

}  // namespace weylhelp
