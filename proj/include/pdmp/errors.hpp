#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pdmp {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A state outside the open set E, or a coordinate vector of the wrong size.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A time beyond the exit time t*(xi) of the state it is attached to.
class HorizonError : public Error {
 public:
  using Error::Error;
};

// Invalid parameters or an incomplete model description.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A randomized sampler gave up (e.g. rejection sampler out of attempts).
class SamplingError : public Error {
 public:
  using Error::Error;
};

// An estimator (or Monte Carlo oracle) whose defining ratio has a zero
// denominator on the data it was given.
class UndefinedEstimatorError : public Error {
 public:
  using Error::Error;
};

// Quadrature did not reach the requested tolerance.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double requested, double achieved)
      : Error(what + " (requested " + std::to_string(requested) +
              ", achieved " + std::to_string(achieved) + ")"),
        requested_(requested),
        achieved_(achieved) {}

  double requested_tolerance() const noexcept { return requested_; }
  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double requested_;
  double achieved_;
};

// Malformed input file. Carries the file name and 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& msg)
      : Error(file + ":" + std::to_string(line) + ": " + msg),
        file_(file),
        line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

}  // namespace pdmp
