#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace heatbath {

/// Base class for every failure raised by the library. A stage tag may be
/// attached while the error travels through a multi-stage pipeline.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;

  const std::string& stage() const noexcept { return stage_; }
  void set_stage(std::string stage) {
    if (stage_.empty()) stage_ = std::move(stage);
  }

 private:
  std::string stage_;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class DegreeLimitError : public Error {
 public:
  using Error::Error;
};

class PoleEvaluationError : public Error {
 public:
  PoleEvaluationError(const std::string& what, std::complex<double> at)
      : Error(what), point_(at) {}
  std::complex<double> point() const noexcept { return point_; }

 private:
  std::complex<double> point_;
};

class NotSpectralDensityError : public Error {
 public:
  using Error::Error;
};

class InvalidLoadError : public Error {
 public:
  using Error::Error;
};

class NotLosslessError : public Error {
 public:
  using Error::Error;
};

class NotInnerError : public Error {
 public:
  using Error::Error;
};

class ImproperResultError : public Error {
 public:
  using Error::Error;
};

class NegativeResidueError : public Error {
 public:
  using Error::Error;
};

class LengthMismatchError : public Error {
 public:
  using Error::Error;
};

class ReflectionWindowError : public Error {
 public:
  using Error::Error;
};

class ContaminatedWindowError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Runs `fn` and tags any library error escaping it with `stage`.
template <typename Fn>
decltype(auto) with_stage(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (Error& e) {
    e.set_stage(stage);
    throw;
  }
}

}  // namespace heatbath
