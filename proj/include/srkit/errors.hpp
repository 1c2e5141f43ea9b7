#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace srk {

/// Base class of every error raised by srkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SRK_DEFINE_ERROR(Name)          \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  }

SRK_DEFINE_ERROR(InvalidParams);
SRK_DEFINE_ERROR(ConvergenceFailure);
SRK_DEFINE_ERROR(TopologyChange);
SRK_DEFINE_ERROR(DegenerateHessian);
SRK_DEFINE_ERROR(NumericalOverflow);
SRK_DEFINE_ERROR(NumericalBlowup);
SRK_DEFINE_ERROR(BallOverlap);
SRK_DEFINE_ERROR(EmptyInput);
SRK_DEFINE_ERROR(InvalidCDFValue);
SRK_DEFINE_ERROR(DegenerateInvariantMeasure);
SRK_DEFINE_ERROR(MissingArtifact);
SRK_DEFINE_ERROR(ParseError);

#undef SRK_DEFINE_ERROR

/// Wraps an error raised inside one realization of an ensemble.
class RealizationError : public Error {
 public:
  RealizationError(std::uint64_t realization, const std::string& what)
      : Error("realization " + std::to_string(realization) + ": " + what),
        realization_(realization) {}

  std::uint64_t realization() const noexcept { return realization_; }

 private:
  std::uint64_t realization_;
};

}  // namespace srk
