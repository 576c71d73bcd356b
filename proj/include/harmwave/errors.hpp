#pragma once

#include <stdexcept>
#include <string>

namespace harmwave {

// One value per failure mode named in the public contracts.
enum class Errc {
  non_positive_frequency,
  non_finite_parameter,
  pearson_out_of_range,
  curvature_singular,
  step_too_large,
  not_resonant,
  unsupported_order,
  expansion_pole,
  empty_window,
  kernel_singular,
  truncation_too_tight,
  quadrature_norm_error,
  not_gaussian,
  grid_too_coarse,
  not_positive_definite,
  purity_divergence,
  step_too_small,
  not_converged,
  zero_information,
  length_mismatch,
  non_positive_probability,
  invalid_grid,
  parse_error,
  validation_error,
  io_failure,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::non_positive_frequency:   return "NonPositiveFrequency";
    case Errc::non_finite_parameter:     return "NonFiniteParameter";
    case Errc::pearson_out_of_range:     return "PearsonOutOfRange";
    case Errc::curvature_singular:       return "CurvatureSingular";
    case Errc::step_too_large:           return "StepTooLarge";
    case Errc::not_resonant:             return "NotResonant";
    case Errc::unsupported_order:        return "UnsupportedOrder";
    case Errc::expansion_pole:           return "ExpansionPole";
    case Errc::empty_window:             return "EmptyWindow";
    case Errc::kernel_singular:          return "KernelSingular";
    case Errc::truncation_too_tight:     return "TruncationTooTight";
    case Errc::quadrature_norm_error:    return "QuadratureNormError";
    case Errc::not_gaussian:             return "NotGaussian";
    case Errc::grid_too_coarse:          return "GridTooCoarse";
    case Errc::not_positive_definite:    return "NotPositiveDefinite";
    case Errc::purity_divergence:        return "PurityDivergence";
    case Errc::step_too_small:           return "StepTooSmall";
    case Errc::not_converged:            return "NotConverged";
    case Errc::zero_information:         return "ZeroInformation";
    case Errc::length_mismatch:          return "LengthMismatch";
    case Errc::non_positive_probability: return "NonPositiveProbability";
    case Errc::invalid_grid:             return "InvalidGrid";
    case Errc::parse_error:              return "ParseError";
    case Errc::validation_error:         return "ValidationError";
    case Errc::io_failure:               return "IoFailure";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace harmwave
