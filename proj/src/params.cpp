#include "aging/params.hpp"

#include <cmath>

#include <fmt/format.h>

#include "aging/errors.hpp"

namespace aging {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::NoFixedPoint: return "NoFixedPoint";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonIntegerSplit: return "NonIntegerSplit";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NonPhysical: return "NonPhysical";
    case ErrorKind::RequiresZeroV: return "RequiresZeroV";
    case ErrorKind::NoBistability: return "NoBistability";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

void validate_ratio(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::InvalidParams,
                fmt::format("inactive ratio p must lie in [0, 1], got {}", p));
  }
}

void validate(const ModelParams& params) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidParams, msg); };
  if (params.n_qubits < 1) fail(fmt::format("n_qubits must be >= 1, got {}", params.n_qubits));
  if (!(params.kappa > 0.0) || !std::isfinite(params.kappa))
    fail(fmt::format("kappa must be > 0, got {}", params.kappa));
  if (!(params.dissipative_coupling >= 0.0) || !std::isfinite(params.dissipative_coupling))
    fail(fmt::format("dissipative coupling V must be >= 0, got {}", params.dissipative_coupling));
  if (!(params.drive >= 0.0) || !std::isfinite(params.drive))
    fail(fmt::format("drive Omega must be >= 0, got {}", params.drive));
  if (!std::isfinite(params.detuning)) fail("detuning Delta must be finite");
  if (!std::isfinite(params.coherent_coupling)) fail("coherent coupling g must be finite");
  validate_ratio(params.inactive_ratio);
}

QubitSplit split_qubits(const ModelParams& params) {
  const double target = params.n_qubits * params.inactive_ratio;
  QubitSplit split;
  split.n_inactive = static_cast<int>(std::lround(target));
  split.n_active = params.n_qubits - split.n_inactive;
  split.rounding_error = std::abs(target - split.n_inactive);
  return split;
}

QubitSplit require_integer_split(const ModelParams& params) {
  QubitSplit split = split_qubits(params);
  if (!split.exact()) {
    throw Error(ErrorKind::NonIntegerSplit,
                fmt::format("N*p = {}*{} = {} is not an integer; round p to a multiple of 1/N",
                            params.n_qubits, params.inactive_ratio,
                            params.n_qubits * params.inactive_ratio));
  }
  return split;
}

std::string describe(const ModelParams& params) {
  return fmt::format("N={} Delta={} Omega={} g={} V={} kappa={} p={}", params.n_qubits,
                     params.detuning, params.drive, params.coherent_coupling,
                     params.dissipative_coupling, params.kappa, params.inactive_ratio);
}

}  // namespace aging
