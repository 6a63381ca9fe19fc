#pragma once

#include <string>

namespace aging {

/// Physical constants of the driven qubit network. Rates and energies are in
/// units of kappa; kappa = 1 fixes the time unit.
struct ModelParams {
  int n_qubits = 100;               // N
  double detuning = 3.0;            // Delta
  double drive = 3.2;               // Omega
  double coherent_coupling = 0.04;  // g
  double dissipative_coupling = 0.2;  // V
  double kappa = 1.0;
  double inactive_ratio = 0.0;      // p = N_i / N

  /// Coefficient of the population decay in the collective equations,
  /// 2 kappa + 4 V (N-1)/N.
  double population_decay() const noexcept {
    return 2.0 * kappa + 4.0 * dissipative_coupling * (n_qubits - 1) / n_qubits;
  }

  /// Mean-field shifted detuning Delta - 4 g (N-1).
  double shifted_detuning() const noexcept {
    return detuning - 4.0 * coherent_coupling * (n_qubits - 1);
  }

  ModelParams with_ratio(double p) const {
    ModelParams out = *this;
    out.inactive_ratio = p;
    return out;
  }
};

/// Throws Error(InvalidParams) naming the offending field.
void validate(const ModelParams& params);

/// Throws Error(InvalidParams) unless 0 <= p <= 1.
void validate_ratio(double p);

/// Integer partition of the network into active and inactive qubits.
struct QubitSplit {
  int n_active = 0;
  int n_inactive = 0;
  double rounding_error = 0.0;  // |N p - N_i|

  bool exact() const noexcept { return rounding_error < 1e-9; }
};

/// Rounds N p to the nearest integer; never throws for valid params.
QubitSplit split_qubits(const ModelParams& params);

/// Like split_qubits but throws Error(NonIntegerSplit) when N p is not an
/// integer.
QubitSplit require_integer_split(const ModelParams& params);

std::string describe(const ModelParams& params);

}  // namespace aging
