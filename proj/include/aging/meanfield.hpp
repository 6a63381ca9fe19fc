#pragma once

#include <span>
#include <vector>

#include "aging/fixed_points.hpp"
#include "aging/ode.hpp"
#include "aging/params.hpp"

namespace aging {

/// Product-state description: per-qubit excited population w_j and coherence
/// q_j = <g_j|rho_j|e_j>. Qubits [0, n_active) are pumped, the rest decay.
struct MeanFieldState {
  std::vector<double> w;
  std::vector<cplx> q;
  int n_active = 0;

  int size() const noexcept { return static_cast<int>(w.size()); }
};

struct MeanFieldDerivative {
  std::vector<double> dw;
  std::vector<cplx> dq;
};

/// Discrepancy terms between the collective and mean-field equations.
struct CorrelationDiagnostics {
  cplx m1{};
  double m2 = 0.0;
  cplx m3{};
};

struct MeanFieldResult {
  MeanFieldState steady;  // final state; steady when outcome converged
  double nbar = 0.0;
  IntegrationOutcome outcome;
};

/// Uniform initial condition w_j = w0, q_j = q0 with the active count taken
/// from the (integer) split of params.
MeanFieldState uniform_meanfield_state(const ModelParams& params, double w0, cplx q0);

/// Throws DimensionMismatch when the state does not describe params.n_qubits
/// qubits.
MeanFieldDerivative meanfield_rhs(const MeanFieldState& state, const ModelParams& params);

/// Allocation-free kernel behind meanfield_rhs. The primed sums over k != j
/// come from global sums minus the own term, so the cost is O(N).
void meanfield_rhs_into(std::span<const double> w, std::span<const cplx> q, int n_active,
                        const ModelParams& params, std::span<double> dw, std::span<cplx> dq);

/// Throws NonIntegerSplit unless N p is an integer.
MeanFieldResult integrate_meanfield(const ModelParams& params, const MeanFieldState& init,
                                    const IntegrationControls& controls = {});

double mean_population(const MeanFieldState& state);

/// Uses <sigma_+^j> = Tr(rho_j sigma_+^j) = q_j.
CorrelationDiagnostics correlation_diagnostics(const MeanFieldState& state,
                                               const ModelParams& params);

}  // namespace aging
