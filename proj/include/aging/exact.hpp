#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "aging/fixed_points.hpp"
#include "aging/ode.hpp"
#include "aging/params.hpp"

namespace aging {

using SparseOperator = Eigen::SparseMatrix<cplx>;
using DensityMatrix = Eigen::MatrixXcd;

/// Dissipator rate * D[op], with D[L](rho) = 2 L rho L^+ - {L^+ L, rho}.
struct JumpOperator {
  SparseOperator op;
  double rate = 0.0;
  std::string label;
};

/// Full-space master equation for N qubits. Qubit j is the j-th Kronecker
/// factor (j = 0 most significant); the local basis is (|g>, |e>).
struct LindbladSystem {
  int n_qubits = 0;
  int n_active = 0;
  SparseOperator hamiltonian;
  std::vector<JumpOperator> jump_ops;
  // H - i sum_k rate_k L_k^+ L_k
  SparseOperator effective_hamiltonian;

  int dim() const noexcept { return 1 << n_qubits; }
};

inline constexpr int kMaxExactQubits = 10;

/// Single-site operator embedded in the N-qubit space.
SparseOperator site_operator(const Eigen::Matrix2cd& local, int site, int n_qubits);

/// Throws TooLarge for N > 10 and NonIntegerSplit when N p is fractional.
/// The pair dissipators of the ordered double sum over j != k are merged per
/// unordered pair (j < k) at twice the rate, since D[L] = D[-L].
LindbladSystem build_system(const ModelParams& params);

/// d rho / dt.
DensityMatrix apply_liouvillian(const LindbladSystem& system, const DensityMatrix& rho);

DensityMatrix maximally_mixed_state(int n_qubits);

/// (1/N) sum_j Tr(rho sigma_+^j sigma_-^j).
double mean_population(const DensityMatrix& rho, int n_qubits);

struct ExactResult {
  std::vector<std::pair<double, double>> nbar_trajectory;  // (t, nbar) at report points
  double steady_nbar = 0.0;
  DensityMatrix final_rho;
  IntegrationOutcome outcome;
};

inline constexpr double kTraceTolerance = 1e-8;
inline constexpr double kHermiticityTolerance = 1e-10;

/// Integrates the master equation until |d rho/dt|_F < steady_tol or t_max.
/// Throws NonPhysical if trace or Hermiticity drift past tolerance.
ExactResult evolve_exact(const LindbladSystem& system, const DensityMatrix& rho0,
                         const IntegrationControls& controls = {});

}  // namespace aging
