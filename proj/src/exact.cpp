#include "aging/exact.hpp"

#include <bit>
#include <cmath>

#include <fmt/format.h>
#include <unsupported/Eigen/KroneckerProduct>

#include "aging/errors.hpp"

namespace aging {

namespace {

Eigen::Matrix2cd raising() {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(1, 0) = 1.0;  // |e><g|
  return m;
}

Eigen::Matrix2cd lowering() { return raising().adjoint(); }

Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 0) = -1.0;
  m(1, 1) = 1.0;
  return m;
}

SparseOperator identity(int dim) {
  SparseOperator id(dim, dim);
  id.setIdentity();
  return id;
}

Eigen::Map<const DensityMatrix> view(const std::vector<double>& x, int dim) {
  return Eigen::Map<const DensityMatrix>(reinterpret_cast<const cplx*>(x.data()), dim, dim);
}

Eigen::Map<DensityMatrix> view(std::vector<double>& x, int dim) {
  return Eigen::Map<DensityMatrix>(reinterpret_cast<cplx*>(x.data()), dim, dim);
}

template <class Rho, class Out>
void liouvillian_into(const LindbladSystem& sys, const Rho& rho, Out& out) {
  const cplx i(0.0, 1.0);
  out.noalias() = -i * (sys.effective_hamiltonian * rho);
  out.noalias() += i * (rho * sys.effective_hamiltonian.adjoint());
  for (const auto& jump : sys.jump_ops) {
    const DensityMatrix l_rho = jump.op * rho;
    out.noalias() += (2.0 * jump.rate) * (l_rho * jump.op.adjoint());
  }
}

}  // namespace

SparseOperator site_operator(const Eigen::Matrix2cd& local, int site, int n_qubits) {
  const SparseOperator left = identity(1 << site);
  const SparseOperator right = identity(1 << (n_qubits - site - 1));
  const SparseOperator mid = local.sparseView();
  SparseOperator lm = Eigen::kroneckerProduct(left, mid);
  SparseOperator full = Eigen::kroneckerProduct(lm, right);
  full.makeCompressed();
  return full;
}

LindbladSystem build_system(const ModelParams& params) {
  validate(params);
  if (params.n_qubits > kMaxExactQubits) {
    throw Error(ErrorKind::TooLarge,
                fmt::format("exact simulation needs 2^N <= 1024 (N <= {}), got N={}",
                            kMaxExactQubits, params.n_qubits));
  }
  const QubitSplit split = require_integer_split(params);
  const int n = params.n_qubits;
  const int dim = 1 << n;

  std::vector<SparseOperator> lower(n), sz(n);
  for (int j = 0; j < n; ++j) {
    lower[j] = site_operator(lowering(), j, n);
    sz[j] = site_operator(pauli_z(), j, n);
  }

  LindbladSystem sys;
  sys.n_qubits = n;
  sys.n_active = split.n_active;
  sys.hamiltonian = SparseOperator(dim, dim);
  for (int j = 0; j < n; ++j) {
    SparseOperator raise = lower[j].adjoint();
    sys.hamiltonian += (0.5 * params.detuning) * sz[j];
    sys.hamiltonian += (0.5 * params.drive) * (raise + lower[j]);
  }
  // Ordered pairs j != k: each unordered pair contributes 2 g sz_j sz_k.
  if (params.coherent_coupling != 0.0) {
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        sys.hamiltonian += (2.0 * params.coherent_coupling) * SparseOperator(sz[j] * sz[k]);
  }
  sys.hamiltonian.prune(cplx(0.0));

  for (int j = 0; j < n; ++j) {
    if (j < split.n_active) {
      sys.jump_ops.push_back({lower[j].adjoint(), params.kappa, fmt::format("pump({})", j)});
    } else {
      sys.jump_ops.push_back({lower[j], params.kappa, fmt::format("decay({})", j)});
    }
  }
  if (params.dissipative_coupling > 0.0) {
    const double pair_rate = 2.0 * params.dissipative_coupling / n;
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        sys.jump_ops.push_back(
            {SparseOperator(lower[j] - lower[k]), pair_rate, fmt::format("pair({},{})", j, k)});
  }

  const cplx i(0.0, 1.0);
  SparseOperator loss(dim, dim);
  for (auto& jump : sys.jump_ops) {
    jump.op.makeCompressed();
    loss += jump.rate * SparseOperator(jump.op.adjoint() * jump.op);
  }
  sys.effective_hamiltonian = sys.hamiltonian - i * loss;
  sys.effective_hamiltonian.makeCompressed();
  return sys;
}

DensityMatrix apply_liouvillian(const LindbladSystem& system, const DensityMatrix& rho) {
  DensityMatrix out(rho.rows(), rho.cols());
  liouvillian_into(system, rho, out);
  return out;
}

DensityMatrix maximally_mixed_state(int n_qubits) {
  const int dim = 1 << n_qubits;
  return DensityMatrix::Identity(dim, dim) / static_cast<double>(dim);
}

double mean_population(const DensityMatrix& rho, int n_qubits) {
  double excited = 0.0;
  for (int x = 0; x < rho.rows(); ++x) excited += std::popcount(static_cast<unsigned>(x)) * rho(x, x).real();
  return excited / n_qubits;
}

ExactResult evolve_exact(const LindbladSystem& system, const DensityMatrix& rho0,
                         const IntegrationControls& controls) {
  const int dim = system.dim();
  if (rho0.rows() != dim || rho0.cols() != dim) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("initial density matrix is {}x{}, expected {}x{}", rho0.rows(),
                            rho0.cols(), dim, dim));
  }

  std::vector<double> x(2 * static_cast<std::size_t>(dim) * dim);
  view(x, dim) = rho0;

  auto rhs = [&](const std::vector<double>& s, std::vector<double>& ds, double) {
    auto out = view(ds, dim);
    liouvillian_into(system, view(s, dim), out);
  };

  ExactResult result;
  auto observe = [&](double t, const std::vector<double>& s, double) {
    const auto rho = view(s, dim);
    const double trace_error = std::abs(rho.trace() - 1.0);
    const double hermiticity = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (trace_error > kTraceTolerance || hermiticity > kHermiticityTolerance) {
      throw Error(ErrorKind::NonPhysical,
                  fmt::format("density matrix left the physical set at t={}: |tr-1|={:.3e}, "
                              "|rho-rho^+|={:.3e}",
                              t, trace_error, hermiticity));
    }
    result.nbar_trajectory.emplace_back(t, mean_population(DensityMatrix(rho), system.n_qubits));
  };

  result.outcome = run_to_steady(rhs, x, controls, ResidualNorm::Euclidean, observe);
  result.final_rho = view(x, dim);
  result.steady_nbar = mean_population(result.final_rho, system.n_qubits);
  return result;
}

}  // namespace aging
