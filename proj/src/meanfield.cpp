#include "aging/meanfield.hpp"

#include <fmt/format.h>

#include "aging/errors.hpp"

namespace aging {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_dimensions(const MeanFieldState& s, const ModelParams& params) {
  if (s.size() != params.n_qubits || static_cast<int>(s.q.size()) != params.n_qubits) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("mean-field state has {} populations and {} coherences, expected {}",
                            s.w.size(), s.q.size(), params.n_qubits));
  }
  if (s.n_active < 0 || s.n_active > params.n_qubits) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("n_active={} outside [0, {}]", s.n_active, params.n_qubits));
  }
}

// Packed layout: w_0..w_{N-1}, then (Re q_j, Im q_j) pairs.
void pack(const MeanFieldState& s, std::vector<double>& x) {
  const std::size_t n = s.w.size();
  x.resize(3 * n);
  for (std::size_t j = 0; j < n; ++j) {
    x[j] = s.w[j];
    x[n + 2 * j] = s.q[j].real();
    x[n + 2 * j + 1] = s.q[j].imag();
  }
}

void unpack(const std::vector<double>& x, MeanFieldState& s) {
  const std::size_t n = s.w.size();
  for (std::size_t j = 0; j < n; ++j) {
    s.w[j] = x[j];
    s.q[j] = cplx(x[n + 2 * j], x[n + 2 * j + 1]);
  }
}

}  // namespace

MeanFieldState uniform_meanfield_state(const ModelParams& params, double w0, cplx q0) {
  const QubitSplit split = split_qubits(params);
  MeanFieldState s;
  s.w.assign(params.n_qubits, w0);
  s.q.assign(params.n_qubits, q0);
  s.n_active = split.n_active;
  return s;
}

void meanfield_rhs_into(std::span<const double> w, std::span<const cplx> q, int n_active,
                        const ModelParams& params, std::span<double> dw, std::span<cplx> dq) {
  const int n = static_cast<int>(w.size());
  const double big_n = n;
  const double kappa = params.kappa;
  const double v = params.dissipative_coupling;
  const double g = params.coherent_coupling;
  const double omega = params.drive;
  const double decay = params.population_decay();
  const double pair_damping = 2.0 * v * (big_n - 1.0) / big_n;

  double sum_w = 0.0;
  cplx sum_q{};
  for (int k = 0; k < n; ++k) {
    sum_w += w[k];
    sum_q += q[k];
  }

  for (int j = 0; j < n; ++j) {
    const cplx others_q = sum_q - q[j];
    const double others_w = sum_w - w[j];
    const double sz_field = 2.0 * others_w - (big_n - 1.0);  // sum'_k (2 w_k - 1)

    double pump = j < n_active ? 2.0 * kappa : 0.0;
    dw[j] = omega * q[j].imag() - decay * w[j] + pump +
            (2.0 * v / big_n) * (q[j] * std::conj(others_q) + std::conj(q[j]) * others_q).real();
    dq[j] = kI * (params.detuning + 4.0 * g * sz_field) * q[j] +
            kI * (0.5 * omega) * (1.0 - 2.0 * w[j]) - kappa * q[j] -
            (4.0 * v / big_n) * w[j] * others_q - pair_damping * q[j] +
            (2.0 * v / big_n) * others_q;
  }
}

MeanFieldDerivative meanfield_rhs(const MeanFieldState& state, const ModelParams& params) {
  check_dimensions(state, params);
  MeanFieldDerivative d;
  d.dw.resize(state.w.size());
  d.dq.resize(state.q.size());
  meanfield_rhs_into(state.w, state.q, state.n_active, params, d.dw, d.dq);
  return d;
}

MeanFieldResult integrate_meanfield(const ModelParams& params, const MeanFieldState& init,
                                    const IntegrationControls& controls) {
  validate(params);
  const QubitSplit split = require_integer_split(params);
  check_dimensions(init, params);
  if (init.n_active != split.n_active) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("initial state marks {} active qubits but N(1-p) = {}", init.n_active,
                            split.n_active));
  }

  const std::size_t n = init.w.size();
  std::vector<double> w(n), dw(n);
  std::vector<cplx> q(n), dq(n);
  auto system = [&](const std::vector<double>& x, std::vector<double>& dxdt, double) {
    for (std::size_t j = 0; j < n; ++j) {
      w[j] = x[j];
      q[j] = cplx(x[n + 2 * j], x[n + 2 * j + 1]);
    }
    meanfield_rhs_into(w, q, init.n_active, params, dw, dq);
    for (std::size_t j = 0; j < n; ++j) {
      dxdt[j] = dw[j];
      dxdt[n + 2 * j] = dq[j].real();
      dxdt[n + 2 * j + 1] = dq[j].imag();
    }
  };

  std::vector<double> x;
  pack(init, x);
  MeanFieldResult result;
  result.outcome = run_to_steady(system, x, controls, ResidualNorm::Max,
                                 [](double, const std::vector<double>&, double) {});
  result.steady = init;
  unpack(x, result.steady);
  result.nbar = mean_population(result.steady);
  return result;
}

double mean_population(const MeanFieldState& state) {
  if (state.w.empty()) return 0.0;
  double sum = 0.0;
  for (double wj : state.w) sum += wj;
  return sum / static_cast<double>(state.w.size());
}

CorrelationDiagnostics correlation_diagnostics(const MeanFieldState& state,
                                               const ModelParams& params) {
  check_dimensions(state, params);
  const double big_n = params.n_qubits;
  const double g = params.coherent_coupling;
  const double v = params.dissipative_coupling;

  cplx raise_pop{};  // sum_j <sigma_+^j><sigma_+^j sigma_-^j>
  double raise_lower = 0.0;
  for (int j = 0; j < state.size(); ++j) {
    raise_pop += state.q[j] * state.w[j];
    raise_lower += std::norm(state.q[j]);
  }
  CorrelationDiagnostics diag;
  diag.m1 = kI * (8.0 * g / big_n) * raise_pop;
  diag.m2 = (4.0 * v / (big_n * big_n)) * raise_lower;
  diag.m3 = -(4.0 * v / (big_n * big_n)) * raise_pop;
  return diag;
}

}  // namespace aging
