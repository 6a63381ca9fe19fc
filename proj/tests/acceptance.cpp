// Runs the eleven acceptance criteria and prints one PASS/FAIL line each.
// Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "aging/analysis.hpp"
#include "aging/collective.hpp"
#include "aging/exact.hpp"
#include "aging/meanfield.hpp"
#include "oracles.hpp"

using namespace aging;

namespace {

constexpr double kIntervalTolerance = 0.02;
constexpr double kSweepStep = 0.002;
constexpr double kEquivalenceTolerance = 1e-6;
constexpr double kTwoQubitTolerance = 1e-8;
constexpr double kTraceTolerance = 1e-8;
constexpr double kHermiticityTolerance = 1e-10;
// Observed worst case at N = 6 is 1.7e-3; the bound keeps roughly 3x headroom.
constexpr double kMeanFieldExactBound = 5e-3;
constexpr double kJacobianTolerance = 1e-5;
constexpr double kRootTolerance = 1e-8;
constexpr double kSumTolerance = 1e-12;

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Verdict()> run;
};

ModelParams with_v(double v) {
  ModelParams prm;
  prm.dissipative_coupling = v;
  return prm;
}

SweepResult collective_sweep(const ModelParams& prm) {
  return sweep_p(prm, make_grid(0.0, 1.0, kSweepStep), {}, Method::Collective);
}

Verdict interval_criterion() {
  const auto iv = bistable_interval(ModelParams{});
  const bool ok = std::abs(iv.p_cmin - 0.71) <= kIntervalTolerance &&
                  std::abs(iv.p_cmax - 0.88) <= kIntervalTolerance;
  return {ok, fmt::format("[{:.4f}, {:.4f}]", iv.p_cmin, iv.p_cmax)};
}

Verdict single_jump_criterion() {
  const auto sweep = collective_sweep(ModelParams{});
  const auto iv = bistable_interval(ModelParams{});
  if (sweep.jumps.size() != 1) return {false, fmt::format("{} jumps", sweep.jumps.size())};
  const double at = sweep.jumps[0].location;
  return {iv.contains(at), fmt::format("jump at p={:.4f}", at)};
}

Verdict monotone_v_criterion() {
  std::vector<double> locations;
  for (double v : {0.0, 0.2, 0.4}) {
    const auto sweep = collective_sweep(with_v(v));
    if (sweep.jumps.size() != 1) {
      return {false, fmt::format("V={}: {} jumps", v, sweep.jumps.size())};
    }
    locations.push_back(sweep.jumps[0].location);
  }
  const bool ok = locations[0] > locations[1] && locations[1] > locations[2];
  return {ok, fmt::format("p_c = {:.3f}, {:.3f}, {:.3f}", locations[0], locations[1], locations[2])};
}

Verdict stability_criterion() {
  const ModelParams prm;
  int region_two = 0;
  for (int k = 0; k < 100; ++k) {
    const double p = k / 99.0;
    const auto set = classify_fixed_points(prm, p);
    const auto* upper = set.branch(1);
    if (upper == nullptr || !upper->stability->stable()) {
      return {false, fmt::format("upper branch unstable at p={:.4f}", p)};
    }
    if (set.region != Region::II) continue;
    ++region_two;
    if (!set.branch(2)->stability->stable() || set.branch(3)->stability->stable()) {
      return {false, fmt::format("wrong stability pattern at p={:.4f}", p)};
    }
  }
  return {region_two > 0, fmt::format("{} points in region II", region_two)};
}

Verdict equivalence_criterion() {
  ModelParams prm;
  prm.coherent_coupling = 0.0;
  prm.dissipative_coupling = 0.0;
  const auto controls = sweep_controls();
  double worst = 0.0;
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double c = steady_state(Method::Collective, prm, p, {}, controls).nbar;
    const double m = steady_state(Method::MeanField, prm, p, {}, controls).nbar;
    const double k = steady_state(Method::Cumulant, prm, p, {0.0, cplx{}}, controls).nbar;
    worst = std::max({worst, std::abs(c - m), std::abs(c - k), std::abs(m - k)});
  }
  return {worst < kEquivalenceTolerance, fmt::format("max pairwise diff {:.2e}", worst)};
}

Verdict exact_oracle_criterion() {
  ModelParams two;
  two.n_qubits = 2;
  two.inactive_ratio = 0.5;
  IntegrationControls horizon;
  horizon.steady_tol = 1e-300;  // never stop early
  horizon.t_max = 10.0;
  const auto reference = oracle::two_qubit_nbar(two, 10.0, 1e-3);
  const auto small = evolve_exact(build_system(two), maximally_mixed_state(2), horizon);
  if (small.nbar_trajectory.size() != reference.size()) return {false, "trajectory length"};
  double worst = 0.0;
  for (std::size_t k = 0; k < reference.size(); ++k) {
    worst = std::max(worst, std::abs(small.nbar_trajectory[k].second - reference[k]));
  }

  ModelParams six;
  six.n_qubits = 6;
  six.inactive_ratio = 0.5;
  horizon.t_max = 100.0;
  // evolve_exact checks trace and Hermiticity at every report point and throws
  // past the library tolerances; the final state is checked again here.
  const auto big = evolve_exact(build_system(six), maximally_mixed_state(6), horizon);
  const auto& rho = big.final_rho;
  const double trace_err = std::abs(rho.trace() - 1.0);
  const double herm_err = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  const bool ok = worst < kTwoQubitTolerance && trace_err < kTraceTolerance &&
                  herm_err < kHermiticityTolerance && big.outcome.t_final >= 100.0;
  return {ok, fmt::format("N=2 diff {:.1e}; N=6 trace {:.1e} herm {:.1e}", worst, trace_err,
                          herm_err)};
}

Verdict comparison_criterion() {
  ModelParams prm;
  prm.n_qubits = 6;
  std::vector<double> ps;
  for (int k = 0; k <= 6; ++k) ps.push_back(k / 6.0);
  const auto rows = compare_methods(prm, ps);
  double mf = 0.0;
  double col = 0.0;
  for (const auto& r : rows) {
    if (!r.exact) return {false, "missing exact value"};
    mf = std::max(mf, std::abs(r.meanfield - *r.exact));
    col = std::max(col, std::abs(r.collective - *r.exact));
  }
  return {mf < col && mf < kMeanFieldExactBound,
          fmt::format("max |mf-exact| {:.4f}, max |collective-exact| {:.4f}", mf, col)};
}

Verdict basin_criterion() {
  const auto axis = make_grid(0.0, 1.0, 0.01);
  std::vector<std::size_t> counts;
  for (double p : {0.71, 0.8, 0.88}) {
    counts.push_back(basin_map(ModelParams{}, p, axis, axis).count(BasinLabel::ToN1));
  }
  const bool ok = counts[0] > counts[1] && counts[1] > counts[2];
  return {ok, fmt::format("toN1 cells {} > {} > {}", counts[0], counts[1], counts[2])};
}

Verdict size_scan_criterion() {
  // p = 0.4 only crosses over near N = 540, so its scan runs further.
  std::vector<int> to400, to800;
  for (int n = 2; n <= 800; ++n) {
    to800.push_back(n);
    if (n <= 400) to400.push_back(n);
  }
  const auto flat = size_scan(ModelParams{}, 0.3, to400);
  const auto mid = size_scan(ModelParams{}, 0.4, to800);
  const auto high = size_scan(ModelParams{}, 0.6, to400);
  if (mid.jumps.empty() || high.jumps.empty()) return {false, "missing size-scan jump"};
  const double n_mid = mid.jumps[0].location;
  const double n_high = high.jumps[0].location;
  return {flat.jumps.empty() && n_high < n_mid,
          fmt::format("N_c(0.6)={} N_c(0.4)={} jumps(0.3)={}", n_high, n_mid, flat.jumps.size())};
}

Verdict cumulant_criterion() {
  const auto prm = with_v(0.0);
  const auto grid = make_grid(0.0, 1.0, kSweepStep);
  const auto cumulant = sweep_p(prm, grid, {0.0, 0.0}, Method::Cumulant);
  const auto collective = sweep_p(prm, grid, {}, Method::Collective);
  std::string where;
  for (const auto& j : cumulant.jumps) where += fmt::format(" {:.3f}", j.location);
  return {cumulant.jumps.size() >= 2 && collective.jumps.size() == 1,
          fmt::format("cumulant jumps at{}; collective {}", where, collective.jumps.size())};
}

Verdict hygiene_criterion() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double jac = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    const ModelParams prm = oracle::random_params(rng);
    const double p = prm.inactive_ratio;
    const CollectiveState s{0.5 + 0.5 * u(rng), cplx(u(rng), u(rng))};
    const Eigen::Vector3d x(s.q, s.a.real(), s.a.imag());
    const Eigen::Matrix3d numeric = oracle::fd_jacobian(x, prm, p);
    jac = std::max(jac, (real_jacobian(s, prm, p) - numeric).norm() / std::max(1.0, numeric.norm()));
  }

  double roots = 0.0;
  int compared = 0;
  for (int draw = 0; draw < 200; ++draw) {
    const ModelParams prm = oracle::random_params(rng);
    const auto cc = cubic_coefficients(prm, prm.inactive_ratio);
    if (cc.degenerate) continue;
    const double scale = std::pow(std::abs(cc.n) / 3.0, 3) + std::pow(cc.m / 2.0, 2);
    if (std::abs(cc.discriminant) < 1e-6 * std::max(scale, 1e-300)) continue;
    auto reference = oracle::companion_real_roots(cc.a, cc.b, cc.c, cc.d);
    std::vector<double> mine;
    for (const auto& fp : solve_fixed_points(prm, prm.inactive_ratio).points) {
      for (int k = 0; k < fp.multiplicity; ++k) mine.push_back(fp.nbar);
    }
    std::sort(mine.begin(), mine.end());
    if (mine.size() != reference.size()) return {false, "root count mismatch"};
    for (std::size_t k = 0; k < mine.size(); ++k) {
      roots = std::max(roots, std::abs(mine[k] - reference[k]) / std::max(1.0, std::abs(reference[k])));
    }
    ++compared;
  }

  double sums = 0.0;
  for (int n : {7, 31, 100}) {
    ModelParams prm = oracle::random_params(rng);
    prm.n_qubits = n;
    prm = prm.with_ratio(std::round(0.4 * n) / n);
    auto state = uniform_meanfield_state(prm, 0.0, cplx{});
    for (std::size_t j = 0; j < state.w.size(); ++j) {
      state.w[j] = 0.5 + 0.5 * u(rng);
      state.q[j] = cplx(0.5 * u(rng), 0.5 * u(rng));
    }
    const auto fast = meanfield_rhs(state, prm);
    std::vector<double> dw;
    std::vector<cplx> dq;
    oracle::meanfield_brute_force(state.w, state.q, state.n_active, prm, dw, dq);
    for (std::size_t j = 0; j < dw.size(); ++j) {
      sums = std::max({sums, std::abs(fast.dw[j] - dw[j]), std::abs(fast.dq[j] - dq[j])});
    }
  }
  const bool ok = jac < kJacobianTolerance && roots < kRootTolerance && sums < kSumTolerance &&
                  compared > 150;
  return {ok, fmt::format("jacobian {:.1e}, roots {:.1e} ({} draws), sums {:.1e}", jac, roots,
                          compared, sums)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "bistable interval", 1.0, interval_criterion},
      {2, "single jump in sweep", 10.0, single_jump_criterion},
      {3, "critical p decreases with V", 30.0, monotone_v_criterion},
      {4, "stability of the branches", 1.0, stability_criterion},
      {5, "cross-method equivalence", 5.0, equivalence_criterion},
      {6, "exact solver oracle", 120.0, exact_oracle_criterion},
      {7, "three-method comparison", 300.0, comparison_criterion},
      {8, "basin monotonicity", 120.0, basin_criterion},
      {9, "size-scan ordering", 60.0, size_scan_criterion},
      {10, "cumulant multiplicity", 30.0, cumulant_criterion},
      {11, "numerical hygiene", 10.0, hygiene_criterion},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, fmt::format("threw: {}", e.what())};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = seconds <= c.budget_s;
    const bool pass = v.pass && in_budget;
    failures += pass ? 0 : 1;
    fmt::print("criterion {:>2} {:<30} {} | {} | {:.2f}s (budget {:.0f}s){}\n", c.id, c.name,
               pass ? "PASS" : "FAIL", v.detail, seconds, c.budget_s,
               in_budget ? "" : " over budget");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
