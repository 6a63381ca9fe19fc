#include "aging/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "aging/collective.hpp"
#include "aging/cumulant.hpp"
#include "aging/errors.hpp"
#include "aging/exact.hpp"
#include "aging/meanfield.hpp"

namespace aging {

const char* to_string(Method method) noexcept {
  switch (method) {
    case Method::Collective: return "collective";
    case Method::MeanField: return "meanfield";
    case Method::Exact: return "exact";
    case Method::Cumulant: return "cumulant";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "collective") return Method::Collective;
  if (name == "meanfield") return Method::MeanField;
  if (name == "exact") return Method::Exact;
  if (name == "cumulant") return Method::Cumulant;
  throw Error(ErrorKind::InvalidArgument, fmt::format("unknown method '{}'", name));
}

IntegrationControls sweep_controls() {
  IntegrationControls c;
  c.record = false;
  return c;
}

SteadyPoint steady_state(Method method, const ModelParams& params, double p,
                         const SweepInit& init, const IntegrationControls& controls) {
  validate(params);
  validate_ratio(p);
  const ModelParams at_p = params.with_ratio(p);
  switch (method) {
    case Method::Collective: {
      const auto traj = integrate_to_steady(params, p, {init.q0, init.a0}, controls);
      return {traj.nbar(), traj.outcome.reason};
    }
    case Method::MeanField: {
      const auto res =
          integrate_meanfield(at_p, uniform_meanfield_state(at_p, init.q0, init.a0), controls);
      return {res.nbar, res.outcome.reason};
    }
    case Method::Exact: {
      const auto system = build_system(at_p);
      const auto res = evolve_exact(system, maximally_mixed_state(system.n_qubits), controls);
      return {res.steady_nbar, res.outcome.reason};
    }
    case Method::Cumulant: {
      CumulantState start;
      start.q = init.q0;
      start.a = init.a0;
      const auto res = integrate_cumulant(params, p, start, controls);
      return {res.nbar, res.outcome.reason};
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown method");
}

std::vector<JumpEvent> detect_jumps(std::span<const double> axis, std::span<const double> nbar,
                                    double threshold) {
  if (axis.size() != nbar.size()) {
    throw Error(ErrorKind::DimensionMismatch, "axis and nbar lengths differ");
  }
  std::vector<JumpEvent> out;
  for (std::size_t i = 0; i + 1 < nbar.size(); ++i) {
    const double drop = nbar[i] - nbar[i + 1];
    if (std::abs(drop) > threshold) out.push_back({0.5 * (axis[i] + axis[i + 1]), drop});
  }
  return out;
}

std::vector<double> make_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("bad grid {}:{}:{}", start, stop, step));
  }
  // The 1e-9 keeps a point exactly half a step past stop out of the grid.
  const auto count =
      static_cast<std::size_t>(std::floor((stop - start) / step + 0.5 - 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = start + static_cast<double>(i) * step;
  if (grid.back() > stop || stop - grid.back() < 1e-9 * step) grid.back() = stop;
  return grid;
}

SweepResult sweep_p(const ModelParams& params, std::span<const double> p_grid,
                    const SweepInit& init, Method method, const SweepOptions& options) {
  validate(params);
  for (double p : p_grid) validate_ratio(p);

  SweepResult out;
  out.method = method;
  out.axis.assign(p_grid.begin(), p_grid.end());
  out.nbar.assign(p_grid.size(), 0.0);
  std::vector<char> ok(p_grid.size(), 0);

  if (options.hysteresis) {
    if (method != Method::Collective) {
      throw Error(ErrorKind::InvalidArgument, "hysteresis sweeps need the collective method");
    }
    CollectiveState state{init.q0, init.a0};
    for (std::size_t i = 0; i < p_grid.size(); ++i) {
      const auto traj = integrate_to_steady(params, p_grid[i], state, options.controls);
      state = traj.final_state;
      out.nbar[i] = traj.nbar();
      ok[i] = traj.converged();
    }
  } else {
    for_each_index(p_grid.size(), options.execution, [&](std::size_t i) {
      const auto point = steady_state(method, params, p_grid[i], init, options.controls);
      out.nbar[i] = point.nbar;
      ok[i] = point.converged();
    });
  }
  out.converged.assign(ok.begin(), ok.end());
  out.jumps = detect_jumps(out.axis, out.nbar, options.jump_threshold);
  return out;
}

const char* to_string(SweepAxis axis) noexcept {
  return axis == SweepAxis::CoherentCoupling ? "g" : "omega";
}

std::vector<double> Sweep2DResult::row(std::size_t i) const {
  return {nbar.begin() + static_cast<std::ptrdiff_t>(i * p.size()),
          nbar.begin() + static_cast<std::ptrdiff_t>((i + 1) * p.size())};
}

std::vector<double> Sweep2DResult::column(std::size_t j) const {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = at(i, j);
  return out;
}

Sweep2DResult sweep_2d(const ModelParams& params, SweepAxis axis, std::span<const double> x_grid,
                       std::span<const double> p_grid, const SweepOptions& options,
                       const SweepInit& init) {
  for (double p : p_grid) validate_ratio(p);
  std::vector<ModelParams> rows(x_grid.size(), params);
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    if (axis == SweepAxis::CoherentCoupling) {
      rows[i].coherent_coupling = x_grid[i];
    } else {
      rows[i].drive = x_grid[i];
    }
    validate(rows[i]);
  }

  Sweep2DResult out;
  out.axis = axis;
  out.x.assign(x_grid.begin(), x_grid.end());
  out.p.assign(p_grid.begin(), p_grid.end());
  const std::size_t cols = p_grid.size();
  out.nbar.assign(x_grid.size() * cols, 0.0);
  std::vector<char> ok(out.nbar.size(), 0);
  for_each_index(out.nbar.size(), options.execution, [&](std::size_t k) {
    const auto traj =
        integrate_to_steady(rows[k / cols], p_grid[k % cols], {init.q0, init.a0}, options.controls);
    out.nbar[k] = traj.nbar();
    ok[k] = traj.converged();
  });
  out.converged.assign(ok.begin(), ok.end());
  return out;
}

namespace {

double discriminant_at(const ModelParams& params, double p) {
  return cubic_coefficients(params, p).discriminant;
}

bool three_roots_at(const ModelParams& params, double p) {
  return has_three_real_roots(cubic_coefficients(params, p));
}

// Boundary between lo (inside == inside_lo) and hi, to within tol.
double bisect_boundary(const ModelParams& params, double lo, double hi, bool inside_lo,
                       double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (three_roots_at(params, mid) == inside_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

bool lower_branch_stable_at(const ModelParams& params, double p) {
  const auto set = classify_fixed_points(params, p);
  const FixedPoint* fp = set.branch(2);
  return fp != nullptr && fp->stability && fp->stability->stable();
}

}  // namespace

BistableInterval bistable_interval(const ModelParams& params) {
  validate(params);
  const auto steps = static_cast<int>(std::lround(1.0 / kIntervalScanStep));
  auto p_at = [&](int i) { return std::min(1.0, i * kIntervalScanStep); };

  int first = -1;
  int last = -1;
  for (int i = 0; i <= steps; ++i) {
    const bool inside = discriminant_at(params, p_at(i)) < 0.0;
    if (inside && first < 0) first = i;
    if (first >= 0) {
      if (!inside) break;
      last = i;
    }
  }
  if (first < 0) {
    throw Error(ErrorKind::NoBistability,
                fmt::format("steady-state cubic has a single real root for all p in [0, 1] ({})",
                            describe(params)));
  }

  BistableInterval out;
  if (first == 0) {
    out.p_cmin = 0.0;
    out.clamped_lower = true;
  } else {
    out.p_cmin = bisect_boundary(params, p_at(first - 1), p_at(first), false, kIntervalBisectTol);
  }
  if (last == steps) {
    out.p_cmax = 1.0;
    out.clamped_upper = true;
  } else {
    out.p_cmax = bisect_boundary(params, p_at(last), p_at(last + 1), true, kIntervalBisectTol);
  }

  bool all_stable = true;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = first; i <= last; ++i) {
    const double p = p_at(i);
    if (lower_branch_stable_at(params, p)) {
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    } else {
      all_stable = false;
    }
  }
  out.lower_branch_stable = all_stable;
  if (lo <= hi) out.stability_window = std::make_pair(lo, hi);
  return out;
}

const char* to_string(BasinLabel label) noexcept {
  switch (label) {
    case BasinLabel::ToN1: return "toN1";
    case BasinLabel::ToN2: return "toN2";
    case BasinLabel::Undetermined: return "undetermined";
  }
  return "undetermined";
}

BasinLabel parse_basin_label(const std::string& text) {
  if (text == "toN1") return BasinLabel::ToN1;
  if (text == "toN2") return BasinLabel::ToN2;
  if (text == "undetermined") return BasinLabel::Undetermined;
  throw Error(ErrorKind::InvalidArgument, fmt::format("unknown basin label '{}'", text));
}

std::size_t BasinGrid::count(BasinLabel label) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

namespace {

struct BasinTarget {
  BasinLabel label;
  double q;
  cplx a;
};

std::vector<BasinTarget> basin_targets(const ModelParams& params, double p) {
  const auto fixed = solve_fixed_points(params, p);
  std::vector<BasinTarget> targets;
  for (int b : {1, 2}) {
    const FixedPoint* fp = fixed.branch(b);
    if (fp != nullptr && fp->physical) {
      targets.push_back({b == 1 ? BasinLabel::ToN1 : BasinLabel::ToN2, fp->nbar, fp->coherence});
    }
  }
  return targets;
}

BasinLabel label_endpoint(const Trajectory& traj, const std::vector<BasinTarget>& targets) {
  if (!traj.converged()) return BasinLabel::Undetermined;
  BasinLabel label = BasinLabel::Undetermined;
  double best = kBasinMatchTolerance;
  for (const auto& t : targets) {
    const double dist =
        std::max(std::abs(traj.final_state.q - t.q), std::abs(traj.final_state.a - t.a));
    if (dist < best) {
      best = dist;
      label = t.label;
    }
  }
  return label;
}

}  // namespace

BasinLabel classify_initial_condition(const ModelParams& params, double p,
                                      const CollectiveState& init,
                                      const IntegrationControls& controls) {
  validate(params);
  validate_ratio(p);
  return label_endpoint(integrate_to_steady(params, p, init, controls), basin_targets(params, p));
}

BasinGrid basin_map(const ModelParams& params, double p, std::span<const double> q0_grid,
                    std::span<const double> a0_grid, const SweepOptions& options) {
  validate(params);
  validate_ratio(p);
  const auto targets = basin_targets(params, p);

  BasinGrid out;
  out.q0_axis.assign(q0_grid.begin(), q0_grid.end());
  out.a0_axis.assign(a0_grid.begin(), a0_grid.end());
  const std::size_t cols = a0_grid.size();
  out.labels.assign(q0_grid.size() * cols, BasinLabel::Undetermined);
  for_each_index(out.labels.size(), options.execution, [&](std::size_t k) {
    const CollectiveState start{q0_grid[k / cols], cplx(a0_grid[k % cols], 0.0)};
    out.labels[k] = label_endpoint(integrate_to_steady(params, p, start, options.controls), targets);
  });
  return out;
}

SweepOptions size_scan_options() {
  SweepOptions opts;
  opts.jump_threshold = kSizeScanJumpThreshold;
  return opts;
}

SweepResult size_scan(const ModelParams& params, double p, std::span<const int> n_grid,
                      const SweepInit& init, const SweepOptions& options) {
  validate_ratio(p);
  std::vector<ModelParams> sized(n_grid.size(), params);
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    sized[i].n_qubits = n_grid[i];
    validate(sized[i]);
  }

  SweepResult out;
  out.axis_name = "N";
  out.method = Method::Collective;
  out.axis.assign(n_grid.begin(), n_grid.end());
  out.nbar.assign(n_grid.size(), 0.0);
  std::vector<char> ok(n_grid.size(), 0);
  for_each_index(n_grid.size(), options.execution, [&](std::size_t i) {
    const auto traj = integrate_to_steady(sized[i], p, {init.q0, init.a0}, options.controls);
    out.nbar[i] = traj.nbar();
    ok[i] = traj.converged();
  });
  out.converged.assign(ok.begin(), ok.end());
  out.jumps = detect_jumps(out.axis, out.nbar, options.jump_threshold);
  return out;
}

std::vector<CompareRow> compare_methods(const ModelParams& params, std::span<const double> p_grid,
                                        const SweepOptions& options, const SweepInit& init) {
  validate(params);
  for (double p : p_grid) require_integer_split(params.with_ratio(p));
  const bool with_exact = params.n_qubits <= kMaxExactQubits;

  std::vector<CompareRow> rows(p_grid.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].p = p_grid[i];
  // Three solves per p; flatten so the exact runs spread across threads.
  const std::size_t per_row = with_exact ? 3 : 2;
  for_each_index(p_grid.size() * per_row, options.execution, [&](std::size_t k) {
    const std::size_t i = k / per_row;
    const double p = p_grid[i];
    switch (k % per_row) {
      case 0:
        rows[i].collective = steady_state(Method::Collective, params, p, init, options.controls).nbar;
        break;
      case 1:
        rows[i].meanfield = steady_state(Method::MeanField, params, p, init, options.controls).nbar;
        break;
      default:
        rows[i].exact = steady_state(Method::Exact, params, p, init, options.controls).nbar;
        break;
    }
  });
  return rows;
}

}  // namespace aging
