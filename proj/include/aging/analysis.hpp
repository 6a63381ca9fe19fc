#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aging/collective.hpp"
#include "aging/fixed_points.hpp"
#include "aging/ode.hpp"
#include "aging/parallel.hpp"
#include "aging/params.hpp"

namespace aging {

enum class Method { Collective, MeanField, Exact, Cumulant };

const char* to_string(Method method) noexcept;
/// Accepts collective, meanfield, exact, cumulant; throws InvalidArgument.
Method parse_method(const std::string& name);

/// Initial condition shared by every grid point of a sweep. Collective and
/// cumulant runs start from (<Q>, <A>) = (q0, a0) with higher moments zero;
/// mean-field runs from w_j = q0, q_j = a0; exact runs ignore it and start
/// from the maximally mixed state.
struct SweepInit {
  double q0 = 0.5;
  cplx a0{0.5, 0.0};
};

struct SteadyPoint {
  double nbar = 0.0;
  StopReason reason = StopReason::MaxTime;

  bool converged() const noexcept { return reason == StopReason::Converged; }
};

/// Integration controls used by sweeps: library defaults without trajectory
/// recording.
IntegrationControls sweep_controls();

SteadyPoint steady_state(Method method, const ModelParams& params, double p,
                         const SweepInit& init, const IntegrationControls& controls);

inline constexpr double kDefaultJumpThreshold = 0.05;

/// Abrupt change of nbar between neighbouring grid points.
struct JumpEvent {
  double location = 0.0;  // midpoint of the bracketing cell
  double drop = 0.0;      // nbar(left) - nbar(right); negative for a rise
};

/// Cells whose |nbar difference| exceeds threshold.
std::vector<JumpEvent> detect_jumps(std::span<const double> axis, std::span<const double> nbar,
                                    double threshold);

struct SweepOptions {
  double jump_threshold = kDefaultJumpThreshold;
  /// Warm-start each point from the previous steady state (collective
  /// method only; forces serial execution).
  bool hysteresis = false;
  Execution execution = Execution::Parallel;
  IntegrationControls controls = sweep_controls();
};

struct SweepResult {
  std::string axis_name = "p";
  std::vector<double> axis;
  std::vector<double> nbar;
  std::vector<bool> converged;
  Method method = Method::Collective;
  std::vector<JumpEvent> jumps;
};

/// start + k step up to stop. A final point that overshoots stop by less than
/// half a step, or misses it by roundoff, is moved onto stop.
std::vector<double> make_grid(double start, double stop, double step);

SweepResult sweep_p(const ModelParams& params, std::span<const double> p_grid,
                    const SweepInit& init, Method method, const SweepOptions& options = {});

enum class SweepAxis { CoherentCoupling, Drive };

const char* to_string(SweepAxis axis) noexcept;

struct Sweep2DResult {
  SweepAxis axis = SweepAxis::CoherentCoupling;
  std::vector<double> x;
  std::vector<double> p;
  std::vector<double> nbar;  // row-major: nbar[i * p.size() + j] at (x[i], p[j])
  std::vector<bool> converged;

  double at(std::size_t i, std::size_t j) const { return nbar[i * p.size() + j]; }
  std::vector<double> row(std::size_t i) const;
  std::vector<double> column(std::size_t j) const;
};

/// Collective-method steady nbar over the product grid.
Sweep2DResult sweep_2d(const ModelParams& params, SweepAxis axis, std::span<const double> x_grid,
                       std::span<const double> p_grid, const SweepOptions& options = {},
                       const SweepInit& init = {});

struct BistableInterval {
  double p_cmin = 0.0;
  double p_cmax = 0.0;
  bool clamped_lower = false;  // discriminant already negative at p = 0
  bool clamped_upper = false;  // discriminant still negative at p = 1
  bool lower_branch_stable = false;  // branch 2 stable at every probed interior p
  /// Extent of the grid points where branch 2 exists and is stable, for
  /// comparison with the discriminant-based interval.
  std::optional<std::pair<double, double>> stability_window;

  double width() const noexcept { return p_cmax - p_cmin; }
  bool contains(double p) const noexcept { return p >= p_cmin && p <= p_cmax; }
};

inline constexpr double kIntervalScanStep = 1e-3;
inline constexpr double kIntervalBisectTol = 1e-6;

/// Locates the first p-window where the steady-state cubic has three real
/// roots. Throws NoBistability when there is none in [0, 1].
BistableInterval bistable_interval(const ModelParams& params);

enum class BasinLabel { ToN1, ToN2, Undetermined };

const char* to_string(BasinLabel label) noexcept;
BasinLabel parse_basin_label(const std::string& text);

struct BasinGrid {
  std::vector<double> q0_axis;
  std::vector<double> a0_axis;
  std::vector<BasinLabel> labels;  // row-major over (q0, a0)

  BasinLabel at(std::size_t i, std::size_t j) const { return labels[i * a0_axis.size() + j]; }
  std::size_t count(BasinLabel label) const;
};

inline constexpr double kBasinMatchTolerance = 1e-4;

/// Label for a single (possibly complex) initial condition.
BasinLabel classify_initial_condition(const ModelParams& params, double p,
                                      const CollectiveState& init,
                                      const IntegrationControls& controls = sweep_controls());

/// Integrates every initial condition (q0, a0) with real a0 and labels it by
/// the fixed point it settles within kBasinMatchTolerance of.
BasinGrid basin_map(const ModelParams& params, double p, std::span<const double> q0_grid,
                    std::span<const double> a0_grid, const SweepOptions& options = {});

/// The branch switch along N is smaller than along p (about 0.046 at p = 0.4
/// with the default rates), so size scans use a lower threshold.
inline constexpr double kSizeScanJumpThreshold = 0.03;

SweepOptions size_scan_options();

/// Collective steady nbar as a function of the network size.
SweepResult size_scan(const ModelParams& params, double p, std::span<const int> n_grid,
                      const SweepInit& init = {},
                      const SweepOptions& options = size_scan_options());

struct CompareRow {
  double p = 0.0;
  double collective = 0.0;
  double meanfield = 0.0;
  std::optional<double> exact;  // only for N <= 10
};

/// Steady nbar from the collective, mean-field and (small N) exact solvers on
/// the same p grid; every p must give an integer split.
std::vector<CompareRow> compare_methods(const ModelParams& params, std::span<const double> p_grid,
                                        const SweepOptions& options = {},
                                        const SweepInit& init = {});

}  // namespace aging
