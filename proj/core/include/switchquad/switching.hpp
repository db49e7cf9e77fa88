#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace switchquad::switching {

/// Mode `mode` becomes active at `time`.
struct SwitchEvent {
  double time = 0.0;
  std::size_t mode = 0;

  bool operator==(const SwitchEvent&) const = default;
};

/// Piecewise-constant switching signal on [events.front().time, horizon_end].
/// events[0] is the initial mode; every later entry is a switch.
struct SwitchSchedule {
  std::vector<SwitchEvent> events;
  double horizon_end = 0.0;
  double vartheta = 0.0;  // declared average dwell time (s)
  double n0 = 1.0;        // chatter bound

  double start() const { return events.front().time; }
  std::size_t switch_count() const { return events.empty() ? 0 : events.size() - 1; }
  std::size_t mode_at(double t) const;

  bool operator==(const SwitchSchedule&) const = default;
};

/// Throws ConfigError on an empty schedule, non-increasing times, repeated consecutive modes,
/// mode indices >= mode_count, or switches outside the horizon.
void validate(const SwitchSchedule& schedule, std::size_t mode_count);

/// Number of switch instants in [t1, t2). Throws std::out_of_range outside the horizon.
std::size_t count_switches(const SwitchSchedule& schedule, double t1, double t2);

struct AdtWindow {
  double t1 = 0.0;  // first switch in the window
  double t2 = 0.0;  // last switch in the window (the window is [t1, t2 + 0))
  std::size_t count = 0;
  double allowed = 0.0;  // N0 + (t2 - t1) / vartheta
};

struct AdtCertificate {
  bool certified = true;
  std::optional<AdtWindow> witness;  // worst violating window when not certified
};

/// Checks N(t1, t2) <= N0 + (t2 - t1)/vartheta over every window.
///
/// For a window containing switches s_i..s_j, the count is fixed while the length can shrink to
/// s_j - s_i (t1 = s_i, t2 -> s_j from above), so the supremum of N - (t2 - t1)/vartheta is
/// reached on windows whose endpoints are switch instants. Checking all O(n^2) such pairs is
/// therefore exact.
AdtCertificate adt_certify(const SwitchSchedule& schedule, double vartheta, double n0);

/// Average-dwell-time threshold quantities.
struct AdtThreshold {
  double p_max = 0.0;  // max over modes of lambda_max(P)
  double p_min = 0.0;  // min over modes of lambda_min(P)
  double mu = 1.0;
  double varrho = 0.0;
  double kappa = 0.0;
  double vartheta_star = 0.0;
  std::vector<double> mode_p_min;
  std::vector<double> mode_p_max;
};

/// mu = p_max / p_min (1 when all modes share one P, e.g. a single mode), varrho = min lambda_min(Q)/lambda_max(P), kappa = kappa_fraction * varrho,
/// vartheta* = ln(mu) / kappa. Throws std::invalid_argument on bad inputs.
AdtThreshold adt_threshold(std::span<const Eigen::MatrixXd> p_list,
                           std::span<const Eigen::MatrixXd> q_list, double kappa_fraction);

struct PeriodicPattern {
  double period = 0.0;
};

/// `burst_count` switches spaced `burst_spacing` apart starting at `burst_start`,
/// then switches every `slow_gap` seconds.
struct BurstThenSlowPattern {
  double burst_start = 0.0;
  std::size_t burst_count = 0;
  double burst_spacing = 0.0;
  double slow_gap = 0.0;
};

struct ExplicitPattern {
  std::vector<SwitchEvent> events;
};

using SchedulePattern = std::variant<PeriodicPattern, BurstThenSlowPattern, ExplicitPattern>;

/// Builds a schedule on [start, horizon_end], cycling through `mode_cycle` for generated
/// patterns (ignored for explicit lists), and certifies it. Throws AdtViolation with the
/// witness window when the result does not satisfy the ADT inequality.
SwitchSchedule generate_schedule(const SchedulePattern& pattern, double vartheta, double n0,
                                 double start, double horizon_end,
                                 std::span<const std::size_t> mode_cycle);

}  // namespace switchquad::switching
