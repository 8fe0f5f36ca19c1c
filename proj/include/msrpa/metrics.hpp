#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "msrpa/engine.hpp"

namespace msrpa {

/// Absolute tolerance for exact-tracking assertions.
inline constexpr double kTrackingTolerance = 1e-9;

/// A metric needs at least one normal leader and one normal follower.
class UndefinedMetric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// e(t) = max |x_i(t) - x_l(t)| over normal followers i and normal leaders
/// l, one entry per recorded step (index k is t0 + k).
std::vector<double> error_series(const Trace& tr);

struct LyapunovPoint {
  std::int64_t tau = 0;
  std::int64_t t = 0;
  double value = 0.0;
};

/// V = M - m at every update instant t0 + tau*eta in the trace, where the
/// extremes range over normal followers and the common normal-leader state.
std::vector<LyapunovPoint> lyapunov_series(const Trace& tr);

/// V at t0, computed from the scenario's initial states.
double initial_spread(const Scenario& sc);

/// Number of periods T = ceil(V0 / eps) + 1 after which bounded-input
/// tracking is exact. Empty when the scenario has unbounded inputs or no
/// positive margin.
std::optional<std::int64_t> finite_time_bound(const Scenario& sc);

/// Least t such that e(s) <= tol for every recorded s >= t.
std::optional<std::int64_t> convergence_time(const Trace& tr,
                                             double tol = kTrackingTolerance);

struct MonotonicityResult {
  bool nonincreasing = true;
  std::optional<std::int64_t> first_violation;  ///< t with e(t) > e(t-1) + tol
};

MonotonicityResult monotonicity_check(const Trace& tr,
                                      double tol = kTrackingTolerance);

/// Outcome of a structural check over a trace; `failure` names the first
/// offending step.
struct PropertyResult {
  bool ok = true;
  std::string failure;

  explicit operator bool() const { return ok; }
};

/// Every acceptance latches f(tau') and no violation event was logged.
PropertyResult check_threshold_safety(const Trace& tr);

/// Every normal follower latches in every complete period, at an offset no
/// larger than |normal followers| and before the update step.
PropertyResult check_wavefront(const Trace& tr);

/// Normal followers only change state on update steps; normal leaders agree.
PropertyResult check_order_fidelity(const Trace& tr);

/// At every update step, each normal follower holds the input that moves it
/// to f(tau) (saturated when inputs are bounded).
PropertyResult check_update_inputs(const Trace& tr);

/// Largest acceptance offset seen in any period.
std::optional<std::int64_t> latest_latch_offset(const Trace& tr);

}  // namespace msrpa
