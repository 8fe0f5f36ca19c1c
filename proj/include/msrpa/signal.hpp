#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace msrpa {

struct Sinusoid {
  double amplitude = 0.0;
  double angular_rate = 0.0;  ///< radians per update index

  bool operator==(const Sinusoid&) const = default;
};

struct ConstantSignal {
  double value = 0.0;

  bool operator==(const ConstantSignal&) const = default;
};

struct Ramp {
  double slope = 0.0;
  double intercept = 0.0;

  bool operator==(const Ramp&) const = default;
};

struct TableSignal {
  std::vector<double> values;

  bool operator==(const TableSignal&) const = default;
};

/// Reference value the leaders publish for each update index tau >= 0.
class ReferenceSignal {
 public:
  using Kind = std::variant<Sinusoid, ConstantSignal, Ramp, TableSignal>;

  ReferenceSignal() : kind_(ConstantSignal{}) {}
  explicit ReferenceSignal(Kind kind) : kind_(std::move(kind)) {}

  static ReferenceSignal sinusoid(double amplitude, double angular_rate) {
    return ReferenceSignal(Sinusoid{amplitude, angular_rate});
  }
  static ReferenceSignal constant(double value) {
    return ReferenceSignal(ConstantSignal{value});
  }
  static ReferenceSignal ramp(double slope, double intercept = 0.0) {
    return ReferenceSignal(Ramp{slope, intercept});
  }
  static ReferenceSignal table(std::vector<double> values) {
    return ReferenceSignal(TableSignal{std::move(values)});
  }

  const Kind& kind() const noexcept { return kind_; }

  /// f(tau). Throws std::out_of_range for negative tau or past the end of a
  /// table.
  double eval(std::int64_t tau) const;

  /// Largest tau accepted by eval, if bounded.
  std::optional<std::int64_t> last_index() const;

  bool operator==(const ReferenceSignal&) const = default;

 private:
  Kind kind_;
};

/// max |f(tau+1) - f(tau)| over tau in [0, tau_max), by exhaustive scan.
/// tau_max must be at least 1.
double max_step(const ReferenceSignal& sig, std::int64_t tau_max);

/// Analytic upper bound on the per-index increment, where one exists
/// (constant, ramp, sinusoid). Tables have none.
std::optional<double> max_step_closed_form(const ReferenceSignal& sig);

/// Slack eps = u_max - max_step(sig, tau_max) in the bounded-input tracking
/// condition |f(tau+1) - f(tau)| <= u_max - eps. Empty when eps would not be
/// strictly positive.
std::optional<double> tracking_margin(const ReferenceSignal& sig, double u_max,
                                      std::int64_t tau_max);

}  // namespace msrpa
