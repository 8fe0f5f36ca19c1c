#include "msrpa/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace msrpa {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

double ReferenceSignal::eval(std::int64_t tau) const {
  if (tau < 0) {
    throw std::out_of_range("reference signal evaluated at negative index " +
                            std::to_string(tau));
  }
  const auto t = static_cast<double>(tau);
  return std::visit(
      overloaded{
          [&](const Sinusoid& s) { return s.amplitude * std::sin(t * s.angular_rate); },
          [](const ConstantSignal& c) { return c.value; },
          [&](const Ramp& r) { return r.slope * t + r.intercept; },
          [&](const TableSignal& table) {
            if (static_cast<std::size_t>(tau) >= table.values.size()) {
              throw std::out_of_range(
                  "reference table has " + std::to_string(table.values.size()) +
                  " entries, index " + std::to_string(tau) + " requested");
            }
            return table.values[static_cast<std::size_t>(tau)];
          },
      },
      kind_);
}

std::optional<std::int64_t> ReferenceSignal::last_index() const {
  if (const auto* table = std::get_if<TableSignal>(&kind_)) {
    return static_cast<std::int64_t>(table->values.size()) - 1;
  }
  return std::nullopt;
}

double max_step(const ReferenceSignal& sig, std::int64_t tau_max) {
  if (tau_max < 1) throw std::invalid_argument("max_step needs tau_max >= 1");
  double worst = 0.0;
  double prev = sig.eval(0);
  for (std::int64_t tau = 0; tau < tau_max; ++tau) {
    const double next = sig.eval(tau + 1);
    worst = std::max(worst, std::abs(next - prev));
    prev = next;
  }
  return worst;
}

std::optional<double> max_step_closed_form(const ReferenceSignal& sig) {
  return std::visit(
      overloaded{
          [](const Sinusoid& s) -> std::optional<double> {
            // |A sin(w(t+1)) - A sin(wt)| = 2|A| |sin(w/2)| |cos(w(t + 1/2))|
            const double half = std::remainder(s.angular_rate, 2.0 * std::numbers::pi) / 2.0;
            return 2.0 * std::abs(s.amplitude) * std::abs(std::sin(half));
          },
          [](const ConstantSignal&) -> std::optional<double> { return 0.0; },
          [](const Ramp& r) -> std::optional<double> { return std::abs(r.slope); },
          [](const TableSignal&) -> std::optional<double> { return std::nullopt; },
      },
      sig.kind());
}

std::optional<double> tracking_margin(const ReferenceSignal& sig, double u_max,
                                      std::int64_t tau_max) {
  if (!(u_max > 0.0)) throw std::invalid_argument("u_max must be positive");
  const double eps = u_max - max_step(sig, tau_max);
  if (eps > 0.0) return eps;
  return std::nullopt;
}

}  // namespace msrpa
