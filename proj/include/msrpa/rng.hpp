#pragma once

#include <cstdint>
#include <string_view>

namespace msrpa {

/// Counter-based generator: the k-th draw of a stream is a pure function of
/// (key, k), so streams are reproducible regardless of the order in which
/// agents are stepped.
class CounterRng {
 public:
  CounterRng() = default;
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  /// Stream for one agent of a scenario.
  static CounterRng for_agent(std::uint64_t seed, std::uint64_t agent);
  /// Stream for a named purpose (e.g. "init") of a scenario.
  static CounterRng for_tag(std::uint64_t seed, std::string_view tag);

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double next_unit();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);

  std::uint64_t counter() const noexcept { return counter_; }
  std::uint64_t key() const noexcept { return key_; }

  bool operator==(const CounterRng&) const = default;

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace msrpa
