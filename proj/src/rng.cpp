#include "msrpa/rng.hpp"

namespace msrpa {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kAgentDomain = 0x6167656e74000000ULL;  // "agent"
}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CounterRng CounterRng::for_agent(std::uint64_t seed, std::uint64_t agent) {
  return CounterRng(mix64(mix64(seed) ^ mix64(kAgentDomain + agent)));
}

CounterRng CounterRng::for_tag(std::uint64_t seed, std::string_view tag) {
  // FNV-1a over the tag keeps tag streams disjoint from agent streams.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return CounterRng(mix64(mix64(seed) ^ h));
}

std::uint64_t CounterRng::next_u64() {
  const std::uint64_t out = mix64(key_ ^ mix64(counter_ * kGolden));
  ++counter_;
  return out;
}

double CounterRng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(double lo, double hi) {
  return lo + (hi - lo) * next_unit();
}

}  // namespace msrpa
