#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "msrpa/graph.hpp"
#include "msrpa/protocol.hpp"
#include "msrpa/signal.hpp"

namespace msrpa {

/// Malformed scenario: overlapping roles, bad indices, inconsistent sizes.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Followers start uniformly in [lo, hi). Draws come from the scenario's
/// "init" stream unless an explicit seed is given.
struct UniformInit {
  double lo = -25.0;
  double hi = 25.0;
  std::optional<std::uint64_t> seed;

  bool operator==(const UniformInit&) const = default;
};

/// One value per follower, in ascending agent order.
struct ExplicitInit {
  std::vector<double> values;

  bool operator==(const ExplicitInit&) const = default;
};

using InitialFollowers = std::variant<UniformInit, ExplicitInit>;

struct Scenario {
  std::string name;
  Digraph graph;
  AgentSet leaders;
  AgentSet followers;
  /// Misbehaving agents; every other agent runs the protocol.
  std::map<AgentId, Behavior> adversaries;
  ProtocolParams params;
  ReferenceSignal signal;
  InitialFollowers initial_followers = UniformInit{};
  std::int64_t horizon = 0;
  std::uint64_t seed = 0;

  /// Throws ScenarioError if roles do not partition the agents, an id is out
  /// of range, an adversary is given a normal behavior, horizon < eta, or
  /// the explicit initial states do not match the follower count.
  void check() const;

  Role role_of(AgentId i) const;
  bool is_adversary(AgentId i) const { return adversaries.count(i) != 0; }
  AgentSet adversary_set() const;
  AgentSet normal_leaders() const;
  AgentSet normal_followers() const;

  bool operator==(const Scenario&) const = default;
};

enum class Hypothesis : std::uint8_t {
  /// Strong (2F+1)-robustness with respect to the leader set.
  robustness,
  /// The adversary set is F-local.
  f_local,
  /// eta > |S_f|.
  eta_exceeds_followers,
  /// Bounded inputs only: the reference never steps by u_max or more.
  input_margin,
};

std::string_view hypothesis_name(Hypothesis h);

struct HypothesisCheck {
  Hypothesis id;
  bool passed = false;
  std::string detail;

  bool operator==(const HypothesisCheck&) const = default;
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;
  /// Certified slack eps, when inputs are bounded and the margin is positive.
  std::optional<double> margin;

  bool all_passed() const;
  const HypothesisCheck* find(Hypothesis h) const;

  bool operator==(const ValidationReport&) const = default;
};

/// Number of reference increments a run of `sc` can observe.
std::int64_t reference_span(const Scenario& sc);

/// Checks every convergence hypothesis. Failures are reported, not thrown;
/// malformed scenarios throw ScenarioError.
ValidationReport validate(const Scenario& sc);

/// State of every agent at t0, in agent order.
std::vector<AgentState> initial_states(const Scenario& sc);

struct AgentSnapshot {
  double x = 0.0;
  double u = 0.0;
  bool in_c = false;
  std::optional<double> accepted;

  bool operator==(const AgentSnapshot&) const = default;
};

struct StepRecord {
  std::int64_t t = 0;
  /// States after the communication phase at t: x(t), u(t), latch.
  std::vector<AgentSnapshot> agents;
  /// Messages sent at t, ordered by (sender, receiver). Empty for the final
  /// snapshot.
  std::vector<Message> messages;

  bool operator==(const StepRecord&) const = default;
};

struct Trace {
  Scenario scenario;
  ValidationReport report;
  /// horizon + 1 records for t0 .. t0 + horizon.
  std::vector<StepRecord> steps;
  std::vector<AcceptanceEvent> acceptances;
  std::vector<ViolationEvent> violations;

  const StepRecord& at(std::int64_t t) const;

  bool operator==(const Trace&) const = default;
};

/// Simulates `sc` for its horizon. Each step t: normal leaders publish
/// f(tau'); normal followers evaluate the messages of t - 1 and latch or hold
/// u; latched followers relay; adversaries act; then every agent advances to
/// t + 1. Messages sent at t are read at t + 1.
Trace run(const Scenario& sc);

/// Runs `sc` twice and compares the traces.
bool replay_check(const Scenario& sc);

}  // namespace msrpa
