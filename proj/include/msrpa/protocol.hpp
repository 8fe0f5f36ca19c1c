#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

#include "msrpa/graph.hpp"
#include "msrpa/rng.hpp"
#include "msrpa/signal.hpp"

namespace msrpa {

/// Raised when a transition function is applied to the wrong kind of agent.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class Role : std::uint8_t { leader, follower };

std::string_view role_name(Role role);

// Sources of adversarial values.

/// Uniform draws over [lo, hi) from the agent's private stream.
struct UniformSource {
  double lo = -50.0;
  double hi = 50.0;

  bool operator==(const UniformSource&) const = default;
};

/// Deterministic values, consumed in order and cycled.
struct TableSource {
  std::vector<double> values;

  bool operator==(const TableSource&) const = default;
};

using ValueSource = std::variant<UniformSource, TableSource>;

double draw(const ValueSource& source, CounterRng& rng);

// Behaviors.

struct NormalLeader {
  bool operator==(const NormalLeader&) const = default;
};
struct NormalFollower {
  bool operator==(const NormalFollower&) const = default;
};
/// Off-protocol state, one false value sent to every out-neighbor.
struct Malicious {
  ValueSource source;
  bool operator==(const Malicious&) const = default;
};
/// Off-protocol state, an independent false value per out-neighbor.
struct Byzantine {
  ValueSource source;
  bool operator==(const Byzantine&) const = default;
};
/// Stuck at a constant state which it also sends.
struct FaultyFixed {
  double value = 0.0;
  bool operator==(const FaultyFixed&) const = default;
};
/// State overwritten from its source; honestly reports that state.
struct StateHijack {
  ValueSource source;
  bool operator==(const StateHijack&) const = default;
};

using Behavior = std::variant<NormalLeader, NormalFollower, Malicious,
                              Byzantine, FaultyFixed, StateHijack>;

std::string_view behavior_tag(const Behavior& b);
bool is_normal(const Behavior& b);

struct ProtocolParams {
  std::size_t f = 0;
  std::int64_t eta = 1;
  std::int64_t t0 = 0;
  /// Absent means unbounded inputs.
  std::optional<double> u_max;

  /// Throws std::invalid_argument unless eta >= 1 and u_max > 0 when set.
  void check() const;

  bool operator==(const ProtocolParams&) const = default;
};

/// (t - t0) mod eta: position of t inside its period.
std::int64_t period_offset(std::int64_t t, const ProtocolParams& p);
/// floor((t - t0) / eta) + 1: index of the next state update.
std::int64_t next_update_index(std::int64_t t, const ProtocolParams& p);
/// True when t - t0 = tau * eta - 1 for some tau >= 1, i.e. x(t+1) is an
/// updated state.
bool is_update_step(std::int64_t t, const ProtocolParams& p);

/// Input that moves x toward c: c - x when unbounded, otherwise
/// (c - x) u_max / max(u_max, |c - x|).
double control_input(double c, double x, std::optional<double> u_max);

struct Message {
  AgentId sender = 0;
  AgentId receiver = 0;
  double value = 0.0;
  std::int64_t t = 0;

  bool operator==(const Message&) const = default;
};

struct AgentState {
  AgentId id = 0;
  Role role = Role::follower;
  Behavior behavior = NormalFollower{};
  double x = 0.0;
  double u = 0.0;
  std::optional<double> accepted;
  bool in_c = false;

  bool operator==(const AgentState&) const = default;
};

struct AcceptanceEvent {
  std::int64_t t = 0;
  AgentId agent = 0;
  double value = 0.0;
  std::int64_t offset = 0;  ///< period_offset(t)

  bool operator==(const AcceptanceEvent&) const = default;
};

enum class ViolationKind : std::uint8_t {
  /// Several distinct values reached the F+1 threshold in one inbox.
  competing_values,
  /// A different value reached the threshold after the agent latched.
  conflicting_after_latch,
};

std::string_view violation_name(ViolationKind kind);

struct ViolationEvent {
  std::int64_t t = 0;
  AgentId agent = 0;
  ViolationKind kind = ViolationKind::competing_values;
  std::vector<double> values;

  bool operator==(const ViolationEvent&) const = default;
};

struct LeaderStep {
  AgentState next;   ///< state at t + 1
  double broadcast;  ///< value sent to every out-neighbor at t
};

/// Normal leader at time t: publishes f(tau') and takes the value f(tau)
/// at the end of each period.
LeaderStep leader_step(const AgentState& a, std::int64_t t,
                       const ProtocolParams& p, const ReferenceSignal& sig);

struct ReceiveResult {
  AgentState state;
  std::optional<AcceptanceEvent> accepted;
  std::vector<ViolationEvent> violations;
};

/// Evaluates the inbox delivered at t (messages sent at t - 1). A value
/// carried by at least F+1 distinct senders is latched and sets u; with no
/// such value u is held. Evaluation starts at the second step of a period.
/// Values are compared bitwise.
ReceiveResult follower_receive(const AgentState& a,
                               std::span<const Message> inbox, std::int64_t t,
                               const ProtocolParams& p);

/// Advances a normal follower from t to t + 1: x += u on the update step,
/// and the latch clears when t + 1 opens a new period.
AgentState follower_state_update(const AgentState& a, std::int64_t t,
                                 const ProtocolParams& p);

/// The latched value, sent while the agent is in C.
std::optional<double> follower_broadcast(const AgentState& a);

struct AdversaryStep {
  AgentState next;             ///< state at t + 1
  std::vector<double> values;  ///< one per out-neighbor, in ascending id order
};

AdversaryStep adversary_step(const AgentState& a, std::int64_t t,
                             std::size_t out_degree, CounterRng& rng);

}  // namespace msrpa
