#include "msrpa/protocol.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>

namespace msrpa {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

std::string_view role_name(Role role) {
  return role == Role::leader ? "leader" : "follower";
}

double draw(const ValueSource& source, CounterRng& rng) {
  return std::visit(
      overloaded{
          [&](const UniformSource& s) { return rng.uniform(s.lo, s.hi); },
          [&](const TableSource& s) {
            if (s.values.empty()) {
              throw std::invalid_argument("table value source is empty");
            }
            const auto index = rng.counter() % s.values.size();
            rng.next_u64();
            return s.values[index];
          },
      },
      source);
}

std::string_view behavior_tag(const Behavior& b) {
  return std::visit(
      overloaded{
          [](const NormalLeader&) { return std::string_view("normal_leader"); },
          [](const NormalFollower&) { return std::string_view("normal_follower"); },
          [](const Malicious&) { return std::string_view("malicious"); },
          [](const Byzantine&) { return std::string_view("byzantine"); },
          [](const FaultyFixed&) { return std::string_view("faulty_fixed"); },
          [](const StateHijack&) { return std::string_view("state_hijack"); },
      },
      b);
}

bool is_normal(const Behavior& b) {
  return std::holds_alternative<NormalLeader>(b) ||
         std::holds_alternative<NormalFollower>(b);
}

std::string_view violation_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::competing_values:
      return "competing_values";
    case ViolationKind::conflicting_after_latch:
      return "conflicting_after_latch";
  }
  return "unknown";
}

void ProtocolParams::check() const {
  if (eta < 1) throw std::invalid_argument("eta must be at least 1");
  if (u_max && !(*u_max > 0.0)) {
    throw std::invalid_argument("u_max must be strictly positive");
  }
}

std::int64_t period_offset(std::int64_t t, const ProtocolParams& p) {
  const std::int64_t r = (t - p.t0) % p.eta;
  return r < 0 ? r + p.eta : r;
}

std::int64_t next_update_index(std::int64_t t, const ProtocolParams& p) {
  return floor_div(t - p.t0, p.eta) + 1;
}

bool is_update_step(std::int64_t t, const ProtocolParams& p) {
  return t >= p.t0 && period_offset(t, p) == p.eta - 1;
}

double control_input(double c, double x, std::optional<double> u_max) {
  const double delta = c - x;
  if (!u_max || std::abs(delta) <= *u_max) return delta;
  // (c - x) u_max / |c - x|, evaluated without rounding.
  return std::copysign(*u_max, delta);
}

LeaderStep leader_step(const AgentState& a, std::int64_t t,
                       const ProtocolParams& p, const ReferenceSignal& sig) {
  if (!std::holds_alternative<NormalLeader>(a.behavior)) {
    throw ContractViolation("leader_step applied to agent " +
                            std::to_string(a.id) + " with behavior " +
                            std::string(behavior_tag(a.behavior)));
  }
  LeaderStep step{a, sig.eval(next_update_index(t, p))};
  if (is_update_step(t, p)) step.next.x = sig.eval((t - p.t0 + 1) / p.eta);
  return step;
}

ReceiveResult follower_receive(const AgentState& a,
                               std::span<const Message> inbox, std::int64_t t,
                               const ProtocolParams& p) {
  if (!std::holds_alternative<NormalFollower>(a.behavior)) {
    throw ContractViolation("follower_receive applied to agent " +
                            std::to_string(a.id) + " with behavior " +
                            std::string(behavior_tag(a.behavior)));
  }
  ReceiveResult result{a, std::nullopt, {}};
  const std::int64_t offset = period_offset(t, p);
  if (offset < 1) return result;

  // Distinct senders per value, keyed by bit pattern so equality is exact.
  std::map<std::uint64_t, std::vector<AgentId>> support;
  for (const Message& m : inbox) {
    if (m.receiver != a.id) continue;
    support[std::bit_cast<std::uint64_t>(m.value)].push_back(m.sender);
  }
  std::vector<double> qualifying;
  for (auto& [bits, senders] : support) {
    senders = make_agent_set(std::move(senders));
    if (senders.size() >= p.f + 1) qualifying.push_back(std::bit_cast<double>(bits));
  }
  if (qualifying.empty()) return result;
  std::sort(qualifying.begin(), qualifying.end());

  if (a.in_c) {
    const std::uint64_t latched = std::bit_cast<std::uint64_t>(*a.accepted);
    const bool conflict = std::any_of(qualifying.begin(), qualifying.end(), [&](double v) {
      return std::bit_cast<std::uint64_t>(v) != latched;
    });
    if (conflict) {
      result.violations.push_back(
          {t, a.id, ViolationKind::conflicting_after_latch, qualifying});
    }
    return result;
  }

  if (qualifying.size() > 1) {
    result.violations.push_back({t, a.id, ViolationKind::competing_values, qualifying});
  }
  const double c = qualifying.front();
  result.state.accepted = c;
  result.state.in_c = true;
  result.state.u = control_input(c, a.x, p.u_max);
  result.accepted = AcceptanceEvent{t, a.id, c, offset};
  return result;
}

AgentState follower_state_update(const AgentState& a, std::int64_t t,
                                 const ProtocolParams& p) {
  if (!std::holds_alternative<NormalFollower>(a.behavior)) {
    throw ContractViolation("follower_state_update applied to agent " +
                            std::to_string(a.id));
  }
  AgentState next = a;
  if (is_update_step(t, p)) {
    next.x = a.x + a.u;
    next.accepted.reset();
    next.in_c = false;
  }
  return next;
}

std::optional<double> follower_broadcast(const AgentState& a) {
  if (a.in_c) return a.accepted;
  return std::nullopt;
}

AdversaryStep adversary_step(const AgentState& a, std::int64_t /*t*/,
                             std::size_t out_degree, CounterRng& rng) {
  AdversaryStep step{a, {}};
  std::visit(
      overloaded{
          [&](const Malicious& m) {
            step.values.assign(out_degree, draw(m.source, rng));
            step.next.x = draw(m.source, rng);
          },
          [&](const Byzantine& b) {
            step.values.reserve(out_degree);
            for (std::size_t k = 0; k < out_degree; ++k) {
              step.values.push_back(draw(b.source, rng));
            }
            step.next.x = draw(b.source, rng);
          },
          [&](const FaultyFixed& f) {
            step.values.assign(out_degree, f.value);
            step.next.x = f.value;
          },
          [&](const StateHijack& h) {
            step.values.assign(out_degree, a.x);
            step.next.x = draw(h.source, rng);
          },
          [&](const auto&) {
            throw ContractViolation("adversary_step applied to normal agent " +
                                    std::to_string(a.id));
          },
      },
      a.behavior);
  return step;
}

}  // namespace msrpa
