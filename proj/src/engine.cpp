#include "msrpa/engine.hpp"

#include <algorithm>
#include <sstream>

#include "msrpa/rng.hpp"

namespace msrpa {

namespace {

std::string join(const AgentSet& ids) {
  std::ostringstream out;
  out << '{';
  for (std::size_t k = 0; k < ids.size(); ++k) out << (k ? "," : "") << ids[k];
  out << '}';
  return out.str();
}

}  // namespace

void Scenario::check() const {
  const std::size_t n = graph.size();
  if (n == 0) throw ScenarioError("scenario graph has no agents");
  try {
    params.check();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string("params: ") + e.what());
  }

  if (leaders.empty()) throw ScenarioError("roles: leader set is empty");
  if (followers.empty()) throw ScenarioError("roles: follower set is empty");
  std::vector<int> seen(n, 0);
  for (const AgentSet* set : {&leaders, &followers}) {
    if (!std::is_sorted(set->begin(), set->end()) ||
        std::adjacent_find(set->begin(), set->end()) != set->end()) {
      throw ScenarioError("roles: agent sets must be sorted and duplicate-free");
    }
    for (AgentId i : *set) {
      if (i >= n) {
        throw ScenarioError("roles: agent " + std::to_string(i) +
                            " outside [0, " + std::to_string(n) + ")");
      }
      ++seen[i];
    }
  }
  for (AgentId i = 0; i < n; ++i) {
    if (seen[i] != 1) {
      throw ScenarioError(
          "roles: leaders and followers must partition the agents (agent " +
          std::to_string(i) + (seen[i] == 0 ? " has no role)" : " is both leader and follower)"));
    }
  }

  for (const auto& [id, behavior] : adversaries) {
    if (id >= n) {
      throw ScenarioError("adversaries: agent " + std::to_string(id) + " out of range");
    }
    if (is_normal(behavior)) {
      throw ScenarioError("adversaries: agent " + std::to_string(id) +
                          " declared with a normal behavior");
    }
  }

  if (horizon < params.eta) {
    throw ScenarioError("horizon " + std::to_string(horizon) +
                        " is shorter than one period (eta = " +
                        std::to_string(params.eta) + ")");
  }
  if (const auto last = signal.last_index(); last && *last < reference_span(*this)) {
    throw ScenarioError("signal: table needs at least " +
                        std::to_string(reference_span(*this) + 1) + " entries");
  }
  if (const auto* init = std::get_if<ExplicitInit>(&initial_followers);
      init && init->values.size() != followers.size()) {
    throw ScenarioError("initial_followers: expected " +
                        std::to_string(followers.size()) + " values, got " +
                        std::to_string(init->values.size()));
  }
  if (const auto* init = std::get_if<UniformInit>(&initial_followers);
      init && !(init->lo <= init->hi)) {
    throw ScenarioError("initial_followers: uniform bounds need lo <= hi");
  }
}

Role Scenario::role_of(AgentId i) const {
  return std::binary_search(leaders.begin(), leaders.end(), i) ? Role::leader
                                                               : Role::follower;
}

AgentSet Scenario::adversary_set() const {
  AgentSet out;
  for (const auto& entry : adversaries) out.push_back(entry.first);
  return out;
}

AgentSet Scenario::normal_leaders() const {
  AgentSet out;
  for (AgentId i : leaders) {
    if (!is_adversary(i)) out.push_back(i);
  }
  return out;
}

AgentSet Scenario::normal_followers() const {
  AgentSet out;
  for (AgentId i : followers) {
    if (!is_adversary(i)) out.push_back(i);
  }
  return out;
}

std::string_view hypothesis_name(Hypothesis h) {
  switch (h) {
    case Hypothesis::robustness:
      return "robustness";
    case Hypothesis::f_local:
      return "f_local";
    case Hypothesis::eta_exceeds_followers:
      return "eta_exceeds_followers";
    case Hypothesis::input_margin:
      return "input_margin";
  }
  return "unknown";
}

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const HypothesisCheck& c) { return c.passed; });
}

const HypothesisCheck* ValidationReport::find(Hypothesis h) const {
  for (const auto& c : checks) {
    if (c.id == h) return &c;
  }
  return nullptr;
}

std::int64_t reference_span(const Scenario& sc) {
  return (sc.horizon - 1) / sc.params.eta + 1;
}

ValidationReport validate(const Scenario& sc) {
  sc.check();
  ValidationReport report;
  const std::size_t f = sc.params.f;
  const std::size_t r = 2 * f + 1;

  {
    const auto cert = strongly_robust_wrt(sc.graph, sc.leaders, r);
    std::string detail = "strongly " + std::to_string(r) + "-robust w.r.t. leaders";
    if (!cert.holds) detail = "not " + detail + "; stalled set " + join(cert.witness);
    report.checks.push_back({Hypothesis::robustness, cert.holds, std::move(detail)});
  }
  {
    const auto adversaries = sc.adversary_set();
    const bool local = is_f_local(sc.graph, adversaries, f);
    report.checks.push_back(
        {Hypothesis::f_local, local,
         "adversaries " + join(adversaries) + (local ? " are " : " are not ") +
             std::to_string(f) + "-local"});
  }
  {
    const auto followers = static_cast<std::int64_t>(sc.followers.size());
    const bool ok = sc.params.eta > followers;
    report.checks.push_back(
        {Hypothesis::eta_exceeds_followers, ok,
         "eta = " + std::to_string(sc.params.eta) + (ok ? " > " : " <= ") +
             "|S_f| = " + std::to_string(followers)});
  }
  if (sc.params.u_max) {
    const double step = max_step(sc.signal, reference_span(sc));
    report.margin = tracking_margin(sc.signal, *sc.params.u_max, reference_span(sc));
    std::ostringstream detail;
    detail.precision(17);
    detail << "max reference step " << step << " vs u_max " << *sc.params.u_max;
    if (report.margin) detail << "; margin " << *report.margin;
    report.checks.push_back({Hypothesis::input_margin, report.margin.has_value(), detail.str()});
  }
  return report;
}

std::vector<AgentState> initial_states(const Scenario& sc) {
  sc.check();
  const std::size_t n = sc.graph.size();
  std::vector<AgentState> states(n);
  const double start = sc.signal.eval(0);

  std::vector<double> follower_x;
  if (const auto* init = std::get_if<ExplicitInit>(&sc.initial_followers)) {
    follower_x = init->values;
  } else {
    const auto& uni = std::get<UniformInit>(sc.initial_followers);
    auto rng = CounterRng::for_tag(uni.seed.value_or(sc.seed), "init");
    for (std::size_t k = 0; k < sc.followers.size(); ++k) {
      follower_x.push_back(rng.uniform(uni.lo, uni.hi));
    }
  }

  for (AgentId i = 0; i < n; ++i) {
    states[i].id = i;
    states[i].role = sc.role_of(i);
    states[i].behavior = states[i].role == Role::leader ? Behavior{NormalLeader{}}
                                                        : Behavior{NormalFollower{}};
    states[i].x = start;
  }
  for (std::size_t k = 0; k < sc.followers.size(); ++k) {
    states[sc.followers[k]].x = follower_x[k];
  }
  for (const auto& [id, behavior] : sc.adversaries) states[id].behavior = behavior;
  return states;
}

const StepRecord& Trace::at(std::int64_t t) const {
  const std::int64_t k = t - scenario.params.t0;
  if (k < 0 || k >= static_cast<std::int64_t>(steps.size())) {
    throw std::out_of_range("trace has no record for t = " + std::to_string(t));
  }
  return steps[static_cast<std::size_t>(k)];
}

namespace {

std::vector<AgentSnapshot> snapshot(const std::vector<AgentState>& states) {
  std::vector<AgentSnapshot> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back({s.x, s.u, s.in_c, s.accepted});
  return out;
}

}  // namespace

Trace run(const Scenario& sc) {
  Trace trace;
  trace.scenario = sc;
  trace.report = validate(sc);

  const auto& g = sc.graph;
  const auto& p = sc.params;
  const std::size_t n = g.size();
  auto states = initial_states(sc);

  std::vector<CounterRng> rngs;
  rngs.reserve(n);
  for (AgentId i = 0; i < n; ++i) rngs.push_back(CounterRng::for_agent(sc.seed, i));

  std::vector<std::vector<Message>> inbox(n);
  trace.steps.reserve(static_cast<std::size_t>(sc.horizon) + 1);

  for (std::int64_t k = 0; k < sc.horizon; ++k) {
    const std::int64_t t = p.t0 + k;
    std::vector<AgentState> next(states);
    // outgoing[i]: one value per out-neighbor of i, or none.
    std::vector<std::vector<double>> outgoing(n);

    for (AgentId i = 0; i < n; ++i) {
      const auto out_degree = g.out_neighbors(i).size();
      auto& state = states[i];
      if (std::holds_alternative<NormalLeader>(state.behavior)) {
        auto step = leader_step(state, t, p, sc.signal);
        next[i] = std::move(step.next);
        outgoing[i].assign(out_degree, step.broadcast);
      } else if (std::holds_alternative<NormalFollower>(state.behavior)) {
        auto received = follower_receive(state, inbox[i], t, p);
        state = std::move(received.state);
        if (received.accepted) trace.acceptances.push_back(*received.accepted);
        for (auto& v : received.violations) trace.violations.push_back(std::move(v));
        if (const auto value = follower_broadcast(state)) {
          outgoing[i].assign(out_degree, *value);
        }
        next[i] = follower_state_update(state, t, p);
      } else {
        auto step = adversary_step(state, t, out_degree, rngs[i]);
        next[i] = std::move(step.next);
        outgoing[i] = std::move(step.values);
      }
    }

    StepRecord record{t, snapshot(states), {}};
    for (auto& box : inbox) box.clear();
    for (AgentId i = 0; i < n; ++i) {
      const auto receivers = g.out_neighbors(i);
      for (std::size_t j = 0; j < outgoing[i].size(); ++j) {
        const Message m{i, receivers[j], outgoing[i][j], t};
        record.messages.push_back(m);
        inbox[m.receiver].push_back(m);
      }
    }
    trace.steps.push_back(std::move(record));
    states = std::move(next);
  }
  trace.steps.push_back({p.t0 + sc.horizon, snapshot(states), {}});
  return trace;
}

bool replay_check(const Scenario& sc) { return run(sc) == run(sc); }

}  // namespace msrpa
