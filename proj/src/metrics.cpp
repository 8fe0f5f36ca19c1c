#include "msrpa/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <sstream>

namespace msrpa {

namespace {

void require_normal_roles(const Scenario& sc) {
  if (sc.normal_leaders().empty()) {
    throw UndefinedMetric("no normally behaving leader in scenario '" + sc.name + "'");
  }
  if (sc.normal_followers().empty()) {
    throw UndefinedMetric("no normally behaving follower in scenario '" + sc.name + "'");
  }
}

double spread(const std::vector<double>& x, const AgentSet& followers,
              double leader_x) {
  double lo = leader_x;
  double hi = leader_x;
  for (AgentId i : followers) {
    lo = std::min(lo, x[i]);
    hi = std::max(hi, x[i]);
  }
  return hi - lo;
}

std::vector<double> states_of(const StepRecord& step) {
  std::vector<double> x;
  x.reserve(step.agents.size());
  for (const auto& a : step.agents) x.push_back(a.x);
  return x;
}

template <class... Parts>
PropertyResult fail(const Parts&... parts) {
  std::ostringstream out;
  out.precision(17);
  (out << ... << parts);
  return {false, out.str()};
}

}  // namespace

std::vector<double> error_series(const Trace& tr) {
  const auto& sc = tr.scenario;
  require_normal_roles(sc);
  const auto leaders = sc.normal_leaders();
  const auto followers = sc.normal_followers();
  std::vector<double> e;
  e.reserve(tr.steps.size());
  for (const auto& step : tr.steps) {
    double worst = 0.0;
    for (AgentId i : followers) {
      for (AgentId l : leaders) {
        worst = std::max(worst, std::abs(step.agents[i].x - step.agents[l].x));
      }
    }
    e.push_back(worst);
  }
  return e;
}

std::vector<LyapunovPoint> lyapunov_series(const Trace& tr) {
  const auto& sc = tr.scenario;
  require_normal_roles(sc);
  const AgentId leader = sc.normal_leaders().front();
  const auto followers = sc.normal_followers();
  std::vector<LyapunovPoint> out;
  const auto eta = static_cast<std::size_t>(sc.params.eta);
  for (std::size_t k = 0, tau = 0; k < tr.steps.size(); k += eta, ++tau) {
    const auto x = states_of(tr.steps[k]);
    out.push_back({static_cast<std::int64_t>(tau), tr.steps[k].t,
                   spread(x, followers, x[leader])});
  }
  return out;
}

double initial_spread(const Scenario& sc) {
  require_normal_roles(sc);
  const auto states = initial_states(sc);
  std::vector<double> x;
  for (const auto& s : states) x.push_back(s.x);
  return spread(x, sc.normal_followers(), sc.signal.eval(0));
}

std::optional<std::int64_t> finite_time_bound(const Scenario& sc) {
  if (!sc.params.u_max) return std::nullopt;
  const auto eps = tracking_margin(sc.signal, *sc.params.u_max, reference_span(sc));
  if (!eps) return std::nullopt;
  return static_cast<std::int64_t>(std::ceil(initial_spread(sc) / *eps)) + 1;
}

std::optional<std::int64_t> convergence_time(const Trace& tr, double tol) {
  const auto e = error_series(tr);
  std::optional<std::int64_t> since;
  for (std::size_t k = e.size(); k-- > 0;) {
    if (e[k] > tol) break;
    since = tr.steps[k].t;
  }
  return since;
}

MonotonicityResult monotonicity_check(const Trace& tr, double tol) {
  const auto e = error_series(tr);
  for (std::size_t k = 1; k < e.size(); ++k) {
    if (e[k] > e[k - 1] + tol) return {false, tr.steps[k].t};
  }
  return {};
}

PropertyResult check_threshold_safety(const Trace& tr) {
  const auto& sc = tr.scenario;
  for (const auto& ev : tr.acceptances) {
    const double expected = sc.signal.eval(next_update_index(ev.t, sc.params));
    if (std::bit_cast<std::uint64_t>(expected) != std::bit_cast<std::uint64_t>(ev.value)) {
      return fail("agent ", ev.agent, " latched ", ev.value, " at t = ", ev.t,
                  ", reference is ", expected);
    }
  }
  if (!tr.violations.empty()) {
    const auto& v = tr.violations.front();
    return fail(tr.violations.size(), " assumption violation(s); first at t = ", v.t,
                ", agent ", v.agent, " (", violation_name(v.kind), ")");
  }
  return {};
}

PropertyResult check_wavefront(const Trace& tr) {
  const auto& sc = tr.scenario;
  const auto& p = sc.params;
  const auto followers = sc.normal_followers();
  const auto limit = static_cast<std::int64_t>(followers.size());

  std::map<std::pair<AgentId, std::int64_t>, std::int64_t> latch;
  for (const auto& ev : tr.acceptances) {
    latch.emplace(std::pair{ev.agent, next_update_index(ev.t, p)}, ev.offset);
  }
  for (std::int64_t tau = 1; tau * p.eta <= sc.horizon; ++tau) {
    for (AgentId i : followers) {
      const auto it = latch.find({i, tau});
      if (it == latch.end()) {
        return fail("agent ", i, " never latched in period ", tau);
      }
      if (it->second > limit || it->second > p.eta - 1) {
        return fail("agent ", i, " latched at offset ", it->second, " in period ",
                    tau, " (limit ", std::min(limit, p.eta - 1), ")");
      }
    }
  }
  return {};
}

PropertyResult check_order_fidelity(const Trace& tr) {
  const auto& sc = tr.scenario;
  const auto followers = sc.normal_followers();
  const auto leaders = sc.normal_leaders();
  for (std::size_t k = 0; k < tr.steps.size(); ++k) {
    const auto& step = tr.steps[k];
    for (std::size_t j = 1; j < leaders.size(); ++j) {
      if (step.agents[leaders[j]].x != step.agents[leaders[0]].x) {
        return fail("normal leaders ", leaders[0], " and ", leaders[j],
                    " disagree at t = ", step.t);
      }
    }
    if (k == 0 || is_update_step(tr.steps[k - 1].t, sc.params)) continue;
    for (AgentId i : followers) {
      if (step.agents[i].x != tr.steps[k - 1].agents[i].x) {
        return fail("follower ", i, " changed state off the update step at t = ", step.t);
      }
    }
  }
  return {};
}

PropertyResult check_update_inputs(const Trace& tr) {
  const auto& sc = tr.scenario;
  const auto& p = sc.params;
  const auto followers = sc.normal_followers();
  for (std::int64_t tau = 1; tau * p.eta <= sc.horizon; ++tau) {
    const auto& step = tr.at(p.t0 + tau * p.eta - 1);
    const double target = sc.signal.eval(tau);
    for (AgentId i : followers) {
      const auto& a = step.agents[i];
      const double want = control_input(target, a.x, p.u_max);
      if (std::abs(a.u - want) > kTrackingTolerance) {
        return fail("follower ", i, " holds u = ", a.u, " at t = ", step.t,
                    ", expected ", want);
      }
    }
  }
  return {};
}

std::optional<std::int64_t> latest_latch_offset(const Trace& tr) {
  std::optional<std::int64_t> latest;
  for (const auto& ev : tr.acceptances) {
    latest = std::max(latest.value_or(ev.offset), ev.offset);
  }
  return latest;
}

}  // namespace msrpa
