#include <doctest.h>

#include <numbers>

#include "msrpa/engine.hpp"
#include "msrpa/metrics.hpp"
#include "test_support.hpp"

using namespace msrpa;
using msrpa::testing::Rng;

namespace {

// The 14-agent network used throughout: undirected 5-circulant, leaders
// 0..4, F = 2, eta = 10, reference 10 sin(tau / pi).
Scenario circulant_scenario(AgentSet adversaries, std::optional<double> u_max = {}) {
  Scenario sc;
  sc.name = "circulant";
  sc.graph = k_circulant(14, 5, true);
  sc.leaders = {0, 1, 2, 3, 4};
  sc.followers = {5, 6, 7, 8, 9, 10, 11, 12, 13};
  for (AgentId a : adversaries) sc.adversaries[a] = Malicious{UniformSource{-50, 50}};
  sc.params = {2, 10, 0, u_max};
  sc.signal = ReferenceSignal::sinusoid(10.0, 1.0 / std::numbers::pi);
  sc.initial_followers = UniformInit{-25.0, 25.0, std::nullopt};
  sc.horizon = 400;
  sc.seed = 1;
  return sc;
}

Scenario two_agents(double c, double x0) {
  Scenario sc;
  const std::vector<Digraph::Edge> e{{0, 1}};
  sc.graph = Digraph(2, e);
  sc.leaders = {0};
  sc.followers = {1};
  sc.params = {0, 2, 0, std::nullopt};
  sc.signal = ReferenceSignal::constant(c);
  sc.initial_followers = ExplicitInit{{x0}};
  sc.horizon = 12;
  return sc;
}

}  // namespace

TEST_CASE("scenario structure checks") {
  auto sc = circulant_scenario({0, 4});
  CHECK_NOTHROW(sc.check());

  SUBCASE("overlapping roles") {
    sc.followers.insert(sc.followers.begin(), 4);
    CHECK_THROWS_AS(sc.check(), ScenarioError);
  }
  SUBCASE("missing role") {
    sc.followers.pop_back();
    CHECK_THROWS_AS(sc.check(), ScenarioError);
  }
  SUBCASE("horizon shorter than a period") {
    sc.horizon = 9;
    CHECK_THROWS_AS(sc.check(), ScenarioError);
  }
  SUBCASE("explicit initial states must match the follower count") {
    sc.initial_followers = ExplicitInit{{1.0, 2.0}};
    CHECK_THROWS_AS(sc.check(), ScenarioError);
  }
  SUBCASE("adversary with a normal behavior") {
    sc.adversaries[7] = NormalFollower{};
    CHECK_THROWS_AS(sc.check(), ScenarioError);
  }
  SUBCASE("table signal too short for the horizon") {
    sc.signal = ReferenceSignal::table({0.0, 1.0});
    CHECK_THROWS_AS(sc.check(), ScenarioError);
  }
}

TEST_CASE("validate") {
  SUBCASE("14-agent network with adversaries {0, 4} meets every hypothesis") {
    const auto report = validate(circulant_scenario({0, 4}));
    CHECK(report.all_passed());
    CHECK(report.checks.size() == 3);
  }
  SUBCASE("eta = 9 fails only the period-length hypothesis") {
    auto sc = circulant_scenario({0, 4});
    sc.params.eta = 9;
    const auto report = validate(sc);
    CHECK_FALSE(report.find(Hypothesis::eta_exceeds_followers)->passed);
    CHECK(report.find(Hypothesis::robustness)->passed);
    CHECK(report.find(Hypothesis::f_local)->passed);
  }
  SUBCASE("three adjacent adversaries break F-locality") {
    const auto report = validate(circulant_scenario({5, 6, 7}));
    CHECK_FALSE(report.find(Hypothesis::f_local)->passed);
    CHECK(report.find(Hypothesis::eta_exceeds_followers)->passed);
  }
  SUBCASE("bounded inputs add the margin check") {
    const auto report = validate(circulant_scenario({3, 10}, 10.1));
    REQUIRE(report.find(Hypothesis::input_margin) != nullptr);
    CHECK(report.find(Hypothesis::input_margin)->passed);
    CHECK(report.margin.has_value());
    const auto tight = validate(circulant_scenario({3, 10}, 3.0));
    CHECK_FALSE(tight.find(Hypothesis::input_margin)->passed);
  }
  SUBCASE("too few leaders for 2F+1") {
    auto sc = circulant_scenario({});
    sc.leaders = {0, 1, 2, 3};
    sc.followers = {4, 5, 6, 7, 8, 9, 10, 11, 12, 13};
    CHECK_FALSE(validate(sc).find(Hypothesis::robustness)->passed);
  }
}

TEST_CASE("leader to single follower converges after one period") {
  const auto tr = run(two_agents(3.75, -8.0));
  for (const auto& step : tr.steps) {
    if (step.t >= 2) CHECK(step.agents[1].x == 3.75);
    if (step.t < 2) CHECK(step.agents[1].x == -8.0);
  }
}

TEST_CASE("trace shape and message causality") {
  Rng rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const auto sc = testing::random_any_scenario(rng);
    const auto tr = run(sc);
    REQUIRE(tr.steps.size() == static_cast<std::size_t>(sc.horizon) + 1);
    CHECK(tr.steps.back().messages.empty());
    for (std::size_t k = 0; k < tr.steps.size(); ++k) {
      const auto& step = tr.steps[k];
      CHECK(step.t == sc.params.t0 + static_cast<std::int64_t>(k));
      CHECK(step.agents.size() == sc.graph.size());
      for (std::size_t m = 0; m < step.messages.size(); ++m) {
        const auto& msg = step.messages[m];
        CHECK(msg.t == step.t);
        CHECK(sc.graph.has_edge(msg.sender, msg.receiver));
        if (m > 0) {
          const auto& prev = step.messages[m - 1];
          CHECK(std::pair{prev.sender, prev.receiver} < std::pair{msg.sender, msg.receiver});
        }
      }
    }
  }
}

TEST_CASE("engine agrees with an independent re-simulation") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const auto sc = trial % 2 ? testing::random_any_scenario(rng) : testing::random_valid_scenario(rng);
    const auto tr = run(sc);
    const auto ref = testing::resimulate(sc, tr);
    REQUIRE(ref.size() == tr.steps.size());
    bool same = true;
    for (std::size_t k = 0; k < ref.size() && same; ++k) {
      for (AgentId i = 0; i < sc.graph.size(); ++i) {
        if (sc.is_adversary(i)) continue;
        const auto& got = tr.steps[k].agents[i];
        const auto& want = ref[k][i];
        if (std::abs(got.x - want.x) > 1e-9 || std::abs(got.u - want.u) > 1e-9 ||
            (sc.role_of(i) == Role::follower && got.in_c != want.latched)) {
          same = false;
          MESSAGE("trial ", trial, " mismatch at t = ", tr.steps[k].t, " agent ", i);
        }
      }
    }
    CHECK(same);
  }
}

TEST_CASE("no follower relays on the first step of a period") {
  const auto tr = run(circulant_scenario({0, 4}));
  const auto& sc = tr.scenario;
  for (const auto& step : tr.steps) {
    if (period_offset(step.t, sc.params) != 0) continue;
    for (const auto& m : step.messages) {
      CHECK_FALSE((sc.role_of(m.sender) == Role::follower && !sc.is_adversary(m.sender)));
    }
  }
}

TEST_CASE("structural invariants on hypothesis-satisfying runs") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto sc = testing::random_valid_scenario(rng);
    const auto tr = run(sc);
    CAPTURE(trial);
    const auto order = check_order_fidelity(tr);
    CHECK_MESSAGE(order.ok, order.failure);
    const auto inputs = check_update_inputs(tr);
    CHECK_MESSAGE(inputs.ok, inputs.failure);
    const auto wave = check_wavefront(tr);
    CHECK_MESSAGE(wave.ok, wave.failure);
    const auto safety = check_threshold_safety(tr);
    CHECK_MESSAGE(safety.ok, safety.failure);
  }
}

TEST_CASE("replay determinism") {
  SUBCASE("byzantine adversaries replay bit-exactly") {
    auto sc = circulant_scenario({0, 4});
    sc.adversaries[0] = Byzantine{UniformSource{-50, 50}};
    sc.adversaries[4] = Byzantine{UniformSource{-50, 50}};
    CHECK(replay_check(sc));
  }
  SUBCASE("different seeds change adversary messages") {
    auto a = circulant_scenario({0, 4});
    a.adversaries[0] = Byzantine{UniformSource{-50, 50}};
    auto b = a;
    b.seed = 2;
    const auto ta = run(a);
    const auto tb = run(b);
    bool differs = false;
    for (std::size_t k = 0; k < ta.steps.size(); ++k) {
      for (std::size_t m = 0; m < ta.steps[k].messages.size(); ++m) {
        const auto& ma = ta.steps[k].messages[m];
        if (ma.sender == 0 && ma.value != tb.steps[k].messages[m].value) differs = true;
      }
    }
    CHECK(differs);
  }
  SUBCASE("seed is irrelevant without adversaries and with explicit states") {
    auto a = circulant_scenario({});
    a.initial_followers = ExplicitInit{{-3, 1, 4, -1, 5, -9, 2, 6, -5}};
    auto b = a;
    b.seed = 999;
    const auto ta = run(a);
    const auto tb = run(b);
    CHECK(ta.steps == tb.steps);
  }
}

TEST_CASE("initial states") {
  const auto sc = circulant_scenario({0, 4});
  const auto states = initial_states(sc);
  for (AgentId l : sc.leaders) CHECK(states[l].x == 0.0);
  for (AgentId i : sc.followers) {
    CHECK(states[i].x >= -25.0);
    CHECK(states[i].x < 25.0);
    CHECK(states[i].u == 0.0);
  }
  CHECK(std::holds_alternative<Malicious>(states[0].behavior));
  CHECK(std::holds_alternative<NormalLeader>(states[1].behavior));
  CHECK(std::holds_alternative<NormalFollower>(states[5].behavior));
}
