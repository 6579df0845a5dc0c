#include <doctest.h>

#include "rdz/policies.hpp"

using namespace rdz;

namespace {

struct World {
  std::shared_ptr<const Grid> grid = std::make_shared<Grid>(40, 40, 10.0);
  PropagationModel model = [] {
    PropagationModel m;
    m.kind = PathLossKind::log_distance;
    return m;
  }();
  RfModel rf{grid, model, 1.5, 0.0};
  RdzState state;

  World() {
    state.grid = grid;
    state.zone = ZoneBoundary::rect(5, 5, 34, 34);
  }

  Transmitter& add(std::string id, Role role, GridPos pos, double h,
                   double power, double gain, double freq) {
    Transmitter tx{std::move(id), role, pos, h, power, gain, freq, true, {}};
    state.fleet.push_back(tx);
    return state.fleet.back();
  }
};

}  // namespace

TEST_CASE("policy parsing and naming") {
  CHECK(Policy::parse("htn").kind == PolicyKind::htn);
  CHECK(Policy::parse("naive").kind == PolicyKind::naive);
  CHECK(Policy::parse("random").kind == PolicyKind::random);
  const Policy s = Policy::parse("htn-0.2");
  CHECK(s.kind == PolicyKind::stochastic_htn);
  CHECK(s.epsilon == doctest::Approx(0.2));
  CHECK(s.name() == "htn-0.2");
  CHECK(Policy::parse("htn-0").kind == PolicyKind::stochastic_htn);
  CHECK_THROWS_AS(Policy::parse("htn-1.5"), std::invalid_argument);
  CHECK_THROWS_AS(Policy::parse("ppo"), std::invalid_argument);
}

TEST_CASE("naive executes nothing, ever") {
  World w;
  w.add("loud", Role::stationary_test, {6, 20}, 10, 40, 4.9, 3600);
  w.add("m", Role::mobile_test, {20, 20}, 30, 10, 4.9, 3600);
  const RdzDomain domain = build_domain(w.rf);
  RngStream rng(1);
  const std::string before = state_to_json(w.state);
  const StepDecision d =
      decide_and_act(Policy{PolicyKind::naive}, w.state, rng, domain);
  CHECK(d.executed.empty());
  CHECK(d.planned.empty());
  CHECK(state_to_json(w.state) == before);
}

TEST_CASE("stochastic htn with epsilon 0 matches htn exactly") {
  World w;
  w.add("a", Role::stationary_test, {7, 12}, 10, 30, 4.9, 3600);
  w.add("b", Role::stationary_test, {20, 20}, 10, -10, 4.9, 3610);
  w.add("m", Role::mobile_test, {18, 18}, 30, 10, 4.9, 3600);
  const RdzDomain domain = build_domain(w.rf);

  RngStream scatter(5);
  for (int i = 0; i < 200; ++i) {
    RdzState base = w.state;
    for (auto& tx : base.fleet) {
      tx.pos = {scatter.uniform(0, 39), scatter.uniform(0, 39)};
      tx.enabled = scatter.bernoulli(0.7);
      tx.tx_power_dbm = scatter.uniform(-20, 40);
    }
    RdzState s1 = base, s2 = base;
    RngStream r1(9000 + i), r2(9000 + i);
    const StepDecision d1 =
        decide_and_act(Policy{PolicyKind::htn}, s1, r1, domain);
    const StepDecision d2 = decide_and_act(
        Policy{PolicyKind::stochastic_htn, 0.0}, s2, r2, domain);
    REQUIRE(d1.executed.size() == d2.executed.size());
    CHECK(d2.skipped.empty());
    for (std::size_t k = 0; k < d1.executed.size(); ++k)
      CHECK(to_string(d1.executed[k]) == to_string(d2.executed[k]));
    CHECK(state_to_json(s1) == state_to_json(s2));
  }
}

TEST_CASE("stochastic skips are per-action and recorded") {
  World w;
  // Three leaking transmitters produce a three-disable plan.
  w.add("l1", Role::stationary_test, {6, 10}, 10, 40, 4.9, 3600);
  w.add("l2", Role::stationary_test, {6, 20}, 10, 40, 4.9, 3600);
  w.add("l3", Role::stationary_test, {6, 30}, 10, 40, 4.9, 3600);
  const RdzDomain domain = build_domain(w.rf);

  int skipped_total = 0, runs = 400;
  for (int i = 0; i < runs; ++i) {
    RdzState s = w.state;
    RngStream rng(100 + i);
    const StepDecision d = decide_and_act(
        Policy{PolicyKind::stochastic_htn, 0.3}, s, rng, domain);
    CHECK(d.planned.size() == 3);
    CHECK(d.executed.size() + d.skipped.size() == d.planned.size());
    skipped_total += static_cast<int>(d.skipped.size());
    // Skipped actions left their transmitters enabled.
    for (const auto& a : d.skipped) CHECK(s.at(a.target_id).enabled);
    for (const auto& a : d.executed) CHECK_FALSE(s.at(a.target_id).enabled);
  }
  // Mean skip fraction should be near epsilon = 0.3.
  const double frac = static_cast<double>(skipped_total) / (3.0 * runs);
  CHECK(frac > 0.25);
  CHECK(frac < 0.35);
}

TEST_CASE("random draws the four canonical actions uniformly") {
  World w;
  w.add("m", Role::mobile_test, {20, 20}, 30, -20, 4.9, 3600);
  const RdzDomain domain = build_domain(w.rf);

  RngStream rng(4242);
  int counts[4] = {0, 0, 0, 0};
  const int draws = 10000;
  RdzState s = w.state;
  for (int i = 0; i < draws; ++i) {
    const StepDecision d =
        decide_and_act(Policy{PolicyKind::random}, s, rng, domain);
    REQUIRE(d.planned.size() == 1);
    REQUIRE(d.executed.size() == 1);
    ++counts[static_cast<int>(d.planned[0].kind)];
  }
  for (int k = 0; k < 4; ++k) {
    const double f = static_cast<double>(counts[k]) / draws;
    CHECK(f > 0.23);
    CHECK(f < 0.27);
  }
}

TEST_CASE("planning failure is reported, not fatal") {
  World w;
  w.add("m", Role::mobile_test, {20, 20}, 30, -20, 4.9, 3600);
  // A broken domain whose root always dead-ends.
  RdzDomain broken;
  broken.add_primitive(
      "never", [](const RdzState&, const auto&) { return false; },
      [](RdzState&, const auto&) {});
  broken.add_method(
      "maintain_rdz", "only",
      [](const RdzState&, const auto&) { return true; },
      [](const RdzState&, const auto&) {
        return std::vector<RdzTask>{htn::task<DomainArg>("never")};
      });

  RngStream rng(3);
  const std::string before = state_to_json(w.state);
  const StepDecision d =
      decide_and_act(Policy{PolicyKind::htn}, w.state, rng, broken);
  CHECK(d.plan_failed);
  CHECK(d.executed.empty());
  CHECK(state_to_json(w.state) == before);
}

TEST_CASE("htn execution applies the whole plan with zero discrepancies") {
  World w;
  w.add("l1", Role::stationary_test, {6, 10}, 10, 40, 4.9, 3600);
  w.add("l2", Role::stationary_test, {34, 30}, 10, 40, 4.9, 3600);
  w.add("m", Role::mobile_test, {20, 20}, 30, -10, 4.9, 3600);
  const RdzDomain domain = build_domain(w.rf);
  RngStream rng(8);
  const StepDecision d =
      decide_and_act(Policy{PolicyKind::htn}, w.state, rng, domain);
  CHECK(d.discrepancies == 0);
  CHECK(d.executed.size() == d.planned.size());
  CHECK_FALSE(w.state.at("l1").enabled);
  CHECK_FALSE(w.state.at("l2").enabled);
}
