#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rdz/harness.hpp"

using namespace rdz;

namespace {

// Small self-contained scenario: one leaking stationary, one quiet mobile.
const char* kScenarioText = R"(
# test scenario
[grid]
width = 60
height = 60
cell_size = 10.0

[zone]
rect = 10 10 49 49

[model]
kind = log-distance
path_loss_exponent = 3.0

[config]
leakage_threshold_dbm = -95
interference_threshold_dbm = -70
channels_mhz = 3600 3610 3620
noise_floor_dbm = -100

[fleet]
# id role x y height power gain freq enabled
ep0  endpoint        30 25 1.8 0  -2  3600 on
loud stationary_test 12 30 10  40 4.9 3600 on
mob0 mobile_test     30 30 30  -20 4.9 3610 on

[experiment]
steps = 12
trials = 3
move_distance = 5
seed = 321
policies = htn,naive
)";

Scenario test_scenario() {
  std::istringstream in(kScenarioText);
  Scenario sc = Scenario::parse(in, "");
  sc.content_hash = 42;
  return sc;
}

}  // namespace

TEST_CASE("scenario parsing") {
  const Scenario sc = test_scenario();
  CHECK(sc.width == 60);
  CHECK(sc.cell_size_m == 10.0);
  CHECK(sc.zone_polygon.size() == 4);
  CHECK(sc.fleet.size() == 3);
  CHECK(sc.fleet[1].id == "loud");
  CHECK(sc.fleet[1].tx_power_dbm == 40.0);
  CHECK(sc.fleet[2].role == Role::mobile_test);
  CHECK(sc.steps_per_trial == 12);
  CHECK(sc.trials == 3);
  CHECK(sc.config.move_distance_cells == 5.0);
  REQUIRE(sc.policies.size() == 2);
  CHECK(sc.policies[0].kind == PolicyKind::htn);
  CHECK(sc.policies[1].kind == PolicyKind::naive);

  const auto grid = sc.build_grid();
  CHECK(grid->width() == 60);
  const RdzState s0 = sc.initial_state(grid);
  CHECK(s0.fleet.size() == 3);
  CHECK(s0.step == 0);
}

TEST_CASE("scenario rejects malformed input") {
  const auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return Scenario::parse(in, "");
  };
  CHECK_THROWS(parse("[grid]\nwidth = 0\n"));
  CHECK_THROWS(parse("[zone]\nrect = 1 2 3\n"));
  CHECK_THROWS(parse("[fleet]\nf1 stationary_test 1 2 3\n"));
  CHECK_THROWS(parse("[experiment]\nsteps = 0\n"));
  CHECK_THROWS(parse("stray = value\n"));
  // A mobile without any endpoint cannot record SINR.
  CHECK_THROWS(parse(
      "[zone]\nrect = 0 0 9 9\n[grid]\nwidth=20\nheight=20\ncell_size=10\n"
      "[fleet]\nm mobile_test 5 5 30 20 4.9 3600 on\n"));
}

TEST_CASE("buildings stamp the elevation raster") {
  std::istringstream in(
      "[grid]\nwidth = 20\nheight = 20\ncell_size = 10\n"
      "building = 3 4 6 8 25\n"
      "[zone]\nrect = 0 0 19 19\n");
  const Scenario sc = Scenario::parse(in, "");
  const auto grid = sc.build_grid();
  CHECK(grid->elevation_at(3, 4) == 25.0);
  CHECK(grid->elevation_at(6, 8) == 25.0);
  CHECK(grid->elevation_at(2, 4) == 0.0);
  CHECK(grid->max_elevation() == 25.0);
}

TEST_CASE("run_step: quiescent world measures clean and idles") {
  Scenario sc = test_scenario();
  sc.fleet[1].tx_power_dbm = -20.0;  // nothing leaks now
  const auto grid = sc.build_grid();
  RfModel rf = sc.make_rf_model(grid);
  const RdzDomain domain = build_domain(rf);

  RdzState state = sc.initial_state(grid);
  RngStream mob(1), pol(2);
  const StepRecord rec =
      run_step(state, Policy{PolicyKind::htn}, mob, pol, rf, domain);
  CHECK(rec.metrics.leakage_points == 0);
  CHECK(rec.metrics.leaked_power_dbm == kNegInf);
  CHECK(rec.metrics.interference_dbm == kNegInf);  // off-channel mobile
  CHECK(rec.metrics.step_valid);
  CHECK(rec.metrics.mobile_active);
  CHECK(rec.metrics.step == 1);
  REQUIRE(rec.decision.executed.size() == 1);
  CHECK(rec.decision.executed[0].kind == ActionKind::idle);
}

TEST_CASE("naive records the leak; htn disables the offender same step") {
  const Scenario sc = test_scenario();
  const auto grid = sc.build_grid();
  RfModel rf = sc.make_rf_model(grid);
  const RdzDomain domain = build_domain(rf);

  {
    RdzState state = sc.initial_state(grid);
    RngStream mob(1), pol(2);
    const StepRecord rec =
        run_step(state, Policy{PolicyKind::naive}, mob, pol, rf, domain);
    CHECK(rec.metrics.leakage_points > 0);
    CHECK(rec.decision.executed.empty());
    CHECK(state.at("loud").enabled);
  }
  {
    RdzState state = sc.initial_state(grid);
    RngStream mob(1), pol(2);
    const StepRecord rec =
        run_step(state, Policy{PolicyKind::htn}, mob, pol, rf, domain);
    // Sensed, disabled, and measured clean within the same step.
    CHECK_FALSE(state.at("loud").enabled);
    CHECK(rec.metrics.leakage_points == 0);
    const bool disabled_loud =
        std::any_of(rec.decision.executed.begin(), rec.decision.executed.end(),
                    [](const AtomicAction& a) {
                      return a.kind == ActionKind::disable &&
                             a.target_id == "loud";
                    });
    CHECK(disabled_loud);
  }
}

TEST_CASE("measure_before_act flag credits the pre-act reading") {
  Scenario sc = test_scenario();
  sc.config.measure_before_act = true;
  const auto grid = sc.build_grid();
  RfModel rf = sc.make_rf_model(grid);
  const RdzDomain domain = build_domain(rf);

  RdzState state = sc.initial_state(grid);
  RngStream mob(1), pol(2);
  const StepRecord rec =
      run_step(state, Policy{PolicyKind::htn}, mob, pol, rf, domain);
  CHECK(rec.metrics.leakage_points > 0);       // measured before mitigation
  CHECK_FALSE(state.at("loud").enabled);       // still mitigated
}

TEST_CASE("shared mobility trajectories across policies") {
  const Scenario sc = test_scenario();
  const ExperimentReport report =
      run_experiment(sc, {Policy{PolicyKind::htn}, Policy{PolicyKind::naive},
                          Policy{PolicyKind::random}});
  REQUIRE(report.trials.size() == 9);
  for (int trial = 0; trial < 3; ++trial) {
    const TrialRecord* base = nullptr;
    for (const auto& t : report.trials) {
      if (t.trial != trial) continue;
      if (!base) {
        base = &t;
        continue;
      }
      REQUIRE(t.steps.size() == base->steps.size());
      CHECK(t.mobility_seed == base->mobility_seed);
      for (std::size_t s = 0; s < t.steps.size(); ++s) {
        CHECK(t.steps[s].mobile_pos.x == base->steps[s].mobile_pos.x);
        CHECK(t.steps[s].mobile_pos.y == base->steps[s].mobile_pos.y);
      }
    }
  }
}

TEST_CASE("trial summaries equal independent re-aggregation of the steps") {
  const Scenario sc = test_scenario();
  const ExperimentReport report =
      run_experiment(sc, {Policy{PolicyKind::naive}});
  for (const auto& t : report.trials) {
    long points = 0;
    double leaked_mw = 0, interference_mw = 0, reward = 0;
    long valid = 0, active_valid = 0;
    for (const auto& s : t.steps) {
      points += s.metrics.leakage_points;
      if (std::isfinite(s.metrics.leaked_power_dbm))
        leaked_mw += dbm_to_mw(s.metrics.leaked_power_dbm);
      if (std::isfinite(s.metrics.interference_dbm))
        interference_mw += dbm_to_mw(s.metrics.interference_dbm);
      reward += s.metrics.reward;
      if (s.metrics.step_valid) {
        ++valid;
        if (s.metrics.mobile_active) ++active_valid;
      }
    }
    CHECK(t.summary.total_leakage_points == points);
    CHECK(t.summary.total_leaked_power_dbm ==
          doctest::Approx(mw_to_dbm(leaked_mw)));
    CHECK(t.summary.total_reward == doctest::Approx(reward));
    const double expected_uptime =
        valid == 0 ? 1.0
                   : static_cast<double>(active_valid) / static_cast<double>(valid);
    CHECK(t.summary.uptime == doctest::Approx(expected_uptime));
  }
}

TEST_CASE("experiments are byte-deterministic under a fixed seed") {
  const Scenario sc = test_scenario();
  const std::vector<Policy> policies = {Policy{PolicyKind::htn},
                                        Policy{PolicyKind::random}};
  const ExperimentReport a = run_experiment(sc, policies);
  const ExperimentReport b = run_experiment(sc, policies);
  std::ostringstream csv_a, csv_b, sum_a, sum_b;
  write_steps_csv(csv_a, a);
  write_steps_csv(csv_b, b);
  write_summary_csv(sum_a, a);
  write_summary_csv(sum_b, b);
  CHECK(csv_a.str() == csv_b.str());
  CHECK(sum_a.str() == sum_b.str());
  CHECK(csv_a.str().find("policy,trial,step") == 0);
}

TEST_CASE("bundled scenarios load and validate") {
  const Scenario leak = Scenario::load(std::string(RDZ_SCENARIO_DIR) +
                                       "/leakage.scenario");
  CHECK(leak.width == 400);
  CHECK(leak.steps_per_trial == 50);
  CHECK(leak.trials == 5);
  int stationary = 0, mobile = 0, endpoints = 0;
  for (const auto& tx : leak.fleet) {
    if (tx.role == Role::stationary_test) ++stationary;
    if (tx.role == Role::mobile_test) ++mobile;
    if (tx.role == Role::endpoint) ++endpoints;
  }
  CHECK(stationary == 9);  // one partition, all on 3600
  CHECK(mobile == 1);
  CHECK(endpoints == 10);
  for (const auto& tx : leak.fleet)
    if (is_test_role(tx.role)) CHECK(tx.frequency_mhz == 3600.0);

  const Scenario intf = Scenario::load(std::string(RDZ_SCENARIO_DIR) +
                                       "/interference.scenario");
  int on_3600 = 0, on_3610 = 0;
  for (const auto& tx : intf.fleet) {
    if (tx.role != Role::stationary_test) continue;
    if (tx.frequency_mhz == 3600.0) ++on_3600;
    if (tx.frequency_mhz == 3610.0) ++on_3610;
  }
  CHECK(on_3600 == 9);  // two partitions, 18 nodes total
  CHECK(on_3610 == 9);
  CHECK(intf.model.kind == PathLossKind::terrain_aware);
  CHECK(intf.build_grid()->max_elevation() > 0.0);
}
