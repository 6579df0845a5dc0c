#include <doctest.h>

#include <cmath>

#include "rdz/metrics.hpp"
#include "rdz/rng.hpp"

using namespace rdz;

namespace {

struct World {
  std::shared_ptr<const Grid> grid = std::make_shared<Grid>(60, 60, 10.0);
  PropagationModel model = [] {
    PropagationModel m;
    m.kind = PathLossKind::log_distance;
    return m;
  }();
  RfModel rf{grid, model, 1.5, 0.0};
  RdzState state;

  World() {
    state.grid = grid;
    state.zone = ZoneBoundary::rect(10, 10, 49, 49);
  }

  Transmitter& add(std::string id, Role role, GridPos pos, double h,
                   double power, double gain, double freq) {
    Transmitter tx{std::move(id), role, pos, h, power, gain, freq, true, {}};
    state.fleet.push_back(tx);
    return state.fleet.back();
  }
};

StepMetrics step(bool valid, bool active) {
  StepMetrics m;
  m.step_valid = valid;
  m.mobile_active = active;
  return m;
}

}  // namespace

TEST_CASE("leakage_from_field: synthetic cells") {
  Grid g(20, 20, 10.0);
  const ZoneMask mask = make_zone_mask(ZoneBoundary::rect(5, 5, 14, 14), g);

  FieldArray field = FieldArray::Zero(20, 20);
  SUBCASE("empty field") {
    const auto [p, l] = leakage_from_field(field, mask, -95.0);
    CHECK(p == 0);
    CHECK(l == kNegInf);
  }
  SUBCASE("single out-of-zone cell at exactly -90 dBm") {
    field(0, 0) = dbm_to_mw(-90.0);
    const auto [p, l] = leakage_from_field(field, mask, -95.0);
    CHECK(p == 1);
    CHECK(l == doctest::Approx(-90.0));
  }
  SUBCASE("two leaking cells sum in the linear domain") {
    field(0, 0) = dbm_to_mw(-90.0);
    field(19, 19) = dbm_to_mw(-90.0);
    const auto [p, l] = leakage_from_field(field, mask, -95.0);
    CHECK(p == 2);
    CHECK(l == doctest::Approx(-86.9897).epsilon(0.0001));
  }
  SUBCASE("in-zone power never counts") {
    field(10, 10) = dbm_to_mw(-10.0);
    const auto [p, l] = leakage_from_field(field, mask, -95.0);
    CHECK(p == 0);
    CHECK(l == kNegInf);
  }
  SUBCASE("at-threshold cells are not above the threshold") {
    field(0, 0) = dbm_to_mw(-95.0);
    const auto [p, l] = leakage_from_field(field, mask, -95.0);
    CHECK(p == 0);
    CHECK(l == kNegInf);
  }
}

TEST_CASE("leakage_metrics uses enabled test transmitters only") {
  World w;
  w.add("loud", Role::stationary_test, {11, 30}, 10, 40, 4.9, 3600);
  w.add("ep", Role::endpoint, {30, 30}, 1.8, 40, -2, 3600);  // never radiates

  const auto [p1, l1] = leakage_metrics(w.state, w.rf);
  CHECK(p1 > 0);

  w.state.at("loud").enabled = false;
  const auto [p2, l2] = leakage_metrics(w.state, w.rf);
  CHECK(p2 == 0);
  CHECK(l2 == kNegInf);
}

TEST_CASE("leakage metrics are pure functions of state") {
  World w;
  w.add("loud", Role::stationary_test, {12, 20}, 10, 38, 4.9, 3600);
  const auto a = leakage_metrics(w.state, w.rf);
  const RdzState clone = w.state;
  const auto b = leakage_metrics(clone, w.rf);
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
}

TEST_CASE("mobile_sinr examples") {
  World w;
  auto& mobile = w.add("m", Role::mobile_test, {30, 30}, 30, 30, 4.9, 3600);
  auto& ep = w.add("ep", Role::endpoint, {33, 30}, 1.8, 0, -2, 3600);
  w.state.config.noise_floor_dbm = -100.0;

  // Tune the power so the endpoint hears exactly -60 dBm.
  const double loss = path_loss_db(w.model, *w.grid, mobile.pos,
                                   mobile.height_m, ep.pos, ep.height_m, 3600.0);
  mobile.tx_power_dbm = -60.0 + loss - mobile.gain_dbi - ep.gain_dbi;
  CHECK(mobile_sinr(w.state, "m", w.rf) == doctest::Approx(40.0).epsilon(1e-9));

  // Signal equal to the noise floor: 0 dB.
  mobile.tx_power_dbm = -100.0 + loss - mobile.gain_dbi - ep.gain_dbi;
  CHECK(mobile_sinr(w.state, "m", w.rf) == doctest::Approx(0.0));

  // Adding a co-channel interferer strictly decreases SINR, and matches a
  // direct recomputation of the ratio.
  mobile.tx_power_dbm = -60.0 + loss - mobile.gain_dbi - ep.gain_dbi;
  const double before = mobile_sinr(w.state, "m", w.rf);
  auto& jam = w.add("jam", Role::stationary_test, {36, 30}, 8, 30, 4.9, 3600);
  const double after = mobile_sinr(w.state, "m", w.rf);
  CHECK(after < before);
  const double jam_mw = dbm_to_mw(
      w.rf.link_dbm(jam, ep.pos, ep.height_m, ep.gain_dbi));
  const double expected =
      db_ratio(dbm_to_mw(-60.0), jam_mw + dbm_to_mw(-100.0));
  CHECK(after == doctest::Approx(expected).epsilon(1e-9));

  // Off-channel transmitters do not interfere.
  jam.frequency_mhz = 3610.0;
  CHECK(mobile_sinr(w.state, "m", w.rf) == doctest::Approx(before));
}

TEST_CASE("mobile_sinr picks the best-hearing endpoint and needs endpoints") {
  World w;
  auto& mobile = w.add("m", Role::mobile_test, {30, 30}, 30, 30, 4.9, 3600);
  CHECK_THROWS_AS(mobile_sinr(w.state, "m", w.rf), std::runtime_error);

  w.add("near", Role::endpoint, {32, 30}, 1.8, 0, -2, 3600);
  w.add("far", Role::endpoint, {50, 50}, 1.8, 0, -2, 3600);
  const double s = mobile_sinr(w.state, "m", w.rf);
  const double near_dbm = w.rf.link_dbm(mobile, {32, 30}, 1.8, -2);
  const double expected =
      db_ratio(dbm_to_mw(near_dbm), dbm_to_mw(-100.0));
  CHECK(s == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("uptime definition") {
  std::vector<StepMetrics> steps;
  CHECK_THROWS_AS(uptime(steps), std::invalid_argument);

  steps = {step(true, true), step(true, true), step(true, true)};
  CHECK(uptime(steps) == 1.0);

  steps = {step(false, true), step(false, false)};
  CHECK(uptime(steps) == 1.0);  // no valid steps: vacuous convention

  steps = {step(true, true), step(true, false), step(false, false),
           step(true, true)};
  CHECK(uptime(steps) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("step_reward: examples, sentinels, clipping") {
  RewardInputs in;
  in.interference_threshold_dbm = -70.0;
  in.leakage_threshold_dbm = -95.0;
  in.zone_area_cells = 40000.0;
  in.clip_bound = 10.0;

  SUBCASE("active step, SINR 30, nothing measured") {
    in.enabled_steps = 1;
    in.sinr_db = 30.0;
    in.has_sinr = true;
    CHECK(step_reward(in) == doctest::Approx(11.0));
  }
  SUBCASE("all-zero terms") {
    CHECK(step_reward(in) == doctest::Approx(0.0));
  }
  SUBCASE("leak count equal to the zone area contributes exactly -1") {
    in.leakage_points = in.zone_area_cells;
    CHECK(step_reward(in) == doctest::Approx(-1.0));
  }
  SUBCASE("literal signs: interference divided by a negative threshold") {
    in.interference_dbm = -35.0;  // -I/I_T = -(-35)/(-70) = -0.5
    CHECK(step_reward(in) == doctest::Approx(-0.5));
  }
  SUBCASE("normalized signs penalize threshold exceedance") {
    in.normalize_signs = true;
    in.interference_dbm = -50.0;  // 20 dB over: -(I - I_T)/|I_T|
    CHECK(step_reward(in) == doctest::Approx(-20.0 / 70.0));
  }
  SUBCASE("terms clip at the bound") {
    in.enabled_steps = 1;       // +10
    in.sinr_db = 600.0;         // S/30 = 20 -> clipped to 10
    in.has_sinr = true;
    in.leakage_points = 100.0 * in.zone_area_cells;  // -100 -> clipped to -10
    CHECK(step_reward(in) == doctest::Approx(10.0 + 10.0 - 10.0));
  }
  SUBCASE("zero thresholds and zero area are rejected") {
    in.interference_threshold_dbm = 0.0;
    CHECK_THROWS_AS(step_reward(in), std::invalid_argument);
    in.interference_threshold_dbm = -70.0;
    in.zone_area_cells = 0.0;
    CHECK_THROWS_AS(step_reward(in), std::invalid_argument);
  }
}

TEST_CASE("step_reward is monotone non-increasing in leakage points") {
  RngStream rng(23);
  for (int i = 0; i < 200; ++i) {
    RewardInputs in;
    in.enabled_steps = rng.uniform_int(2);
    in.sinr_db = rng.uniform(-20, 60);
    in.has_sinr = rng.bernoulli(0.8);
    in.interference_dbm = rng.bernoulli(0.3) ? kNegInf : rng.uniform(-120, -40);
    in.leaked_power_dbm = rng.bernoulli(0.3) ? kNegInf : rng.uniform(-120, -40);
    in.zone_area_cells = rng.uniform(100, 160000);
    in.leakage_points = rng.uniform(0, 5000);
    const double r1 = step_reward(in);
    in.leakage_points += rng.uniform(1, 5000);
    const double r2 = step_reward(in);
    CHECK(r2 <= r1 + 1e-12);
  }
}

TEST_CASE("summarize aggregates in the linear domain") {
  std::vector<StepMetrics> steps(3);
  steps[0].leakage_points = 2;
  steps[0].leaked_power_dbm = -90.0;
  steps[0].interference_dbm = -80.0;
  steps[0].sinr_db = 30.0;
  steps[0].sinr_sampled = true;
  steps[0].mobile_active = true;
  steps[1].leakage_points = 1;
  steps[1].leaked_power_dbm = -90.0;
  steps[1].interference_dbm = kNegInf;
  steps[1].sinr_db = 34.0;
  steps[1].sinr_sampled = true;
  steps[1].mobile_active = true;
  steps[2].mobile_active = true;  // nothing measured this step

  const TrialSummary s = summarize(steps);
  CHECK(s.total_leakage_points == 3);
  CHECK(s.total_leaked_power_dbm == doctest::Approx(-86.9897).epsilon(1e-4));
  CHECK(s.total_interference_dbm == doctest::Approx(-80.0).epsilon(1e-9));
  CHECK(s.sinr_samples.size() == 2);
  CHECK(s.sinr_mean_db == doctest::Approx(32.0));
  CHECK(s.sinr_std_db == doctest::Approx(2.0));
  CHECK(s.uptime == 1.0);
  CHECK(s.total_reward == doctest::Approx(steps[0].reward + steps[1].reward +
                                          steps[2].reward));
}
