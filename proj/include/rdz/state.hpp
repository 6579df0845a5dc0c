#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rdz/actions.hpp"
#include "rdz/fleet.hpp"
#include "rdz/rf_model.hpp"
#include "rdz/rng.hpp"

namespace rdz {

struct RdzConfig {
  double leakage_threshold_dbm = -95.0;       // L_T
  double interference_threshold_dbm = -70.0;  // I_T
  std::vector<double> channels_mhz = {3600.0, 3610.0, 3620.0};
  double noise_floor_dbm = -100.0;
  double probe_height_m = 1.5;   // leakage-map measurement probe
  double probe_gain_dbi = 0.0;
  bool endpoints_as_victims = true;  // endpoints count as interference victims
  bool normalize_reward_signs = false;
  double reward_clip = 10.0;
  double move_distance_cells = 5.0;
  bool measure_before_act = false;
};

// Full world state. Plain value; copying a state is the digital-twin clone
// (the grid is immutable and shared, everything mutable is deep-copied).
struct RdzState {
  std::shared_ptr<const Grid> grid;
  ZoneBoundary zone = ZoneBoundary::rect(0, 0, 1, 1);
  RdzConfig config;
  std::vector<Transmitter> fleet;
  long step = 0;
  std::optional<ZoneBoundary> incumbent_request;

  const Transmitter* find(const std::string& id) const;
  Transmitter* find(const std::string& id);
  const Transmitter& at(const std::string& id) const;  // throws on unknown id
  Transmitter& at(const std::string& id);
  const Transmitter* first_mobile() const;

  void validate() const;  // fleet id uniqueness, zone vs grid, channel set
};

enum class ViolationKind { leakage, interference };

struct Violation {
  ViolationKind kind;
  std::string offender_id;
  double magnitude_db = 0.0;  // dB above the threshold, > 0
};

// Leakage check for one test transmitter, evaluated as if it were enabled
// (twin gating of re-enables depends on this). Violation iff any cell
// outside the zone receives more than L_T from this transmitter alone.
std::optional<Violation> detect_leakage(const RdzState& state,
                                        const std::string& tx_id, RfModel& rf);

// Total power a mobile induces at the enabled co-channel fleet members
// inside the zone (endpoints included when configured), dBm of the linear
// sum; -inf when there are no receivers or the mobile is disabled.
// as_if_enabled ignores the mobile's flag (compliance probes).
double interference_total_dbm(const RdzState& state,
                              const std::string& mobile_id, RfModel& rf,
                              bool as_if_enabled = false);

// Violation iff the observed interference total exceeds I_T. Twin gating of
// enables works through this: the candidate twin has the flag set.
std::optional<Violation> detect_interference(const RdzState& state,
                                             const std::string& mobile_id,
                                             RfModel& rf);

// Applies a primitive action to the state in place. Throws on unknown ids
// or invalid polygons. idle is a no-op; enable/disable are idempotent.
void apply_action(RdzState& state, const AtomicAction& action);

// Fresh clone with the action applied; the source state is untouched.
RdzState twin_apply(const RdzState& state, const AtomicAction& action);

// One mobility tick: every mobile moves move_distance_cells, either toward
// its waypoint (cleared on arrival) or along a uniformly random angle, with
// the result clamped to grid bounds. Increments the step counter.
RdzState advance_mobility(const RdzState& state, RngStream& rng);

// Debug snapshot round-trip (documented JSON shape).
std::string state_to_json(const RdzState& state);
RdzState state_from_json(const std::string& text,
                         std::shared_ptr<const Grid> grid);

}  // namespace rdz
