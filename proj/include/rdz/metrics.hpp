#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rdz/state.hpp"

namespace rdz {

struct StepMetrics {
  long step = 0;
  long leakage_points = 0;        // P
  double leaked_power_dbm = kNegInf;   // L, -inf when nothing leaks
  double interference_dbm = kNegInf;   // I, observed (respects enabled flag)
  double sinr_db = 0.0;           // S, meaningful only when sinr_sampled
  bool sinr_sampled = false;
  bool mobile_active = false;
  bool step_valid = true;
  double reward = 0.0;
};

struct TrialSummary {
  long total_leakage_points = 0;
  double total_leaked_power_dbm = kNegInf;   // dBm of the linear per-step sum
  double total_interference_dbm = kNegInf;
  std::vector<double> sinr_samples;
  double sinr_mean_db = 0.0;  // over samples; 0 when none
  double sinr_std_db = 0.0;
  double uptime = 1.0;
  double total_reward = 0.0;
};

// Inputs of the per-step policy score; thresholds are signed dBm values and
// the formula is applied literally unless normalize_signs is set, in which
// case the interference/leakage terms become threshold-exceedance ratios.
struct RewardInputs {
  double enabled_steps = 0.0;           // U (0/1 per step)
  double sinr_db = 0.0;                 // S
  bool has_sinr = false;
  double interference_dbm = kNegInf;    // I (-inf = nothing measured)
  double interference_threshold_dbm = -70.0;  // I_T
  double leakage_points = 0.0;          // P
  double zone_area_cells = 1.0;         // A
  double leaked_power_dbm = kNegInf;    // L (-inf = nothing measured)
  double leakage_threshold_dbm = -95.0;  // L_T
  double clip_bound = 10.0;
  bool normalize_signs = false;
};

// Count and total power (dBm of linear sum) of out-of-zone cells whose
// aggregate power exceeds the leakage threshold. Pure core shared by the
// state-level metric and the tests.
std::pair<long, double> leakage_from_field(const FieldArray& power_mw,
                                           const ZoneMask& mask,
                                           double threshold_dbm);

// Aggregate all-frequency map of the enabled test transmitters, scanned
// against L_T outside the zone. Returns (P, L).
std::pair<long, double> leakage_metrics(const RdzState& state, RfModel& rf);

// SINR of the mobile at the endpoint that hears it best: signal over the
// linear sum of enabled co-channel test-transmitter power at that endpoint
// plus the noise floor. Throws when no endpoints are configured.
double mobile_sinr(const RdzState& state, const std::string& mobile_id,
                   RfModel& rf);

// (valid and active) / valid; 1.0 when no step is valid. Throws on empty.
double uptime(std::span<const StepMetrics> steps);

// Eq-style five-term score: 10*U + S/30 - I/I_T - P/A - L/L_T, each term
// clipped to [-clip_bound, clip_bound]; -inf inputs contribute 0.
double step_reward(const RewardInputs& in);

TrialSummary summarize(std::span<const StepMetrics> steps);

}  // namespace rdz
