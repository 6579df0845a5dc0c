#include "rdz/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rdz {

std::pair<long, double> leakage_from_field(const FieldArray& power_mw,
                                           const ZoneMask& mask,
                                           double threshold_dbm) {
  const double threshold_mw = dbm_to_mw(threshold_dbm);
  long points = 0;
  double leaked_mw = 0.0;
  const double* p = power_mw.data();
  const bool* inside = mask.inside.data();
  const long n = power_mw.size();
  for (long i = 0; i < n; ++i) {
    if (!inside[i] && p[i] > threshold_mw) {
      ++points;
      leaked_mw += p[i];
    }
  }
  return {points, mw_to_dbm(leaked_mw)};
}

std::pair<long, double> leakage_metrics(const RdzState& state, RfModel& rf) {
  RfMap aggregate;
  aggregate.power_mw =
      FieldArray::Zero(state.grid->height(), state.grid->width());
  for (const Transmitter& tx : state.fleet) {
    if (!tx.enabled || !is_test_role(tx.role)) continue;
    aggregate.power_mw += *rf.field_for(tx);
  }
  const auto mask = rf.mask_for(state.zone);
  return leakage_from_field(aggregate.power_mw, *mask,
                            state.config.leakage_threshold_dbm);
}

double mobile_sinr(const RdzState& state, const std::string& mobile_id,
                   RfModel& rf) {
  const Transmitter& mobile = state.at(mobile_id);
  const Transmitter* best = nullptr;
  double best_signal_dbm = kNegInf;
  for (const Transmitter& rx : state.fleet) {
    if (rx.role != Role::endpoint || !rx.enabled) continue;
    const double s = rf.link_dbm(mobile, rx.pos, rx.height_m, rx.gain_dbi);
    if (s > best_signal_dbm) {
      best_signal_dbm = s;
      best = &rx;
    }
  }
  if (!best) throw std::runtime_error("mobile_sinr: no endpoints configured");

  double interference_mw = 0.0;
  for (const Transmitter& tx : state.fleet) {
    if (!is_test_role(tx.role) || !tx.enabled) continue;
    if (tx.id == mobile.id) continue;
    if (tx.frequency_mhz != mobile.frequency_mhz) continue;
    interference_mw +=
        dbm_to_mw(rf.link_dbm(tx, best->pos, best->height_m, best->gain_dbi));
  }
  const double denom_mw =
      interference_mw + dbm_to_mw(state.config.noise_floor_dbm);
  return db_ratio(dbm_to_mw(best_signal_dbm), denom_mw);
}

double uptime(std::span<const StepMetrics> steps) {
  if (steps.empty()) throw std::invalid_argument("uptime of an empty trial");
  long valid = 0, active_valid = 0;
  for (const StepMetrics& m : steps) {
    if (!m.step_valid) continue;
    ++valid;
    if (m.mobile_active) ++active_valid;
  }
  if (valid == 0) return 1.0;  // vacuous by convention
  return static_cast<double>(active_valid) / static_cast<double>(valid);
}

namespace {

double clip(double v, double bound) {
  return std::clamp(v, -bound, bound);
}

}  // namespace

double step_reward(const RewardInputs& in) {
  if (in.interference_threshold_dbm == 0.0 ||
      in.leakage_threshold_dbm == 0.0)
    throw std::invalid_argument("step_reward: thresholds must be nonzero");
  if (in.zone_area_cells <= 0.0)
    throw std::invalid_argument("step_reward: zone area must be positive");

  const double u_term = 10.0 * in.enabled_steps;
  const double s_term = in.has_sinr ? in.sinr_db / 30.0 : 0.0;

  double i_term = 0.0;
  if (std::isfinite(in.interference_dbm)) {
    i_term = in.normalize_signs
                 ? -(in.interference_dbm - in.interference_threshold_dbm) /
                       std::abs(in.interference_threshold_dbm)
                 : -in.interference_dbm / in.interference_threshold_dbm;
  }
  const double p_term = -in.leakage_points / in.zone_area_cells;
  double l_term = 0.0;
  if (std::isfinite(in.leaked_power_dbm)) {
    l_term = in.normalize_signs
                 ? -(in.leaked_power_dbm - in.leakage_threshold_dbm) /
                       std::abs(in.leakage_threshold_dbm)
                 : -in.leaked_power_dbm / in.leakage_threshold_dbm;
  }

  const double b = in.clip_bound;
  return clip(u_term, b) + clip(s_term, b) + clip(i_term, b) + clip(p_term, b) +
         clip(l_term, b);
}

TrialSummary summarize(std::span<const StepMetrics> steps) {
  TrialSummary s;
  double leaked_mw = 0.0;
  double interference_mw = 0.0;
  for (const StepMetrics& m : steps) {
    s.total_leakage_points += m.leakage_points;
    if (std::isfinite(m.leaked_power_dbm))
      leaked_mw += dbm_to_mw(m.leaked_power_dbm);
    if (std::isfinite(m.interference_dbm))
      interference_mw += dbm_to_mw(m.interference_dbm);
    if (m.sinr_sampled) s.sinr_samples.push_back(m.sinr_db);
    s.total_reward += m.reward;
  }
  s.total_leaked_power_dbm = mw_to_dbm(leaked_mw);
  s.total_interference_dbm = mw_to_dbm(interference_mw);
  if (!s.sinr_samples.empty()) {
    double mean = 0.0;
    for (double v : s.sinr_samples) mean += v;
    mean /= static_cast<double>(s.sinr_samples.size());
    double var = 0.0;
    for (double v : s.sinr_samples) var += (v - mean) * (v - mean);
    var /= static_cast<double>(s.sinr_samples.size());
    s.sinr_mean_db = mean;
    s.sinr_std_db = std::sqrt(var);
  }
  s.uptime = steps.empty() ? 1.0 : uptime(steps);
  return s;
}

}  // namespace rdz
