#include "rdz/harness.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>

namespace rdz {

namespace {

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::string fmt(double v, const char* spec = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

StepMetrics measure(const RdzState& state, RfModel& rf) {
  StepMetrics m;
  const auto [points, leaked] = leakage_metrics(state, rf);
  m.leakage_points = points;
  m.leaked_power_dbm = leaked;

  const Transmitter* mobile = state.first_mobile();
  bool has_endpoint = false;
  for (const auto& tx : state.fleet)
    if (tx.role == Role::endpoint && tx.enabled) has_endpoint = true;

  if (mobile) {
    m.mobile_active = mobile->enabled;
    m.interference_dbm = interference_total_dbm(state, mobile->id, rf);
    if (mobile->enabled && has_endpoint) {
      m.sinr_db = mobile_sinr(state, mobile->id, rf);
      m.sinr_sampled = true;
    }
    // Validity is a compliance property of the mobile's position and
    // frequency, evaluated as if it were transmitting: a step in which the
    // mobile could not legitimately transmit does not count against uptime.
    const bool leak_violation =
        detect_leakage(state, mobile->id, rf).has_value();
    const bool interference_violation =
        interference_total_dbm(state, mobile->id, rf, /*as_if_enabled=*/true) >
        state.config.interference_threshold_dbm;
    m.step_valid = !(leak_violation || interference_violation);
  }

  RewardInputs r;
  r.enabled_steps = m.mobile_active ? 1.0 : 0.0;
  r.sinr_db = m.sinr_db;
  r.has_sinr = m.sinr_sampled;
  r.interference_dbm = m.interference_dbm;
  r.interference_threshold_dbm = state.config.interference_threshold_dbm;
  r.leakage_points = static_cast<double>(m.leakage_points);
  r.zone_area_cells = static_cast<double>(rf.mask_for(state.zone)->area);
  r.leaked_power_dbm = m.leaked_power_dbm;
  r.leakage_threshold_dbm = state.config.leakage_threshold_dbm;
  r.clip_bound = state.config.reward_clip;
  r.normalize_signs = state.config.normalize_reward_signs;
  m.reward = step_reward(r);
  return m;
}

}  // namespace

std::uint64_t mobility_seed_for(std::uint64_t master, int trial) {
  return derive_seed(master, 0x4D4F42494C495459ULL,
                     static_cast<std::uint64_t>(trial) + 1);
}

std::uint64_t policy_seed_for(std::uint64_t master, const std::string& policy,
                              int trial) {
  return derive_seed(master, fnv1a(policy),
                     static_cast<std::uint64_t>(trial) + 1);
}

StepRecord run_step(RdzState& state, const Policy& policy,
                    RngStream& mobility_rng, RngStream& policy_rng,
                    RfModel& rf, const RdzDomain& domain) {
  StepRecord record;
  state = advance_mobility(state, mobility_rng);
  if (const Transmitter* mobile = state.first_mobile())
    record.mobile_pos = mobile->pos;

  StepMetrics sensed;
  if (state.config.measure_before_act) sensed = measure(state, rf);

  record.decision = decide_and_act(policy, state, policy_rng, domain);

  record.metrics = state.config.measure_before_act ? sensed : measure(state, rf);
  record.metrics.step = state.step;
  return record;
}

TrialRecord run_trial(const Scenario& scenario, const Policy& policy,
                      int trial, std::uint64_t master_seed, RfModel& rf,
                      const RdzDomain& domain) {
  TrialRecord record;
  record.policy = policy.name();
  record.trial = trial;
  record.mobility_seed = mobility_seed_for(master_seed, trial);
  record.policy_seed = policy_seed_for(master_seed, record.policy, trial);

  RngStream mobility_rng(record.mobility_seed);
  RngStream policy_rng(record.policy_seed);

  RdzState state = scenario.initial_state(rf.grid_ptr());
  record.steps.reserve(static_cast<std::size_t>(scenario.steps_per_trial));
  for (int s = 0; s < scenario.steps_per_trial; ++s)
    record.steps.push_back(
        run_step(state, policy, mobility_rng, policy_rng, rf, domain));

  std::vector<StepMetrics> metrics;
  metrics.reserve(record.steps.size());
  for (const auto& s : record.steps) metrics.push_back(s.metrics);
  record.summary = summarize(metrics);
  return record;
}

ExperimentReport run_experiment(const Scenario& scenario,
                                const std::vector<Policy>& policies) {
  if (policies.empty())
    throw std::invalid_argument("run_experiment: need at least one policy");

  ExperimentReport report;
  report.scenario_hash = scenario.content_hash;
  report.master_seed = scenario.seed;

  auto grid = scenario.build_grid();
  RfModel rf = scenario.make_rf_model(grid);
  const RdzDomain domain = build_domain(rf);

  for (const Policy& policy : policies)
    for (int t = 0; t < scenario.trials; ++t)
      report.trials.push_back(
          run_trial(scenario, policy, t, scenario.seed, rf, domain));
  return report;
}

void write_steps_csv(std::ostream& out, const ExperimentReport& report) {
  out << "policy,trial,step,mobile_x,mobile_y,leakage_points,"
         "leaked_power_dbm,interference_dbm,sinr_db,active,valid,reward,"
         "actions\n";
  for (const TrialRecord& trial : report.trials) {
    for (const StepRecord& s : trial.steps) {
      out << trial.policy << ',' << trial.trial << ',' << s.metrics.step << ','
          << fmt(s.mobile_pos.x, "%.4f") << ',' << fmt(s.mobile_pos.y, "%.4f")
          << ',' << s.metrics.leakage_points << ','
          << fmt(finite_or_sentinel(s.metrics.leaked_power_dbm)) << ','
          << fmt(finite_or_sentinel(s.metrics.interference_dbm)) << ','
          << fmt(s.metrics.sinr_sampled ? s.metrics.sinr_db : kNoPowerDbm)
          << ',' << (s.metrics.mobile_active ? 1 : 0) << ','
          << (s.metrics.step_valid ? 1 : 0) << ',' << fmt(s.metrics.reward)
          << ',';
      bool first = true;
      for (const AtomicAction& a : s.decision.executed) {
        out << (first ? "" : ";") << to_string(a);
        first = false;
      }
      for (const AtomicAction& a : s.decision.skipped) {
        out << (first ? "" : ";") << "skip:" << to_string(a);
        first = false;
      }
      if (s.decision.plan_failed) out << (first ? "" : ";") << "plan_failed";
      out << '\n';
    }
  }
}

void write_summary_csv(std::ostream& out, const ExperimentReport& report) {
  out << "policy,trial,mobility_seed,steps,total_leakage_points,"
         "total_leaked_power_dbm,total_interference_dbm,sinr_mean_db,"
         "sinr_std_db,sinr_samples,uptime,total_reward\n";
  for (const TrialRecord& t : report.trials) {
    const TrialSummary& s = t.summary;
    out << t.policy << ',' << t.trial << ',' << t.mobility_seed << ','
        << t.steps.size() << ',' << s.total_leakage_points << ','
        << fmt(finite_or_sentinel(s.total_leaked_power_dbm)) << ','
        << fmt(finite_or_sentinel(s.total_interference_dbm)) << ','
        << fmt(s.sinr_samples.empty() ? kNoPowerDbm : s.sinr_mean_db) << ','
        << fmt(s.sinr_samples.empty() ? kNoPowerDbm : s.sinr_std_db) << ','
        << s.sinr_samples.size() << ',' << fmt(s.uptime, "%.4f") << ','
        << fmt(s.total_reward) << '\n';
  }
}

void write_report_txt(std::ostream& out, const ExperimentReport& report) {
  out << "scenario hash: " << report.scenario_hash
      << "  master seed: " << report.master_seed << "\n";
  out << "mobility trajectories are shared per trial index across policies\n\n";

  std::map<std::string, std::vector<const TrialRecord*>> by_policy;
  std::vector<std::string> order;
  for (const TrialRecord& t : report.trials) {
    if (!by_policy.count(t.policy)) order.push_back(t.policy);
    by_policy[t.policy].push_back(&t);
  }

  out << "policy      trial  leak_pts  leaked_dbm  interf_dbm  sinr_mean  "
         "uptime  reward\n";
  for (const std::string& name : order) {
    for (const TrialRecord* t : by_policy[name]) {
      const TrialSummary& s = t->summary;
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "%-11s %5d %9ld %11.2f %11.2f %10.2f %7.3f %8.2f\n",
                    name.c_str(), t->trial, s.total_leakage_points,
                    finite_or_sentinel(s.total_leaked_power_dbm),
                    finite_or_sentinel(s.total_interference_dbm),
                    s.sinr_samples.empty() ? kNoPowerDbm : s.sinr_mean_db,
                    s.uptime, s.total_reward);
      out << buf;
    }
  }

  out << "\nper-policy means across trials\n";
  out << "policy      leak_pts  leaked_dbm  interf_dbm  sinr_mean  uptime\n";
  for (const std::string& name : order) {
    const auto& trials = by_policy[name];
    double pts = 0, leaked_mw = 0, interf_mw = 0, sinr = 0, up = 0;
    long sinr_n = 0;
    for (const TrialRecord* t : trials) {
      pts += static_cast<double>(t->summary.total_leakage_points);
      if (std::isfinite(t->summary.total_leaked_power_dbm))
        leaked_mw += dbm_to_mw(t->summary.total_leaked_power_dbm);
      if (std::isfinite(t->summary.total_interference_dbm))
        interf_mw += dbm_to_mw(t->summary.total_interference_dbm);
      for (double v : t->summary.sinr_samples) {
        sinr += v;
        ++sinr_n;
      }
      up += t->summary.uptime;
    }
    const double n = static_cast<double>(trials.size());
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-11s %9.1f %11.2f %11.2f %10.2f %7.3f\n",
                  name.c_str(), pts / n,
                  finite_or_sentinel(mw_to_dbm(leaked_mw / n)),
                  finite_or_sentinel(mw_to_dbm(interf_mw / n)),
                  sinr_n ? sinr / static_cast<double>(sinr_n) : kNoPowerDbm,
                  up / n);
    out << buf;
  }
}

ExperimentReport run_and_write(const Scenario& scenario,
                               const std::vector<Policy>& policies,
                               const std::string& out_dir) {
  const ExperimentReport report = run_experiment(scenario, policies);
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream f(out_dir + "/steps.csv");
    if (!f) throw std::runtime_error("cannot write " + out_dir + "/steps.csv");
    write_steps_csv(f, report);
  }
  {
    std::ofstream f(out_dir + "/summary.csv");
    write_summary_csv(f, report);
  }
  {
    std::ofstream f(out_dir + "/report.txt");
    write_report_txt(f, report);
  }
  return report;
}

}  // namespace rdz
