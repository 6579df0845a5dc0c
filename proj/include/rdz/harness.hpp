#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rdz/metrics.hpp"
#include "rdz/policies.hpp"
#include "rdz/scenario.hpp"

namespace rdz {

struct StepRecord {
  StepMetrics metrics;
  StepDecision decision;
  GridPos mobile_pos;  // position after the mobility phase
};

struct TrialRecord {
  std::string policy;
  int trial = 0;
  std::uint64_t mobility_seed = 0;
  std::uint64_t policy_seed = 0;
  std::vector<StepRecord> steps;
  TrialSummary summary;
};

struct ExperimentReport {
  std::uint64_t scenario_hash = 0;
  std::uint64_t master_seed = 0;
  std::vector<TrialRecord> trials;
};

// Mobility streams are derived from (master seed, trial index) only, so a
// given trial index replays the same trajectory under every policy.
std::uint64_t mobility_seed_for(std::uint64_t master, int trial);
std::uint64_t policy_seed_for(std::uint64_t master, const std::string& policy,
                              int trial);

// One closed-loop tick: move, sense, decide/act, measure. With
// measure_before_act set, the metrics are taken from the sensed (pre-act)
// state instead of the post-act state.
StepRecord run_step(RdzState& state, const Policy& policy,
                    RngStream& mobility_rng, RngStream& policy_rng,
                    RfModel& rf, const RdzDomain& domain);

TrialRecord run_trial(const Scenario& scenario, const Policy& policy,
                      int trial, std::uint64_t master_seed, RfModel& rf,
                      const RdzDomain& domain);

// All policies over all trial indices with shared per-trial mobility seeds.
// seed_override replaces the scenario seed when nonzero... pass through the
// scenario value by default.
ExperimentReport run_experiment(const Scenario& scenario,
                                const std::vector<Policy>& policies);

void write_steps_csv(std::ostream& out, const ExperimentReport& report);
void write_summary_csv(std::ostream& out, const ExperimentReport& report);
void write_report_txt(std::ostream& out, const ExperimentReport& report);

// Convenience: run and persist steps.csv / summary.csv / report.txt.
ExperimentReport run_and_write(const Scenario& scenario,
                               const std::vector<Policy>& policies,
                               const std::string& out_dir);

}  // namespace rdz
