#pragma once

#include <string>
#include <vector>

#include "rdz/domain.hpp"
#include "rdz/rng.hpp"

namespace rdz {

enum class PolicyKind { htn, stochastic_htn, random, naive };

struct Policy {
  PolicyKind kind = PolicyKind::htn;
  double epsilon = 0.0;  // per-action skip probability, stochastic_htn only

  // "htn", "htn-<eps>" (stochastic), "random", "naive".
  static Policy parse(const std::string& spec);
  std::string name() const;
};

// Audit record of one control step.
struct StepDecision {
  std::vector<AtomicAction> planned;
  std::vector<AtomicAction> executed;
  std::vector<AtomicAction> skipped;
  bool plan_failed = false;
  int discrepancies = 0;  // plan-time vs execution-time applicability drift
};

// Plans (for the HTN variants) and executes this step's actions in place.
// stochastic_htn gates each planned action by an independent Bernoulli(1-eps)
// draw; random draws one of the four canonical mobile actions; naive does
// nothing. A planning failure is recorded and leaves the state untouched.
StepDecision decide_and_act(const Policy& policy, RdzState& state,
                            RngStream& rng, const RdzDomain& domain);

}  // namespace rdz
