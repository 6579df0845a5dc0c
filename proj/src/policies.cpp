#include "rdz/policies.hpp"

#include <cstdio>
#include <stdexcept>

namespace rdz {

Policy Policy::parse(const std::string& spec) {
  if (spec == "htn") return {PolicyKind::htn, 0.0};
  if (spec == "random") return {PolicyKind::random, 0.0};
  if (spec == "naive") return {PolicyKind::naive, 0.0};
  if (spec.rfind("htn-", 0) == 0) {
    const double eps = std::stod(spec.substr(4));
    if (eps < 0.0 || eps >= 1.0)
      throw std::invalid_argument("policy epsilon must be in [0, 1): " + spec);
    return {PolicyKind::stochastic_htn, eps};
  }
  throw std::invalid_argument("unknown policy: " + spec);
}

std::string Policy::name() const {
  switch (kind) {
    case PolicyKind::htn: return "htn";
    case PolicyKind::random: return "random";
    case PolicyKind::naive: return "naive";
    case PolicyKind::stochastic_htn: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "htn-%g", epsilon);
      return buf;
    }
  }
  return "?";
}

namespace {

// Canonical action encoding: 0 idle, 1 disable, 2 enable, 3 round-robin,
// applied to the mobile transmitter.
AtomicAction random_action(const RdzState& state, RngStream& rng) {
  const int k = rng.uniform_int(4);
  const Transmitter* mobile = state.first_mobile();
  if (!mobile) return AtomicAction::make_idle();
  switch (k) {
    case 1: return AtomicAction::make_disable(mobile->id);
    case 2: return AtomicAction::make_enable(mobile->id);
    case 3: return AtomicAction::make_round_robin(mobile->id);
    default: return AtomicAction::make_idle();
  }
}

}  // namespace

StepDecision decide_and_act(const Policy& policy, RdzState& state,
                            RngStream& rng, const RdzDomain& domain) {
  StepDecision decision;
  switch (policy.kind) {
    case PolicyKind::naive:
      return decision;
    case PolicyKind::random: {
      const AtomicAction a = random_action(state, rng);
      decision.planned.push_back(a);
      apply_action(state, a);
      decision.executed.push_back(a);
      return decision;
    }
    case PolicyKind::htn:
    case PolicyKind::stochastic_htn:
      break;
  }

  const RdzPlanResult result = htn::find_plan(state, maintenance_goal(), domain);
  if (!result.found()) {
    decision.plan_failed = true;  // zone keeps running
    return decision;
  }

  const bool stochastic = policy.kind == PolicyKind::stochastic_htn;
  for (const RdzTask& step : result.plan.actions) {
    const AtomicAction action = action_from_task(step);
    decision.planned.push_back(action);
    if (stochastic && !(rng.canonical() < 1.0 - policy.epsilon)) {
      decision.skipped.push_back(action);  // replaced by a no-op
      continue;
    }
    // Applicability was verified against the twin at plan time; re-verify at
    // execution and count any drift instead of half-applying blindly.
    if (!domain.primitive(step.name).applicable(state, step.args)) {
      ++decision.discrepancies;
      continue;
    }
    apply_action(state, action);
    decision.executed.push_back(action);
  }
  return decision;
}

}  // namespace rdz
