#pragma once

#include <string>
#include <variant>
#include <vector>

#include "rdz/actions.hpp"
#include "rdz/htn.hpp"
#include "rdz/state.hpp"

namespace rdz {

using DomainArg =
    std::variant<std::monostate, double, std::string, GridPos, ZoneBoundary>;
using RdzTask = htn::Task<DomainArg>;
using RdzDomain = htn::Domain<RdzState, DomainArg>;
using RdzPlan = htn::Plan<DomainArg>;
using RdzPlanResult = htn::PlanResult<DomainArg>;

// Zone-maintenance domain. The root task decomposes into the four
// maintenance subtasks: honor a pending incumbent request, disable leaking
// transmitters, clear mobile interference (retune before shutdown), and
// re-enable disabled transmitters whose twin passes the leakage and
// interference checks. A fully quiescent zone decomposes to [idle].
//
// Planning method predicates evaluate candidate actions on state clones
// through the shared RfModel, so the returned plan is already twin-vetted.
// The RfModel must outlive the domain.
RdzDomain build_domain(RfModel& rf);

// Root agenda for one control step.
std::vector<RdzTask> maintenance_goal();

// Grounded primitive task -> executable action.
AtomicAction action_from_task(const RdzTask& task);
RdzTask task_from_action(const AtomicAction& action);

std::string format_arg(const DomainArg& arg);

// Test transmitters currently in leakage violation, in fleet order.
std::vector<std::string> leaking_test_transmitters(const RdzState& state,
                                                   RfModel& rf);

// Disabled test transmitters whose re-enable passes the twin gates,
// evaluated cumulatively in fleet order.
std::vector<std::string> restorable_disabled(const RdzState& state,
                                             RfModel& rf);

}  // namespace rdz
