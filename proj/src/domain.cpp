#include "rdz/domain.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace rdz {

namespace {

const std::string& arg_id(const std::vector<DomainArg>& args) {
  return std::get<std::string>(args.at(0));
}

const Transmitter* first_mobile(const RdzState& s) { return s.first_mobile(); }

bool interference_violated(const RdzState& s, RfModel& rf) {
  const Transmitter* mobile = first_mobile(s);
  return mobile && detect_interference(s, mobile->id, rf).has_value();
}

bool retune_clears(const RdzState& s, RfModel& rf) {
  const Transmitter* mobile = first_mobile(s);
  if (!mobile) return false;
  const RdzState twin =
      twin_apply(s, AtomicAction::make_round_robin(mobile->id));
  return !detect_interference(twin, mobile->id, rf).has_value();
}

// Twin gates for re-enabling one transmitter: its own field must not leak
// and the mobile must not end up violating the interference threshold.
bool enable_passes_gates(const RdzState& base, const std::string& id,
                         RfModel& rf, RdzState* out_twin) {
  RdzState twin = twin_apply(base, AtomicAction::make_enable(id));
  if (detect_leakage(twin, id, rf)) return false;
  if (interference_violated(twin, rf)) return false;
  if (out_twin) *out_twin = std::move(twin);
  return true;
}

// Closest in-zone cell center to a position; row-major scan for a
// deterministic tie-break.
GridPos nearest_in_zone_cell(const RdzState& s, const GridPos& from,
                             RfModel& rf) {
  const auto mask = rf.mask_for(s.zone);
  GridPos best = from;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (int y = 0; y < s.grid->height(); ++y) {
    for (int x = 0; x < s.grid->width(); ++x) {
      if (!mask->inside(y, x)) continue;
      const double dx = x - from.x, dy = y - from.y;
      const double d2 = dx * dx + dy * dy;
      if (d2 < best_d2) {
        best_d2 = d2;
        best = {static_cast<double>(x), static_cast<double>(y)};
      }
    }
  }
  return best;
}

RdzTask primitive_for(const AtomicAction& a) { return task_from_action(a); }

}  // namespace

std::vector<std::string> leaking_test_transmitters(const RdzState& state,
                                                   RfModel& rf) {
  std::vector<std::string> out;
  for (const Transmitter& tx : state.fleet) {
    if (!is_test_role(tx.role)) continue;
    if (detect_leakage(state, tx.id, rf)) out.push_back(tx.id);
  }
  return out;
}

std::vector<std::string> restorable_disabled(const RdzState& state,
                                             RfModel& rf) {
  std::vector<std::string> out;
  RdzState twin = state;
  for (const Transmitter& tx : state.fleet) {
    if (!is_test_role(tx.role) || tx.enabled) continue;
    RdzState next;
    if (enable_passes_gates(twin, tx.id, rf, &next)) {
      out.push_back(tx.id);
      twin = std::move(next);
    }
  }
  return out;
}

std::vector<RdzTask> maintenance_goal() {
  return {htn::task<DomainArg>("maintain_rdz")};
}

AtomicAction action_from_task(const RdzTask& task) {
  if (task.name == "idle") return AtomicAction::make_idle();
  if (task.name == "disable")
    return AtomicAction::make_disable(std::get<std::string>(task.args.at(0)));
  if (task.name == "enable")
    return AtomicAction::make_enable(std::get<std::string>(task.args.at(0)));
  if (task.name == "round_robin_freq")
    return AtomicAction::make_round_robin(
        std::get<std::string>(task.args.at(0)));
  if (task.name == "set_waypoint")
    return AtomicAction::make_set_waypoint(
        std::get<std::string>(task.args.at(0)),
        std::get<GridPos>(task.args.at(1)));
  if (task.name == "update_zone")
    return AtomicAction::make_update_zone(
        std::get<ZoneBoundary>(task.args.at(0)));
  throw std::invalid_argument("not a primitive task: " + task.name);
}

RdzTask task_from_action(const AtomicAction& a) {
  switch (a.kind) {
    case ActionKind::idle:
      return htn::task<DomainArg>("idle");
    case ActionKind::disable:
      return htn::task<DomainArg>("disable", {a.target_id});
    case ActionKind::enable:
      return htn::task<DomainArg>("enable", {a.target_id});
    case ActionKind::round_robin_freq:
      return htn::task<DomainArg>("round_robin_freq", {a.target_id});
    case ActionKind::set_waypoint:
      return htn::task<DomainArg>("set_waypoint", {a.target_id, *a.waypoint});
    case ActionKind::update_zone:
      return htn::task<DomainArg>("update_zone", {*a.zone});
  }
  throw std::logic_error("unhandled action kind");
}

std::string format_arg(const DomainArg& arg) {
  std::ostringstream os;
  if (std::holds_alternative<std::monostate>(arg)) return "_";
  if (const auto* d = std::get_if<double>(&arg)) {
    os << *d;
  } else if (const auto* s = std::get_if<std::string>(&arg)) {
    os << *s;
  } else if (const auto* p = std::get_if<GridPos>(&arg)) {
    os << p->x << "," << p->y;
  } else if (const auto* z = std::get_if<ZoneBoundary>(&arg)) {
    os << z->polygon().size() << "-gon";
  }
  return os.str();
}

RdzDomain build_domain(RfModel& rf) {
  RdzDomain domain;
  using Args = RdzDomain::Args;

  const auto target_exists = [](const RdzState& s, const Args& args) {
    return !args.empty() && std::holds_alternative<std::string>(args[0]) &&
           s.find(std::get<std::string>(args[0])) != nullptr;
  };
  domain.add_primitive(
      "idle", [](const RdzState&, const Args&) { return true; },
      [](RdzState&, const Args&) {});
  domain.add_primitive(
      "disable", target_exists, [](RdzState& s, const Args& a) {
        apply_action(s, AtomicAction::make_disable(arg_id(a)));
      });
  domain.add_primitive(
      "enable", target_exists, [](RdzState& s, const Args& a) {
        apply_action(s, AtomicAction::make_enable(arg_id(a)));
      });
  domain.add_primitive(
      "round_robin_freq",
      [target_exists](const RdzState& s, const Args& a) {
        return target_exists(s, a) && !s.config.channels_mhz.empty();
      },
      [](RdzState& s, const Args& a) {
        apply_action(s, AtomicAction::make_round_robin(arg_id(a)));
      });
  domain.add_primitive(
      "set_waypoint",
      [target_exists](const RdzState& s, const Args& a) {
        return target_exists(s, a) && a.size() > 1 &&
               std::holds_alternative<GridPos>(a[1]) &&
               s.grid->in_bounds(std::get<GridPos>(a[1]));
      },
      [](RdzState& s, const Args& a) {
        apply_action(s, AtomicAction::make_set_waypoint(
                            arg_id(a), std::get<GridPos>(a.at(1))));
      });
  domain.add_primitive(
      "update_zone",
      [](const RdzState& s, const Args& a) {
        if (a.empty() || !std::holds_alternative<ZoneBoundary>(a[0]))
          return false;
        try {
          std::get<ZoneBoundary>(a[0]).validate_in(*s.grid);
          return true;
        } catch (const std::exception&) {
          return false;
        }
      },
      [](RdzState& s, const Args& a) {
        apply_action(s,
                     AtomicAction::make_update_zone(std::get<ZoneBoundary>(a[0])));
      });

  // maintain_rdz: quiescent zones idle, anything else runs the maintenance
  // sequence of Figure-2 shape.
  domain.add_method(
      "maintain_rdz", "quiescent",
      [&rf](const RdzState& s, const Args&) {
        return !s.incumbent_request &&
               leaking_test_transmitters(s, rf).empty() &&
               !interference_violated(s, rf) &&
               restorable_disabled(s, rf).empty();
      },
      [](const RdzState&, const Args&) {
        return std::vector<RdzTask>{htn::task<DomainArg>("idle")};
      });
  domain.add_method(
      "maintain_rdz", "maintenance",
      [](const RdzState&, const Args&) { return true; },
      [](const RdzState&, const Args&) {
        return std::vector<RdzTask>{
            htn::task<DomainArg>("handle_incumbent_request"),
            htn::task<DomainArg>("mitigate_leakage"),
            htn::task<DomainArg>("mitigate_interference"),
            htn::task<DomainArg>("restore_transmitters")};
      });

  domain.add_method(
      "handle_incumbent_request", "apply-request",
      [](const RdzState& s, const Args&) {
        return s.incumbent_request.has_value();
      },
      [&rf](const RdzState& s, const Args&) {
        std::vector<RdzTask> plan;
        RdzState twin = s;
        const ZoneBoundary target_zone = *s.incumbent_request;
        const AtomicAction update = AtomicAction::make_update_zone(target_zone);
        plan.push_back(primitive_for(update));
        apply_action(twin, update);
        // Disable transmitters that leak under the new boundary.
        for (const std::string& id : leaking_test_transmitters(twin, rf)) {
          if (!twin.at(id).enabled) continue;
          const AtomicAction a = AtomicAction::make_disable(id);
          plan.push_back(primitive_for(a));
          apply_action(twin, a);
        }
        // Route mobiles that ended up outside back into the zone.
        for (const Transmitter& tx : twin.fleet) {
          if (tx.role != Role::mobile_test) continue;
          if (contains(twin.zone, tx.pos)) continue;
          const GridPos target = nearest_in_zone_cell(twin, tx.pos, rf);
          const AtomicAction a =
              AtomicAction::make_set_waypoint(tx.id, target);
          plan.push_back(primitive_for(a));
          apply_action(twin, a);
        }
        // Re-enable whatever is compliant under the new boundary.
        for (const std::string& id : restorable_disabled(twin, rf)) {
          const AtomicAction a = AtomicAction::make_enable(id);
          plan.push_back(primitive_for(a));
          apply_action(twin, a);
        }
        return plan;
      });
  domain.add_method(
      "handle_incumbent_request", "no-request",
      [](const RdzState& s, const Args&) {
        return !s.incumbent_request.has_value();
      },
      [](const RdzState&, const Args&) { return std::vector<RdzTask>{}; });

  domain.add_method(
      "mitigate_leakage", "disable-offenders",
      [](const RdzState&, const Args&) { return true; },
      [&rf](const RdzState& s, const Args&) {
        std::vector<RdzTask> plan;
        for (const std::string& id : leaking_test_transmitters(s, rf))
          plan.push_back(primitive_for(AtomicAction::make_disable(id)));
        return plan;
      });

  // Interference mitigation prefers retuning (keeps the mobile up) and only
  // falls back to a shutdown when no retune clears the threshold.
  domain.add_method(
      "mitigate_interference", "retune",
      [&rf](const RdzState& s, const Args&) {
        return interference_violated(s, rf) && retune_clears(s, rf);
      },
      [](const RdzState& s, const Args&) {
        return std::vector<RdzTask>{primitive_for(
            AtomicAction::make_round_robin(s.first_mobile()->id))};
      });
  domain.add_method(
      "mitigate_interference", "shutdown",
      [&rf](const RdzState& s, const Args&) {
        return interference_violated(s, rf);
      },
      [](const RdzState& s, const Args&) {
        return std::vector<RdzTask>{
            primitive_for(AtomicAction::make_disable(s.first_mobile()->id))};
      });
  domain.add_method(
      "mitigate_interference", "clear",
      [&rf](const RdzState& s, const Args&) {
        return !interference_violated(s, rf);
      },
      [](const RdzState&, const Args&) { return std::vector<RdzTask>{}; });

  domain.add_method(
      "restore_transmitters", "twin-gated-restore",
      [](const RdzState&, const Args&) { return true; },
      [&rf](const RdzState& s, const Args&) {
        std::vector<RdzTask> plan;
        for (const std::string& id : restorable_disabled(s, rf))
          plan.push_back(primitive_for(AtomicAction::make_enable(id)));
        return plan;
      });

  return domain;
}

}  // namespace rdz
