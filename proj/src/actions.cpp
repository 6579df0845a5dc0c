#include "rdz/actions.hpp"

#include <sstream>

namespace rdz {

AtomicAction AtomicAction::make_disable(std::string id) {
  AtomicAction a;
  a.kind = ActionKind::disable;
  a.target_id = std::move(id);
  return a;
}

AtomicAction AtomicAction::make_enable(std::string id) {
  AtomicAction a;
  a.kind = ActionKind::enable;
  a.target_id = std::move(id);
  return a;
}

AtomicAction AtomicAction::make_round_robin(std::string id) {
  AtomicAction a;
  a.kind = ActionKind::round_robin_freq;
  a.target_id = std::move(id);
  return a;
}

AtomicAction AtomicAction::make_set_waypoint(std::string id, GridPos target) {
  AtomicAction a;
  a.kind = ActionKind::set_waypoint;
  a.target_id = std::move(id);
  a.waypoint = target;
  return a;
}

AtomicAction AtomicAction::make_update_zone(ZoneBoundary zone) {
  AtomicAction a;
  a.kind = ActionKind::update_zone;
  a.zone = std::move(zone);
  return a;
}

std::string to_string(const AtomicAction& action) {
  std::ostringstream os;
  switch (action.kind) {
    case ActionKind::idle:
      return "idle";
    case ActionKind::disable:
      os << "disable(" << action.target_id << ")";
      break;
    case ActionKind::enable:
      os << "enable(" << action.target_id << ")";
      break;
    case ActionKind::round_robin_freq:
      os << "round_robin_freq(" << action.target_id << ")";
      break;
    case ActionKind::set_waypoint:
      os << "set_waypoint(" << action.target_id;
      if (action.waypoint)
        os << ", " << action.waypoint->x << "," << action.waypoint->y;
      os << ")";
      break;
    case ActionKind::update_zone:
      os << "update_zone("
         << (action.zone ? action.zone->polygon().size() : 0) << "-gon)";
      break;
  }
  return os.str();
}

}  // namespace rdz
