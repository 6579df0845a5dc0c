#pragma once

#include <optional>
#include <string>

#include "rdz/fleet.hpp"
#include "rdz/geo.hpp"

namespace rdz {

// Primitive control actions. The numbering of the first four kinds is the
// stable action encoding (0 idle, 1 disable, 2 enable, 3 round-robin) so an
// external learned policy can be adapted without remapping.
enum class ActionKind {
  idle = 0,
  disable = 1,
  enable = 2,
  round_robin_freq = 3,
  set_waypoint = 4,
  update_zone = 5,
};

struct AtomicAction {
  ActionKind kind = ActionKind::idle;
  std::string target_id;                 // transmitter actions
  std::optional<GridPos> waypoint;       // set_waypoint
  std::optional<ZoneBoundary> zone;      // update_zone

  static AtomicAction make_idle() { return {}; }
  static AtomicAction make_disable(std::string id);
  static AtomicAction make_enable(std::string id);
  static AtomicAction make_round_robin(std::string id);
  static AtomicAction make_set_waypoint(std::string id, GridPos target);
  static AtomicAction make_update_zone(ZoneBoundary zone);
};

std::string to_string(const AtomicAction& action);

}  // namespace rdz
