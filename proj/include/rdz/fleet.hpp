#pragma once

#include <optional>
#include <string>

#include "rdz/geo.hpp"

namespace rdz {

// endpoint: fixed receiver, never radiates test signals.
// stationary_test / mobile_test: managed test transmitters.
enum class Role { endpoint, stationary_test, mobile_test };

std::string to_string(Role role);
Role role_from_string(const std::string& s);

inline bool is_test_role(Role role) { return role != Role::endpoint; }

struct Transmitter {
  std::string id;
  Role role = Role::stationary_test;
  GridPos pos;
  double height_m = 1.8;      // antenna height above local terrain
  double tx_power_dbm = 30.0;
  double gain_dbi = 0.0;
  double frequency_mhz = 3600.0;
  bool enabled = true;
  std::optional<GridPos> waypoint;  // relocation directive for mobiles
};

inline bool operator==(const Transmitter& a, const Transmitter& b) {
  return a.id == b.id && a.role == b.role && a.pos == b.pos &&
         a.height_m == b.height_m && a.tx_power_dbm == b.tx_power_dbm &&
         a.gain_dbi == b.gain_dbi && a.frequency_mhz == b.frequency_mhz &&
         a.enabled == b.enabled && a.waypoint == b.waypoint;
}

}  // namespace rdz
