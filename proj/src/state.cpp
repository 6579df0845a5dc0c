#include "rdz/state.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace rdz {

using json = nlohmann::json;

std::string to_string(Role role) {
  switch (role) {
    case Role::endpoint: return "endpoint";
    case Role::stationary_test: return "stationary_test";
    case Role::mobile_test: return "mobile_test";
  }
  return "?";
}

Role role_from_string(const std::string& s) {
  if (s == "endpoint") return Role::endpoint;
  if (s == "stationary_test") return Role::stationary_test;
  if (s == "mobile_test") return Role::mobile_test;
  throw std::invalid_argument("unknown role: " + s);
}

const Transmitter* RdzState::find(const std::string& id) const {
  for (const auto& tx : fleet)
    if (tx.id == id) return &tx;
  return nullptr;
}

Transmitter* RdzState::find(const std::string& id) {
  for (auto& tx : fleet)
    if (tx.id == id) return &tx;
  return nullptr;
}

const Transmitter& RdzState::at(const std::string& id) const {
  if (const Transmitter* tx = find(id)) return *tx;
  throw std::invalid_argument("unknown transmitter id: " + id);
}

Transmitter& RdzState::at(const std::string& id) {
  if (Transmitter* tx = find(id)) return *tx;
  throw std::invalid_argument("unknown transmitter id: " + id);
}

const Transmitter* RdzState::first_mobile() const {
  for (const auto& tx : fleet)
    if (tx.role == Role::mobile_test) return &tx;
  return nullptr;
}

void RdzState::validate() const {
  if (!grid) throw std::invalid_argument("state has no grid");
  zone.validate_in(*grid);
  if (config.channels_mhz.empty())
    throw std::invalid_argument("channel set must not be empty");
  std::set<std::string> ids;
  for (const auto& tx : fleet) {
    if (!ids.insert(tx.id).second)
      throw std::invalid_argument("duplicate transmitter id: " + tx.id);
    if (tx.height_m <= 0.0)
      throw std::invalid_argument(tx.id + ": height must be positive");
    if (!grid->in_bounds(tx.pos))
      throw std::invalid_argument(tx.id + ": position outside grid");
    if (std::find(config.channels_mhz.begin(), config.channels_mhz.end(),
                  tx.frequency_mhz) == config.channels_mhz.end())
      throw std::invalid_argument(tx.id + ": frequency not in channel set");
  }
}

std::optional<Violation> detect_leakage(const RdzState& state,
                                        const std::string& tx_id,
                                        RfModel& rf) {
  const Transmitter& tx = state.at(tx_id);
  if (tx.role == Role::endpoint)
    throw std::invalid_argument("endpoints do not emit test signals: " + tx_id);

  const auto field = rf.field_for(tx);  // as-if-enabled
  const auto mask = rf.mask_for(state.zone);
  const double max_out_mw = mask->inside.select(0.0, *field).maxCoeff();
  const double max_out_dbm = mw_to_dbm(max_out_mw);
  if (max_out_dbm > state.config.leakage_threshold_dbm) {
    return Violation{ViolationKind::leakage, tx_id,
                     max_out_dbm - state.config.leakage_threshold_dbm};
  }
  return std::nullopt;
}

double interference_total_dbm(const RdzState& state,
                              const std::string& mobile_id, RfModel& rf,
                              bool as_if_enabled) {
  const Transmitter& mobile = state.at(mobile_id);
  if (mobile.role != Role::mobile_test)
    throw std::invalid_argument(mobile_id + " is not a mobile transmitter");
  if (!as_if_enabled && !mobile.enabled) return kNegInf;

  double total_mw = 0.0;
  for (const Transmitter& rx : state.fleet) {
    if (rx.id == mobile.id || rx.role == Role::mobile_test) continue;
    if (!rx.enabled) continue;
    if (rx.frequency_mhz != mobile.frequency_mhz) continue;
    if (rx.role == Role::endpoint && !state.config.endpoints_as_victims)
      continue;
    if (!contains(state.zone, rx.pos)) continue;
    total_mw += dbm_to_mw(rf.link_dbm(mobile, rx.pos, rx.height_m, rx.gain_dbi));
  }
  return mw_to_dbm(total_mw);
}

std::optional<Violation> detect_interference(const RdzState& state,
                                             const std::string& mobile_id,
                                             RfModel& rf) {
  const double total = interference_total_dbm(state, mobile_id, rf);
  if (total > state.config.interference_threshold_dbm) {
    return Violation{ViolationKind::interference, mobile_id,
                     total - state.config.interference_threshold_dbm};
  }
  return std::nullopt;
}

void apply_action(RdzState& state, const AtomicAction& action) {
  switch (action.kind) {
    case ActionKind::idle:
      return;
    case ActionKind::disable:
      state.at(action.target_id).enabled = false;
      return;
    case ActionKind::enable:
      state.at(action.target_id).enabled = true;
      return;
    case ActionKind::round_robin_freq: {
      Transmitter& tx = state.at(action.target_id);
      const auto& channels = state.config.channels_mhz;
      if (channels.empty())
        throw std::runtime_error("round_robin_freq with empty channel set");
      auto it = std::find(channels.begin(), channels.end(), tx.frequency_mhz);
      tx.frequency_mhz = (it == channels.end() || it + 1 == channels.end())
                             ? channels.front()
                             : *(it + 1);
      return;
    }
    case ActionKind::set_waypoint: {
      Transmitter& tx = state.at(action.target_id);
      if (!action.waypoint || !state.grid->in_bounds(*action.waypoint))
        throw std::invalid_argument("set_waypoint: target out of bounds");
      tx.waypoint = *action.waypoint;
      return;
    }
    case ActionKind::update_zone: {
      if (!action.zone)
        throw std::invalid_argument("update_zone without a polygon");
      action.zone->validate_in(*state.grid);
      state.zone = *action.zone;
      state.incumbent_request.reset();
      return;
    }
  }
  throw std::logic_error("unhandled action kind");
}

RdzState twin_apply(const RdzState& state, const AtomicAction& action) {
  RdzState twin = state;
  apply_action(twin, action);
  return twin;
}

RdzState advance_mobility(const RdzState& state, RngStream& rng) {
  RdzState next = state;
  const double dist = state.config.move_distance_cells;
  for (Transmitter& tx : next.fleet) {
    if (tx.role != Role::mobile_test) continue;
    if (tx.waypoint) {
      const double vx = tx.waypoint->x - tx.pos.x;
      const double vy = tx.waypoint->y - tx.pos.y;
      const double len = std::hypot(vx, vy);
      if (len <= dist) {
        tx.pos = *tx.waypoint;
        tx.waypoint.reset();
      } else {
        tx.pos.x += vx / len * dist;
        tx.pos.y += vy / len * dist;
      }
    } else {
      const double ang = rng.angle();
      tx.pos.x += std::cos(ang) * dist;
      tx.pos.y += std::sin(ang) * dist;
    }
    tx.pos = state.grid->clamp(tx.pos);
  }
  ++next.step;
  return next;
}

namespace {

json zone_to_json(const ZoneBoundary& zone) {
  json arr = json::array();
  for (const GridPos& v : zone.polygon()) arr.push_back({v.x, v.y});
  return arr;
}

ZoneBoundary zone_from_json(const json& arr) {
  std::vector<GridPos> poly;
  for (const auto& v : arr) poly.push_back({v.at(0), v.at(1)});
  return ZoneBoundary(std::move(poly));
}

}  // namespace

std::string state_to_json(const RdzState& state) {
  json j;
  j["step"] = state.step;
  j["grid"] = {{"width", state.grid->width()},
               {"height", state.grid->height()},
               {"cell_size", state.grid->cell_size()}};
  j["zone"] = zone_to_json(state.zone);
  j["incumbent_request"] = state.incumbent_request
                               ? zone_to_json(*state.incumbent_request)
                               : json();
  j["config"] = {
      {"leakage_threshold_dbm", state.config.leakage_threshold_dbm},
      {"interference_threshold_dbm", state.config.interference_threshold_dbm},
      {"channels_mhz", state.config.channels_mhz},
      {"noise_floor_dbm", state.config.noise_floor_dbm},
      {"probe_height_m", state.config.probe_height_m},
      {"probe_gain_dbi", state.config.probe_gain_dbi},
      {"endpoints_as_victims", state.config.endpoints_as_victims},
      {"normalize_reward_signs", state.config.normalize_reward_signs},
      {"reward_clip", state.config.reward_clip},
      {"move_distance_cells", state.config.move_distance_cells},
      {"measure_before_act", state.config.measure_before_act},
  };
  json fleet = json::array();
  for (const Transmitter& tx : state.fleet) {
    json t = {{"id", tx.id},
              {"role", to_string(tx.role)},
              {"x", tx.pos.x},
              {"y", tx.pos.y},
              {"height_m", tx.height_m},
              {"tx_power_dbm", tx.tx_power_dbm},
              {"gain_dbi", tx.gain_dbi},
              {"frequency_mhz", tx.frequency_mhz},
              {"enabled", tx.enabled}};
    t["waypoint"] =
        tx.waypoint ? json({tx.waypoint->x, tx.waypoint->y}) : json();
    fleet.push_back(std::move(t));
  }
  j["fleet"] = std::move(fleet);
  return j.dump(2);
}

RdzState state_from_json(const std::string& text,
                         std::shared_ptr<const Grid> grid) {
  const json j = json::parse(text);
  RdzState state;
  state.grid = std::move(grid);
  if (j.at("grid").at("width") != state.grid->width() ||
      j.at("grid").at("height") != state.grid->height())
    throw std::invalid_argument("snapshot grid dimensions do not match");
  state.step = j.at("step");
  state.zone = zone_from_json(j.at("zone"));
  if (!j.at("incumbent_request").is_null())
    state.incumbent_request = zone_from_json(j.at("incumbent_request"));
  const json& c = j.at("config");
  state.config.leakage_threshold_dbm = c.at("leakage_threshold_dbm");
  state.config.interference_threshold_dbm = c.at("interference_threshold_dbm");
  state.config.channels_mhz = c.at("channels_mhz").get<std::vector<double>>();
  state.config.noise_floor_dbm = c.at("noise_floor_dbm");
  state.config.probe_height_m = c.at("probe_height_m");
  state.config.probe_gain_dbi = c.at("probe_gain_dbi");
  state.config.endpoints_as_victims = c.at("endpoints_as_victims");
  state.config.normalize_reward_signs = c.at("normalize_reward_signs");
  state.config.reward_clip = c.at("reward_clip");
  state.config.move_distance_cells = c.at("move_distance_cells");
  state.config.measure_before_act = c.at("measure_before_act");
  for (const auto& t : j.at("fleet")) {
    Transmitter tx;
    tx.id = t.at("id");
    tx.role = role_from_string(t.at("role"));
    tx.pos = {t.at("x"), t.at("y")};
    tx.height_m = t.at("height_m");
    tx.tx_power_dbm = t.at("tx_power_dbm");
    tx.gain_dbi = t.at("gain_dbi");
    tx.frequency_mhz = t.at("frequency_mhz");
    tx.enabled = t.at("enabled");
    if (!t.at("waypoint").is_null())
      tx.waypoint = GridPos{t.at("waypoint").at(0), t.at("waypoint").at(1)};
    state.fleet.push_back(std::move(tx));
  }
  state.validate();
  return state;
}

}  // namespace rdz
