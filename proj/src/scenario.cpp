#include "rdz/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rdz {

namespace {

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  for (const std::string& tok : split_ws(s)) out.push_back(std::stod(tok));
  return out;
}

bool parse_flag(const std::string& v, const std::string& key) {
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  throw std::invalid_argument("scenario: bad boolean for " + key + ": " + v);
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace

Scenario Scenario::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();
  std::istringstream is(content);
  Scenario sc =
      parse(is, std::filesystem::path(path).parent_path().string());
  sc.source_path = path;
  sc.content_hash = fnv1a(content);
  return sc;
}

Scenario Scenario::parse(std::istream& in, const std::string& base_dir) {
  Scenario sc;
  std::string section;
  std::string line;
  int line_no = 0;

  const auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                ": " + msg);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = strip(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail("malformed section header");
      section = line.substr(1, line.size() - 2);
      continue;
    }

    if (section == "fleet") {
      // id role x y height_m power_dbm gain_dbi freq_mhz on|off
      const auto tok = split_ws(line);
      if (tok.size() != 9) fail("fleet row needs 9 fields");
      Transmitter tx;
      tx.id = tok[0];
      tx.role = role_from_string(tok[1]);
      tx.pos = {std::stod(tok[2]), std::stod(tok[3])};
      tx.height_m = std::stod(tok[4]);
      tx.tx_power_dbm = std::stod(tok[5]);
      tx.gain_dbi = std::stod(tok[6]);
      tx.frequency_mhz = std::stod(tok[7]);
      tx.enabled = parse_flag(tok[8], "enabled");
      sc.fleet.push_back(std::move(tx));
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));

    if (section == "grid") {
      if (key == "width") sc.width = std::stoi(value);
      else if (key == "height") sc.height = std::stoi(value);
      else if (key == "cell_size") sc.cell_size_m = std::stod(value);
      else if (key == "elevation_csv")
        sc.elevation_csv = base_dir.empty() ? value : base_dir + "/" + value;
      else if (key == "building") {
        const auto v = parse_numbers(value);
        if (v.size() != 5) fail("building needs x0 y0 x1 y1 height");
        sc.buildings.push_back({v[0], v[1], v[2], v[3], v[4]});
      } else fail("unknown grid key: " + key);
    } else if (section == "zone") {
      if (key == "rect") {
        const auto v = parse_numbers(value);
        if (v.size() != 4) fail("rect needs x0 y0 x1 y1");
        sc.zone_polygon = {{v[0], v[1]}, {v[2], v[1]}, {v[2], v[3]}, {v[0], v[3]}};
      } else if (key == "polygon") {
        const auto v = parse_numbers(value);
        if (v.size() < 6 || v.size() % 2 != 0)
          fail("polygon needs >= 3 x y pairs");
        sc.zone_polygon.clear();
        for (std::size_t i = 0; i < v.size(); i += 2)
          sc.zone_polygon.push_back({v[i], v[i + 1]});
      } else fail("unknown zone key: " + key);
    } else if (section == "model") {
      if (key == "kind") sc.model.kind = path_loss_kind_from_string(value);
      else if (key == "path_loss_exponent")
        sc.model.path_loss_exponent = std::stod(value);
      else if (key == "reference_distance_m")
        sc.model.reference_distance_m = std::stod(value);
      else if (key == "obstruction_penalty_db")
        sc.model.obstruction_penalty_db = std::stod(value);
      else if (key == "obstruction_cap_db")
        sc.model.obstruction_cap_db = std::stod(value);
      else fail("unknown model key: " + key);
    } else if (section == "config") {
      if (key == "leakage_threshold_dbm")
        sc.config.leakage_threshold_dbm = std::stod(value);
      else if (key == "interference_threshold_dbm")
        sc.config.interference_threshold_dbm = std::stod(value);
      else if (key == "channels_mhz")
        sc.config.channels_mhz = parse_numbers(value);
      else if (key == "noise_floor_dbm")
        sc.config.noise_floor_dbm = std::stod(value);
      else if (key == "probe_height_m")
        sc.config.probe_height_m = std::stod(value);
      else if (key == "probe_gain_dbi")
        sc.config.probe_gain_dbi = std::stod(value);
      else if (key == "endpoints_as_victims")
        sc.config.endpoints_as_victims = parse_flag(value, key);
      else if (key == "normalize_reward_signs")
        sc.config.normalize_reward_signs = parse_flag(value, key);
      else if (key == "reward_clip")
        sc.config.reward_clip = std::stod(value);
      else if (key == "measure_before_act")
        sc.config.measure_before_act = parse_flag(value, key);
      else fail("unknown config key: " + key);
    } else if (section == "experiment") {
      if (key == "steps") sc.steps_per_trial = std::stoi(value);
      else if (key == "trials") sc.trials = std::stoi(value);
      else if (key == "move_distance")
        sc.config.move_distance_cells = std::stod(value);
      else if (key == "seed") sc.seed = std::stoull(value);
      else if (key == "policies") {
        sc.policies.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ','))
          sc.policies.push_back(Policy::parse(strip(item)));
      } else fail("unknown experiment key: " + key);
    } else {
      fail("key outside a known section: " + key);
    }
  }

  sc.validate();
  return sc;
}

void Scenario::validate() const {
  if (width <= 0 || height <= 0 || cell_size_m <= 0)
    throw std::invalid_argument("scenario: invalid grid dimensions");
  if (zone_polygon.size() < 3)
    throw std::invalid_argument("scenario: zone must have >= 3 vertices");
  if (steps_per_trial <= 0)
    throw std::invalid_argument("scenario: steps must be positive");
  if (trials <= 0) throw std::invalid_argument("scenario: trials must be positive");
  model.validate();
  const bool has_mobile =
      std::any_of(fleet.begin(), fleet.end(),
                  [](const auto& t) { return t.role == Role::mobile_test; });
  const bool has_endpoint =
      std::any_of(fleet.begin(), fleet.end(),
                  [](const auto& t) { return t.role == Role::endpoint; });
  if (has_mobile && !has_endpoint)
    throw std::invalid_argument(
        "scenario: SINR needs at least one endpoint when a mobile is deployed");
}

std::shared_ptr<const Grid> Scenario::build_grid() const {
  FieldArray elevation = FieldArray::Zero(height, width);
  if (!elevation_csv.empty()) {
    std::ifstream in(elevation_csv);
    if (!in)
      throw std::runtime_error("cannot open elevation raster: " + elevation_csv);
    elevation = load_elevation_csv(in, width, height);
  }
  for (const auto& b : buildings) {
    const int x0 = std::max(0, static_cast<int>(std::lround(std::min(b[0], b[2]))));
    const int x1 = std::min(width - 1, static_cast<int>(std::lround(std::max(b[0], b[2]))));
    const int y0 = std::max(0, static_cast<int>(std::lround(std::min(b[1], b[3]))));
    const int y1 = std::min(height - 1, static_cast<int>(std::lround(std::max(b[1], b[3]))));
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x)
        elevation(y, x) = std::max(elevation(y, x), b[4]);
  }
  return std::make_shared<Grid>(width, height, cell_size_m, std::move(elevation));
}

RdzState Scenario::initial_state(std::shared_ptr<const Grid> grid) const {
  RdzState state;
  state.grid = std::move(grid);
  state.zone = ZoneBoundary(zone_polygon);
  state.config = config;
  state.fleet = fleet;
  state.step = 0;
  state.validate();
  return state;
}

RfModel Scenario::make_rf_model(std::shared_ptr<const Grid> grid) const {
  return RfModel(std::move(grid), model, config.probe_height_m,
                 config.probe_gain_dbi);
}

}  // namespace rdz
