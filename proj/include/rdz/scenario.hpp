#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "rdz/policies.hpp"
#include "rdz/state.hpp"

namespace rdz {

// Experiment definition loaded from a sectioned key/value file:
//
//   [grid]        width, height, cell_size, elevation_csv, building (xN)
//   [zone]        rect = x0 y0 x1 y1   |   polygon = x0 y0 x1 y1 ...
//   [model]       kind, path_loss_exponent, reference_distance_m,
//                 obstruction_penalty_db, obstruction_cap_db
//   [config]      thresholds, channels_mhz, noise floor, probe, flags
//   [fleet]       one row per transmitter:
//                 id role x y height_m power_dbm gain_dbi freq_mhz on|off
//   [experiment]  steps, trials, move_distance, seed, policies
//
// '#' starts a comment. building rows are axis-aligned blocks
// "x0 y0 x1 y1 height_m" stamped onto the elevation raster.
struct Scenario {
  int width = 400;
  int height = 400;
  double cell_size_m = 10.0;
  std::string elevation_csv;  // optional, relative to the scenario file
  std::vector<std::array<double, 5>> buildings;

  std::vector<GridPos> zone_polygon;
  RdzConfig config;
  PropagationModel model;
  std::vector<Transmitter> fleet;

  std::vector<Policy> policies;
  int steps_per_trial = 50;
  int trials = 5;
  std::uint64_t seed = 1;

  std::string source_path;
  std::uint64_t content_hash = 0;

  static Scenario load(const std::string& path);
  static Scenario parse(std::istream& in, const std::string& base_dir);

  void validate() const;  // throws on structural problems

  std::shared_ptr<const Grid> build_grid() const;
  RdzState initial_state(std::shared_ptr<const Grid> grid) const;
  RfModel make_rf_model(std::shared_ptr<const Grid> grid) const;
};

}  // namespace rdz
