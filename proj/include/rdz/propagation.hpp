#pragma once

#include <optional>
#include <span>
#include <string>

#include "rdz/fleet.hpp"
#include "rdz/geo.hpp"
#include "rdz/units.hpp"

namespace rdz {

enum class PathLossKind { free_space, log_distance, terrain_aware };

std::string to_string(PathLossKind kind);
PathLossKind path_loss_kind_from_string(const std::string& s);

// Analytic path-loss family. free_space is pure FSPL; log_distance anchors
// FSPL at reference_distance and decays with the configured exponent;
// terrain_aware adds a per-obstructed-cell penalty along the line of sight,
// capped at obstruction_cap_db.
struct PropagationModel {
  PathLossKind kind = PathLossKind::log_distance;
  double path_loss_exponent = 3.0;    // urban default
  double reference_distance_m = 1.0;
  double obstruction_penalty_db = 0.5;
  double obstruction_cap_db = 40.0;

  void validate() const;  // throws on out-of-range parameters
};

// Aggregate received power over the grid, linear milliwatts per cell.
struct RfMap {
  FieldArray power_mw;  // (y, x), all entries >= 0
  std::optional<double> frequency_mhz;  // filter the map was computed for
};

// FSPL in dB for a distance in meters and frequency in MHz.
double free_space_loss_db(double distance_m, double frequency_mhz);

// Cells strictly between the endpoints whose elevation exceeds the
// line-of-sight height at the crossing point. Heights are absolute
// (terrain + antenna). Sampling steps once per Chebyshev cell along the
// segment; stop_after bounds the count for cap-aware early exit.
int obstructed_cells(const Grid& grid, const GridPos& a, double height_a_m,
                     const GridPos& b, double height_b_m,
                     int stop_after = 1 << 30);

// Path loss in dB between two antennas. Antenna heights are above local
// terrain; distances below reference_distance are clamped to it. Never
// negative. Throws on non-positive frequency.
double path_loss_db(const PropagationModel& model, const Grid& grid,
                    const GridPos& tx_pos, double tx_height_m,
                    const GridPos& rx_pos, double rx_height_m,
                    double frequency_mhz);

// P_tx + G_tx + G_rx - path_loss, in dBm. Pure; ignores the enabled flag.
double received_power_dbm(const Transmitter& tx, const GridPos& rx_pos,
                          double rx_height_m, double rx_gain_dbi,
                          const PropagationModel& model, const Grid& grid);

// Field of a single transmitter at every cell center, regardless of its
// enabled flag. Parallel per cell; deterministic.
RfMap single_source_map(const Transmitter& tx, double rx_height_m,
                        double rx_gain_dbi, const PropagationModel& model,
                        const Grid& grid);

// Cell-wise linear-mW sum over enabled transmitters matching freq_filter
// (all frequencies when absent). Accumulates in fleet order, so the result
// is bit-identical to summing the corresponding single-source maps.
RfMap compute_map(std::span<const Transmitter> transmitters,
                  std::optional<double> freq_filter, double rx_height_m,
                  double rx_gain_dbi, const PropagationModel& model,
                  const Grid& grid);

// Row-major CSV raster in dBm; zero-power cells become the -999.0 sentinel.
void write_map_csv(std::ostream& out, const RfMap& map);

}  // namespace rdz
