#include "rdz/propagation.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "rdz/parallel.hpp"

namespace rdz {

std::string to_string(PathLossKind kind) {
  switch (kind) {
    case PathLossKind::free_space: return "free-space";
    case PathLossKind::log_distance: return "log-distance";
    case PathLossKind::terrain_aware: return "terrain-aware";
  }
  return "?";
}

PathLossKind path_loss_kind_from_string(const std::string& s) {
  if (s == "free-space" || s == "free_space") return PathLossKind::free_space;
  if (s == "log-distance" || s == "log_distance")
    return PathLossKind::log_distance;
  if (s == "terrain-aware" || s == "terrain_aware")
    return PathLossKind::terrain_aware;
  throw std::invalid_argument("unknown path loss model: " + s);
}

void PropagationModel::validate() const {
  if (path_loss_exponent < 1.6 || path_loss_exponent > 6.5)
    throw std::invalid_argument("path_loss_exponent must be in [1.6, 6.5]");
  if (reference_distance_m <= 0.0)
    throw std::invalid_argument("reference_distance must be positive");
  if (obstruction_penalty_db < 0.0 || obstruction_cap_db < 0.0)
    throw std::invalid_argument("obstruction penalty/cap must be >= 0");
}

double free_space_loss_db(double distance_m, double frequency_mhz) {
  return 20.0 * std::log10(distance_m / 1000.0) +
         20.0 * std::log10(frequency_mhz) + 32.45;
}

int obstructed_cells(const Grid& grid, const GridPos& a, double height_a_m,
                     const GridPos& b, double height_b_m, int stop_after) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double cheby = std::max(std::abs(dx), std::abs(dy));
  const int n = static_cast<int>(std::ceil(cheby));
  if (n <= 1) return 0;

  const int ax = grid.cell_x(a), ay = grid.cell_y(a);
  const int bx = grid.cell_x(b), by = grid.cell_y(b);
  const double inv_n = 1.0 / n;
  const double sx = dx * inv_n;
  const double sy = dy * inv_n;
  const double sh = (height_b_m - height_a_m) * inv_n;
  const double* elev = grid.elevation().data();
  const int w = grid.width();

  double px = a.x, py = a.y, ph = height_a_m;
  int last_cx = ax, last_cy = ay;
  int count = 0;
  for (int k = 1; k < n; ++k) {
    px += sx;
    py += sy;
    ph += sh;
    const int cx = static_cast<int>(px + 0.5);  // round half up; px >= 0
    const int cy = static_cast<int>(py + 0.5);
    if (cx == last_cx && cy == last_cy) continue;  // count cells, not samples
    last_cx = cx;
    last_cy = cy;
    if ((cx == ax && cy == ay) || (cx == bx && cy == by)) continue;
    if (elev[cy * w + cx] > ph) {
      if (++count >= stop_after) return count;
    }
  }
  return count;
}

namespace {

// Per-transmitter constants hoisted out of the per-cell loops.
struct TxLink {
  double x, y;
  double habs;      // terrain + antenna height at the transmitter
  double eirp_dbm;  // tx power + tx gain + rx gain
  double freq_term; // 20 log10(f) + 32.45
  double ref_m;
  double ref_loss_db;
  double exp10;     // 10 * path_loss_exponent
};

TxLink make_link(const Transmitter& tx, double rx_gain_dbi,
                 const PropagationModel& model, const Grid& grid) {
  TxLink link;
  link.x = tx.pos.x;
  link.y = tx.pos.y;
  link.habs =
      grid.elevation_at(grid.cell_x(tx.pos), grid.cell_y(tx.pos)) + tx.height_m;
  link.eirp_dbm = tx.tx_power_dbm + tx.gain_dbi + rx_gain_dbi;
  link.freq_term = 20.0 * std::log10(tx.frequency_mhz) + 32.45;
  link.ref_m = model.reference_distance_m;
  link.ref_loss_db = free_space_loss_db(model.reference_distance_m,
                                        tx.frequency_mhz);
  link.exp10 = 10.0 * model.path_loss_exponent;
  return link;
}

// Adds one transmitter's linear-mW field to `out`. Cell order is fixed, so
// accumulating transmitters in fleet order gives the same bits as summing
// their individual maps.
void accumulate_field(FieldArray& out, const Transmitter& tx,
                      double rx_height_m, double rx_gain_dbi,
                      const PropagationModel& model, const Grid& grid) {
  if (tx.frequency_mhz <= 0.0)
    throw std::invalid_argument("transmitter frequency must be positive");
  model.validate();

  const TxLink link = make_link(tx, rx_gain_dbi, model, grid);
  const bool terrain = model.kind == PathLossKind::terrain_aware &&
                       grid.max_elevation() > 0.0;
  const bool free_space = model.kind == PathLossKind::free_space;
  const int stop_after =
      model.obstruction_penalty_db > 0.0
          ? static_cast<int>(std::ceil(model.obstruction_cap_db /
                                       model.obstruction_penalty_db))
          : 0;
  const double cs = grid.cell_size();
  const double* elev = grid.elevation().data();
  const int w = grid.width();

  parallel_for(grid.height(), [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      double* row = out.data() + static_cast<long>(y) * w;
      for (int x = 0; x < w; ++x) {
        const double rx_habs = elev[y * w + x] + rx_height_m;
        const double ddx = (link.x - x) * cs;
        const double ddy = (link.y - y) * cs;
        const double ddz = link.habs - rx_habs;
        const double d =
            std::max(std::sqrt(ddx * ddx + ddy * ddy + ddz * ddz), link.ref_m);
        double loss;
        if (free_space) {
          loss = 20.0 * std::log10(d / 1000.0) + link.freq_term;
        } else {
          loss = link.ref_loss_db + link.exp10 * std::log10(d / link.ref_m);
          if (terrain && stop_after > 0) {
            const int blocked = obstructed_cells(
                grid, tx.pos, link.habs,
                {static_cast<double>(x), static_cast<double>(y)}, rx_habs,
                stop_after);
            loss += std::min(blocked * model.obstruction_penalty_db,
                             model.obstruction_cap_db);
          }
        }
        if (loss < 0.0) loss = 0.0;
        row[x] += dbm_to_mw(link.eirp_dbm - loss);
      }
    }
  });
}

}  // namespace

double path_loss_db(const PropagationModel& model, const Grid& grid,
                    const GridPos& tx_pos, double tx_height_m,
                    const GridPos& rx_pos, double rx_height_m,
                    double frequency_mhz) {
  if (frequency_mhz <= 0.0)
    throw std::invalid_argument("frequency must be positive");
  model.validate();

  const double tx_habs =
      grid.elevation_at(grid.cell_x(tx_pos), grid.cell_y(tx_pos)) + tx_height_m;
  const double rx_habs =
      grid.elevation_at(grid.cell_x(rx_pos), grid.cell_y(rx_pos)) + rx_height_m;
  const double d = std::max(distance_3d(tx_pos, tx_habs, rx_pos, rx_habs, grid),
                            model.reference_distance_m);

  double loss;
  switch (model.kind) {
    case PathLossKind::free_space:
      loss = free_space_loss_db(d, frequency_mhz);
      break;
    case PathLossKind::log_distance:
    case PathLossKind::terrain_aware: {
      loss = free_space_loss_db(model.reference_distance_m, frequency_mhz) +
             10.0 * model.path_loss_exponent *
                 std::log10(d / model.reference_distance_m);
      if (model.kind == PathLossKind::terrain_aware &&
          model.obstruction_penalty_db > 0.0) {
        const int stop_after = static_cast<int>(
            std::ceil(model.obstruction_cap_db / model.obstruction_penalty_db));
        const int blocked = obstructed_cells(grid, tx_pos, tx_habs, rx_pos,
                                             rx_habs, stop_after);
        loss += std::min(blocked * model.obstruction_penalty_db,
                         model.obstruction_cap_db);
      }
      break;
    }
    default:
      throw std::logic_error("unhandled path loss kind");
  }
  return std::max(loss, 0.0);
}

double received_power_dbm(const Transmitter& tx, const GridPos& rx_pos,
                          double rx_height_m, double rx_gain_dbi,
                          const PropagationModel& model, const Grid& grid) {
  const double loss = path_loss_db(model, grid, tx.pos, tx.height_m, rx_pos,
                                   rx_height_m, tx.frequency_mhz);
  return tx.tx_power_dbm + tx.gain_dbi + rx_gain_dbi - loss;
}

RfMap single_source_map(const Transmitter& tx, double rx_height_m,
                        double rx_gain_dbi, const PropagationModel& model,
                        const Grid& grid) {
  RfMap map;
  map.power_mw = FieldArray::Zero(grid.height(), grid.width());
  map.frequency_mhz = tx.frequency_mhz;
  accumulate_field(map.power_mw, tx, rx_height_m, rx_gain_dbi, model, grid);
  return map;
}

RfMap compute_map(std::span<const Transmitter> transmitters,
                  std::optional<double> freq_filter, double rx_height_m,
                  double rx_gain_dbi, const PropagationModel& model,
                  const Grid& grid) {
  RfMap map;
  map.power_mw = FieldArray::Zero(grid.height(), grid.width());
  map.frequency_mhz = freq_filter;
  for (const Transmitter& tx : transmitters) {
    if (!tx.enabled) continue;
    if (freq_filter && tx.frequency_mhz != *freq_filter) continue;
    accumulate_field(map.power_mw, tx, rx_height_m, rx_gain_dbi, model, grid);
  }
  return map;
}

void write_map_csv(std::ostream& out, const RfMap& map) {
  char buf[32];
  for (long y = 0; y < map.power_mw.rows(); ++y) {
    for (long x = 0; x < map.power_mw.cols(); ++x) {
      const double p = map.power_mw(y, x);
      const double dbm = p > 0.0 ? 10.0 * std::log10(p) : kNoPowerDbm;
      std::snprintf(buf, sizeof(buf), "%.4f", dbm);
      if (x) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace rdz
