#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>

#include "rdz/propagation.hpp"

namespace rdz {

// Digital-twin RF service: owns the propagation model, the measurement probe
// parameters, a per-transmitter field cache, and rasterized zone masks.
//
// Cache entries are keyed by transmitter id and carry the parameter tuple
// (position, height, power, gain, frequency) the field was computed for;
// moving or re-tuning a transmitter therefore invalidates only that entry.
// The enabled flag is not part of the key: fields are as-if-enabled.
// Lookup/insert is guarded by a coarse mutex.
class RfModel {
 public:
  RfModel(std::shared_ptr<const Grid> grid, PropagationModel model,
          double probe_height_m = 1.5, double probe_gain_dbi = 0.0);

  const Grid& grid() const { return *grid_; }
  std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
  const PropagationModel& model() const { return model_; }
  double probe_height() const { return probe_height_m_; }
  double probe_gain() const { return probe_gain_dbi_; }

  // Single-transmitter field at the probe, linear mW, cached.
  std::shared_ptr<const FieldArray> field_for(const Transmitter& tx);

  // Cell-wise sum of cached fields over enabled transmitters matching
  // freq_filter; identical bits to compute_map over the same span.
  RfMap aggregate_map(std::span<const Transmitter> transmitters,
                      std::optional<double> freq_filter = std::nullopt);

  // Received power of tx at an arbitrary receiver (pure passthrough).
  double link_dbm(const Transmitter& tx, const GridPos& rx_pos,
                  double rx_height_m, double rx_gain_dbi) const;

  // Inside/outside rasterization of a zone, cached on the polygon.
  std::shared_ptr<const ZoneMask> mask_for(const ZoneBoundary& zone);

  std::uint64_t cache_hits() const { return hits_; }
  std::uint64_t cache_misses() const { return misses_; }

 private:
  struct FieldKey {
    double x, y, height_m, power_dbm, gain_dbi, freq_mhz;
    bool operator==(const FieldKey&) const = default;
  };
  struct Entry {
    FieldKey key;
    std::shared_ptr<const FieldArray> field;
  };

  std::shared_ptr<const Grid> grid_;
  PropagationModel model_;
  double probe_height_m_;
  double probe_gain_dbi_;

  std::mutex mutex_;
  std::map<std::string, Entry> fields_;
  std::vector<std::pair<std::vector<GridPos>, std::shared_ptr<const ZoneMask>>>
      masks_;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
};

}  // namespace rdz
