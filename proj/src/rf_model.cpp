#include "rdz/rf_model.hpp"

namespace rdz {

RfModel::RfModel(std::shared_ptr<const Grid> grid, PropagationModel model,
                 double probe_height_m, double probe_gain_dbi)
    : grid_(std::move(grid)),
      model_(model),
      probe_height_m_(probe_height_m),
      probe_gain_dbi_(probe_gain_dbi) {
  model_.validate();
}

std::shared_ptr<const FieldArray> RfModel::field_for(const Transmitter& tx) {
  const FieldKey key{tx.pos.x,      tx.pos.y,  tx.height_m,
                     tx.tx_power_dbm, tx.gain_dbi, tx.frequency_mhz};
  {
    std::lock_guard lock(mutex_);
    auto it = fields_.find(tx.id);
    if (it != fields_.end() && it->second.key == key) {
      ++hits_;
      return it->second.field;
    }
  }
  // Compute outside the lock; last writer wins on a race, which is harmless
  // because the result is a pure function of the key.
  auto field = std::make_shared<FieldArray>(
      single_source_map(tx, probe_height_m_, probe_gain_dbi_, model_, *grid_)
          .power_mw);
  {
    std::lock_guard lock(mutex_);
    ++misses_;
    fields_[tx.id] = Entry{key, field};
  }
  return field;
}

RfMap RfModel::aggregate_map(std::span<const Transmitter> transmitters,
                             std::optional<double> freq_filter) {
  RfMap map;
  map.power_mw = FieldArray::Zero(grid_->height(), grid_->width());
  map.frequency_mhz = freq_filter;
  for (const Transmitter& tx : transmitters) {
    if (!tx.enabled) continue;
    if (freq_filter && tx.frequency_mhz != *freq_filter) continue;
    map.power_mw += *field_for(tx);
  }
  return map;
}

double RfModel::link_dbm(const Transmitter& tx, const GridPos& rx_pos,
                         double rx_height_m, double rx_gain_dbi) const {
  return received_power_dbm(tx, rx_pos, rx_height_m, rx_gain_dbi, model_,
                            *grid_);
}

std::shared_ptr<const ZoneMask> RfModel::mask_for(const ZoneBoundary& zone) {
  {
    std::lock_guard lock(mutex_);
    for (const auto& [poly, mask] : masks_) {
      if (poly == zone.polygon()) return mask;
    }
  }
  auto mask = std::make_shared<ZoneMask>(make_zone_mask(zone, *grid_));
  std::lock_guard lock(mutex_);
  masks_.emplace_back(zone.polygon(), mask);
  if (masks_.size() > 8) masks_.erase(masks_.begin());  // zones change rarely
  return mask;
}

}  // namespace rdz
