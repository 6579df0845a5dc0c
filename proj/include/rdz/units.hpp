#pragma once

#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace rdz {

// Dense rasters are stored row-major so that a CSV row maps to an array row
// and the per-cell inner loops walk contiguous memory.
using FieldArray = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MaskArray = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Sentinel written to CSV outputs for cells/sums with zero linear power
// (dBm of an empty sum is -inf) and for unsampled SINR entries.
inline constexpr double kNoPowerDbm = -999.0;

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

inline double mw_to_dbm(double mw) {
  return mw > 0.0 ? 10.0 * std::log10(mw) : kNegInf;
}

inline double db_ratio(double numerator_mw, double denominator_mw) {
  return 10.0 * std::log10(numerator_mw / denominator_mw);
}

// Expression-friendly dBm view of a linear-mW field; zero-power cells map to
// the CSV sentinel rather than -inf so exported rasters stay finite.
template <typename Derived>
auto to_dbm(const Eigen::ArrayBase<Derived>& linear_mw) {
  return linear_mw.unaryExpr(
      [](double p) { return p > 0.0 ? 10.0 * std::log10(p) : kNoPowerDbm; });
}

inline double finite_or_sentinel(double dbm) {
  return std::isfinite(dbm) ? dbm : kNoPowerDbm;
}

}  // namespace rdz
