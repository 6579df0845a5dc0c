#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "rdz/units.hpp"

namespace rdz {

// Position in grid coordinates. Integer values are cell centers; fractional
// values are allowed for mobile transmitters and are rounded only when a
// cell lookup is needed.
struct GridPos {
  double x = 0.0;
  double y = 0.0;
};

inline bool operator==(const GridPos& a, const GridPos& b) {
  return a.x == b.x && a.y == b.y;
}

// Discrete terrain model: grid geometry plus per-cell terrain/building
// height in meters. Immutable after construction and safe to share across
// threads; simulation states hold it by shared_ptr.
class Grid {
 public:
  Grid(int width, int height, double cell_size_m);
  Grid(int width, int height, double cell_size_m, FieldArray elevation_m);

  int width() const { return width_; }
  int height() const { return height_; }
  double cell_size() const { return cell_size_; }

  // elevation(y, x): row-major raster, meters above datum, all >= 0.
  const FieldArray& elevation() const { return elevation_; }
  double elevation_at(int x, int y) const { return elevation_(y, x); }
  double max_elevation() const { return max_elevation_; }

  bool in_bounds(const GridPos& p) const {
    return p.x >= 0.0 && p.x <= width_ - 1.0 && p.y >= 0.0 &&
           p.y <= height_ - 1.0;
  }
  GridPos clamp(GridPos p) const;

  int cell_x(const GridPos& p) const;
  int cell_y(const GridPos& p) const;

  long cell_count() const { return static_cast<long>(width_) * height_; }

 private:
  int width_;
  int height_;
  double cell_size_;
  FieldArray elevation_;
  double max_elevation_ = 0.0;
};

// Simple polygon over grid coordinates. Cells on the boundary count as
// inside the zone.
class ZoneBoundary {
 public:
  explicit ZoneBoundary(std::vector<GridPos> polygon);

  // Axis-aligned rectangle with corners (x0,y0) and (x1,y1), inclusive.
  static ZoneBoundary rect(double x0, double y0, double x1, double y1);

  const std::vector<GridPos>& polygon() const { return polygon_; }

  // Throws if any vertex lies outside the grid.
  void validate_in(const Grid& grid) const;

  friend bool operator==(const ZoneBoundary& a, const ZoneBoundary& b) {
    return a.polygon_ == b.polygon_;
  }

 private:
  std::vector<GridPos> polygon_;
};

// True iff pos is strictly inside or on the polygon boundary.
bool contains(const ZoneBoundary& zone, const GridPos& pos);

// Number of grid cell centers inside the zone.
long zone_area(const ZoneBoundary& zone, const Grid& grid);

// Per-cell inside/outside rasterization of a zone, with the area attached.
struct ZoneMask {
  MaskArray inside;  // (y, x)
  long area = 0;
};
ZoneMask make_zone_mask(const ZoneBoundary& zone, const Grid& grid);

// Euclidean distance in meters between two positioned antennas; heights are
// in meters and the horizontal leg is converted through cell_size.
double distance_3d(const GridPos& a, double height_a_m, const GridPos& b,
                   double height_b_m, const Grid& grid);

// Row-major CSV raster of per-cell heights (width columns x height rows).
FieldArray load_elevation_csv(std::istream& in, int width, int height);

}  // namespace rdz
