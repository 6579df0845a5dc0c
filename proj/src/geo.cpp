#include "rdz/geo.hpp"

#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rdz {

namespace {

double cross(const GridPos& o, const GridPos& a, const GridPos& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(const GridPos& p, const GridPos& a, const GridPos& b) {
  if (cross(a, b, p) != 0.0) return false;
  return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
         p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y);
}

// Proper segment intersection test for the simplicity check. Shared
// endpoints of adjacent edges are allowed.
bool segments_cross(const GridPos& a, const GridPos& b, const GridPos& c,
                    const GridPos& d) {
  const double d1 = cross(c, d, a);
  const double d2 = cross(c, d, b);
  const double d3 = cross(a, b, c);
  const double d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment(a, c, d)) return true;
  if (d2 == 0 && on_segment(b, c, d)) return true;
  if (d3 == 0 && on_segment(c, a, b)) return true;
  if (d4 == 0 && on_segment(d, a, b)) return true;
  return false;
}

}  // namespace

Grid::Grid(int width, int height, double cell_size_m)
    : Grid(width, height, cell_size_m, FieldArray::Zero(height, width)) {}

Grid::Grid(int width, int height, double cell_size_m, FieldArray elevation_m)
    : width_(width),
      height_(height),
      cell_size_(cell_size_m),
      elevation_(std::move(elevation_m)) {
  if (width_ <= 0 || height_ <= 0)
    throw std::invalid_argument("Grid: width and height must be positive");
  if (cell_size_ <= 0.0)
    throw std::invalid_argument("Grid: cell_size must be positive");
  if (elevation_.rows() != height_ || elevation_.cols() != width_)
    throw std::invalid_argument("Grid: elevation raster must be height x width");
  if ((elevation_ < 0.0).any())
    throw std::invalid_argument("Grid: elevation entries must be >= 0");
  max_elevation_ = elevation_.size() > 0 ? elevation_.maxCoeff() : 0.0;
}

GridPos Grid::clamp(GridPos p) const {
  p.x = std::min(std::max(p.x, 0.0), width_ - 1.0);
  p.y = std::min(std::max(p.y, 0.0), height_ - 1.0);
  return p;
}

int Grid::cell_x(const GridPos& p) const {
  const long i = std::lround(p.x);
  return static_cast<int>(std::min<long>(std::max<long>(i, 0), width_ - 1));
}

int Grid::cell_y(const GridPos& p) const {
  const long j = std::lround(p.y);
  return static_cast<int>(std::min<long>(std::max<long>(j, 0), height_ - 1));
}

ZoneBoundary::ZoneBoundary(std::vector<GridPos> polygon)
    : polygon_(std::move(polygon)) {
  if (polygon_.size() < 3)
    throw std::invalid_argument("ZoneBoundary: polygon needs >= 3 vertices");
  const std::size_t n = polygon_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const GridPos& a = polygon_[i];
    const GridPos& b = polygon_[(i + 1) % n];
    if (a == b)
      throw std::invalid_argument("ZoneBoundary: degenerate zero-length edge");
    for (std::size_t j = i + 1; j < n; ++j) {
      // Skip edges sharing a vertex with edge i.
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      const GridPos& c = polygon_[j];
      const GridPos& d = polygon_[(j + 1) % n];
      if (segments_cross(a, b, c, d))
        throw std::invalid_argument("ZoneBoundary: polygon self-intersects");
    }
  }
}

ZoneBoundary ZoneBoundary::rect(double x0, double y0, double x1, double y1) {
  const double lx = std::min(x0, x1), hx = std::max(x0, x1);
  const double ly = std::min(y0, y1), hy = std::max(y0, y1);
  return ZoneBoundary({{lx, ly}, {hx, ly}, {hx, hy}, {lx, hy}});
}

void ZoneBoundary::validate_in(const Grid& grid) const {
  for (const GridPos& v : polygon_) {
    if (!grid.in_bounds(v))
      throw std::invalid_argument("ZoneBoundary: vertex outside grid bounds");
  }
}

bool contains(const ZoneBoundary& zone, const GridPos& pos) {
  const auto& poly = zone.polygon();
  const std::size_t n = poly.size();
  // Boundary cells count as inside.
  for (std::size_t i = 0; i < n; ++i) {
    if (on_segment(pos, poly[i], poly[(i + 1) % n])) return true;
  }
  // Even-odd crossing rule with half-open edges; robust against vertices
  // lying exactly on the scanline.
  bool inside = false;
  for (std::size_t i = 0; i < n; ++i) {
    const GridPos& a = poly[i];
    const GridPos& b = poly[(i + 1) % n];
    if ((a.y > pos.y) != (b.y > pos.y)) {
      const double x_int = a.x + (pos.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (pos.x < x_int) inside = !inside;
    }
  }
  return inside;
}

long zone_area(const ZoneBoundary& zone, const Grid& grid) {
  long count = 0;
  for (int y = 0; y < grid.height(); ++y)
    for (int x = 0; x < grid.width(); ++x)
      if (contains(zone, {static_cast<double>(x), static_cast<double>(y)}))
        ++count;
  return count;
}

ZoneMask make_zone_mask(const ZoneBoundary& zone, const Grid& grid) {
  ZoneMask mask;
  mask.inside = MaskArray::Constant(grid.height(), grid.width(), false);
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (contains(zone, {static_cast<double>(x), static_cast<double>(y)})) {
        mask.inside(y, x) = true;
        ++mask.area;
      }
    }
  }
  return mask;
}

double distance_3d(const GridPos& a, double height_a_m, const GridPos& b,
                   double height_b_m, const Grid& grid) {
  const double dx = (a.x - b.x) * grid.cell_size();
  const double dy = (a.y - b.y) * grid.cell_size();
  const double dz = height_a_m - height_b_m;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

FieldArray load_elevation_csv(std::istream& in, int width, int height) {
  FieldArray out(height, width);
  std::string line;
  int row = 0;
  while (row < height && std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    int col = 0;
    while (col < width && std::getline(ss, tok, ',')) {
      out(row, col) = std::stod(tok);
      ++col;
    }
    if (col != width)
      throw std::runtime_error("elevation CSV: row " + std::to_string(row) +
                               " has " + std::to_string(col) + " of " +
                               std::to_string(width) + " columns");
    ++row;
  }
  if (row != height)
    throw std::runtime_error("elevation CSV: expected " +
                             std::to_string(height) + " rows, got " +
                             std::to_string(row));
  return out;
}

}  // namespace rdz
