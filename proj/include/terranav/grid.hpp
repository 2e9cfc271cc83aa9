#pragma once

#include <string>

#include <Eigen/Dense>

#include "terranav/geometry.hpp"

namespace terranav {

// Robot-centered raster. Row i follows y, column j follows x; the robot sits
// at the grid center. Cell centers span symmetric extents derived from the
// realized cell counts, so bounds are +/- cols*resolution/2 in x.
struct GridSpec {
  double width = 12.0;       // m, x extent
  double height = 12.0;      // m, y extent
  double resolution = 0.15;  // m per cell

  void validate() const;

  int cols() const;  // ceil(width / resolution)
  int rows() const;  // ceil(height / resolution)
  double half_extent_x() const { return 0.5 * cols() * resolution; }
  double half_extent_y() const { return 0.5 * rows() * resolution; }

  double cell_x(int j) const { return (j + 0.5) * resolution - half_extent_x(); }
  double cell_y(int i) const { return (i + 0.5) * resolution - half_extent_y(); }

  bool contains(double x, double y) const {
    return x >= -half_extent_x() && x <= half_extent_x() &&
           y >= -half_extent_y() && y <= half_extent_y();
  }

  // Cell indices of the containing cell; unclamped, may be out of range.
  int col_of(double x) const;
  int row_of(double y) const;

  bool operator==(const GridSpec&) const = default;
};

enum class GridLayer { Elevation, Variance, Slope, Flatness, Step, Traversability };

const char* layer_tag(GridLayer layer);

struct GridMap {
  GridSpec spec;
  GridLayer layer = GridLayer::Elevation;
  Eigen::MatrixXd values;  // rows() x cols()

  GridMap() = default;
  GridMap(const GridSpec& s, GridLayer l, double fill = 0.0)
      : spec(s), layer(l),
        values(Eigen::MatrixXd::Constant(s.rows(), s.cols(), fill)) {}

  double& at(int i, int j) { return values(i, j); }
  double at(int i, int j) const { return values(i, j); }

  // Bilinear interpolation anchored at cell centers; constant extrapolation
  // in the half-cell band between the outer centers and the map edge.
  double interpolate(double x, double y) const;
};

// ASCII PGM (P2), max gray 65535, with the linear scaling recorded as
// "# scale min=<v> max=<v> layer=<tag>". Row 0 (lowest y) is written first.
void write_pgm(const GridMap& map, const std::string& path);

// Inverse of write_pgm using the recorded scale comment.
GridMap read_pgm(const std::string& path);

// Raw row-major CSV, one line per grid row.
void write_grid_csv(const GridMap& map, const std::string& path);

}  // namespace terranav
