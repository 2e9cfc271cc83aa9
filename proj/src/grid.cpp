#include "terranav/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "terranav/errors.hpp"

namespace terranav {

void GridSpec::validate() const {
  if (!(width > 0.0 && height > 0.0))
    throw std::invalid_argument("grid: width/height must be > 0");
  if (!(resolution > 0.0))
    throw std::invalid_argument("grid: resolution must be > 0");
  if (cols() < 3 || rows() < 3)
    throw std::invalid_argument("grid: needs at least 3x3 cells");
}

int GridSpec::cols() const {
  return static_cast<int>(std::ceil(width / resolution - 1e-9));
}

int GridSpec::rows() const {
  return static_cast<int>(std::ceil(height / resolution - 1e-9));
}

int GridSpec::col_of(double x) const {
  return static_cast<int>(std::floor((x + half_extent_x()) / resolution));
}

int GridSpec::row_of(double y) const {
  return static_cast<int>(std::floor((y + half_extent_y()) / resolution));
}

const char* layer_tag(GridLayer layer) {
  switch (layer) {
    case GridLayer::Elevation: return "elevation";
    case GridLayer::Variance: return "variance";
    case GridLayer::Slope: return "slope";
    case GridLayer::Flatness: return "flatness";
    case GridLayer::Step: return "step";
    case GridLayer::Traversability: return "traversability";
  }
  return "unknown";
}

namespace {

GridLayer layer_from_tag(const std::string& tag) {
  if (tag == "elevation") return GridLayer::Elevation;
  if (tag == "variance") return GridLayer::Variance;
  if (tag == "slope") return GridLayer::Slope;
  if (tag == "flatness") return GridLayer::Flatness;
  if (tag == "step") return GridLayer::Step;
  if (tag == "traversability") return GridLayer::Traversability;
  throw ConfigError("unknown layer tag '" + tag + "'");
}

}  // namespace

double GridMap::interpolate(double x, double y) const {
  if (!spec.contains(x, y))
    throw std::invalid_argument("interpolate: point outside grid bounds");
  const int nx = spec.cols(), ny = spec.rows();
  // Continuous cell-center coordinates.
  double u = (x + spec.half_extent_x()) / spec.resolution - 0.5;
  double v = (y + spec.half_extent_y()) / spec.resolution - 0.5;
  u = std::max(0.0, std::min(static_cast<double>(nx - 1), u));
  v = std::max(0.0, std::min(static_cast<double>(ny - 1), v));
  const int j0 = std::min(nx - 2, static_cast<int>(std::floor(u)));
  const int i0 = std::min(ny - 2, static_cast<int>(std::floor(v)));
  const double fu = u - j0;
  const double fv = v - i0;
  return values(i0, j0) * (1 - fu) * (1 - fv) +
         values(i0, j0 + 1) * fu * (1 - fv) +
         values(i0 + 1, j0) * (1 - fu) * fv +
         values(i0 + 1, j0 + 1) * fu * fv;
}

void write_pgm(const GridMap& map, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for write: " + path);
  const double lo = map.values.minCoeff();
  const double hi = map.values.maxCoeff();
  char buf[128];
  os << "P2\n";
  std::snprintf(buf, sizeof(buf), "# scale min=%.17g max=%.17g layer=%s\n", lo,
                hi, layer_tag(map.layer));
  os << buf;
  os << map.spec.cols() << " " << map.spec.rows() << "\n65535\n";
  const double range = hi - lo;
  for (int i = 0; i < map.spec.rows(); ++i) {
    for (int j = 0; j < map.spec.cols(); ++j) {
      int gray = 0;
      if (range > 0.0)
        gray = static_cast<int>(
            std::lround((map.values(i, j) - lo) / range * 65535.0));
      os << gray << (j + 1 == map.spec.cols() ? "" : " ");
    }
    os << "\n";
  }
}

GridMap read_pgm(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::string magic;
  is >> magic;
  if (magic != "P2") throw ConfigError(path + ": not an ASCII PGM (P2)");
  is.ignore();

  std::string comment;
  std::getline(is, comment);
  double lo = 0.0, hi = 0.0;
  char tag[64] = {0};
  if (std::sscanf(comment.c_str(), "# scale min=%lf max=%lf layer=%63s", &lo,
                  &hi, tag) != 3)
    throw ConfigError(path + ": missing scale comment");

  int nx = 0, ny = 0, maxval = 0;
  if (!(is >> nx >> ny >> maxval) || maxval != 65535)
    throw ConfigError(path + ": bad PGM header");

  GridSpec spec;
  spec.resolution = 1.0;  // physical extent is not stored in the PGM
  spec.width = nx;
  spec.height = ny;
  GridMap map(spec, layer_from_tag(tag));
  const double range = hi - lo;
  for (int i = 0; i < ny; ++i)
    for (int j = 0; j < nx; ++j) {
      long gray = 0;
      if (!(is >> gray)) throw ConfigError(path + ": truncated pixel data");
      map.values(i, j) = lo + (range > 0.0 ? gray / 65535.0 * range : 0.0);
    }
  return map;
}

void write_grid_csv(const GridMap& map, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for write: " + path);
  char buf[40];
  for (int i = 0; i < map.spec.rows(); ++i) {
    for (int j = 0; j < map.spec.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", map.values(i, j));
      os << buf << (j + 1 == map.spec.cols() ? "" : ",");
    }
    os << "\n";
  }
}

}  // namespace terranav
