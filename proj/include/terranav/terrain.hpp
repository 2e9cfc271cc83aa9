#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "terranav/geometry.hpp"

namespace terranav {

// Analytic ground-truth terrain primitives. All heights are superposed;
// evaluation is pure and involves no RNG.

struct GaussianHill {
  Vec2 center{0.0, 0.0};
  double amplitude = 0.0;  // m, may be negative (pit)
  double spread = 1.0;     // m, > 0
};

// Gaussian cross-section crest along the segment [a, b]; distance is taken
// to the segment, so ridges are finite and gaps between collinear segments
// form passable saddles.
struct Ridge {
  Vec2 a{0.0, 0.0};
  Vec2 b{1.0, 0.0};
  double height = 0.0;  // m
  double width = 1.0;   // m, > 0 (cross-section std dev)
};

// Hard step of `rise` on the positive side of the half-plane through
// `boundary_point` with outward normal `normal`.
struct Step {
  Vec2 boundary_point{0.0, 0.0};
  Vec2 normal{1.0, 0.0};  // normalized on construction/parse
  double rise = 0.0;      // m
};

struct Plane {
  Vec2 gradient{0.0, 0.0};  // dz/dx, dz/dy
};

using TerrainPrimitive = std::variant<GaussianHill, Ridge, Step, Plane>;

struct TerrainField {
  std::vector<TerrainPrimitive> primitives;
  double base_height = 0.0;
  std::uint64_t rng_seed = 0;
};

// Sum of all primitive contributions plus base_height. Pure.
double terrain_height(const TerrainField& field, double x, double y);

// Least-squares plane fit to terrain_height on a 5x5 grid over the footprint
// square centered at (x, y). Returns the plane height at the center and the
// roll/pitch aligning the yawed body frame with the plane normal. Degenerate
// fits fall back to normal = +z.
struct TerrainAttitude {
  double z = 0.0;
  double roll = 0.0;
  double pitch = 0.0;
};
TerrainAttitude attitude_on_terrain(const TerrainField& field, double x,
                                    double y, double yaw,
                                    double footprint_half_extent);

// Least-squares plane z = a*x + b*y + c through the given points, solved via
// 3x3 normal equations. Returns false on (near-)singular systems.
bool fit_plane(const std::vector<Vec3>& points, double& a, double& b,
               double& c);

}  // namespace terranav
