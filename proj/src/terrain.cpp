#include "terranav/terrain.hpp"

#include <cmath>

namespace terranav {

namespace {

double primitive_height(const GaussianHill& h, double x, double y) {
  const double dx = x - h.center.x();
  const double dy = y - h.center.y();
  const double d2 = dx * dx + dy * dy;
  return h.amplitude * std::exp(-d2 / (2.0 * h.spread * h.spread));
}

double primitive_height(const Ridge& r, double x, double y) {
  const Vec2 p(x, y);
  const Vec2 ab = r.b - r.a;
  const double len2 = ab.squaredNorm();
  double t = 0.0;
  if (len2 > 0.0) {
    t = (p - r.a).dot(ab) / len2;
    t = std::max(0.0, std::min(1.0, t));
  }
  const double d2 = (p - (r.a + t * ab)).squaredNorm();
  return r.height * std::exp(-d2 / (2.0 * r.width * r.width));
}

double primitive_height(const Step& s, double x, double y) {
  const Vec2 p(x, y);
  const double signed_dist = s.normal.dot(p - s.boundary_point);
  return signed_dist > 0.0 ? s.rise : 0.0;
}

double primitive_height(const Plane& pl, double x, double y) {
  return pl.gradient.x() * x + pl.gradient.y() * y;
}

}  // namespace

double terrain_height(const TerrainField& field, double x, double y) {
  double z = field.base_height;
  for (const auto& prim : field.primitives) {
    z += std::visit([&](const auto& p) { return primitive_height(p, x, y); },
                    prim);
  }
  return z;
}

bool fit_plane(const std::vector<Vec3>& points, double& a, double& b,
               double& c) {
  // Normal equations of z = a*x + b*y + c, built around the centroid for
  // conditioning.
  Vec3 centroid = Vec3::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());

  Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
  Eigen::Vector3d atz = Eigen::Vector3d::Zero();
  for (const auto& p : points) {
    const Eigen::Vector3d row(p.x() - centroid.x(), p.y() - centroid.y(), 1.0);
    ata += row * row.transpose();
    atz += row * (p.z() - centroid.z());
  }
  const double det = ata.determinant();
  if (!(std::abs(det) > 1e-12)) return false;
  const Eigen::Vector3d sol = ata.ldlt().solve(atz);
  if (!sol.allFinite()) return false;
  a = sol(0);
  b = sol(1);
  c = sol(2) + centroid.z() - a * centroid.x() - b * centroid.y();
  return true;
}

TerrainAttitude attitude_on_terrain(const TerrainField& field, double x,
                                    double y, double yaw,
                                    double footprint_half_extent) {
  const double h = footprint_half_extent;
  std::vector<Vec3> samples;
  samples.reserve(25);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double sx = x - h + (2.0 * h / 4.0) * j;
      const double sy = y - h + (2.0 * h / 4.0) * i;
      samples.emplace_back(sx, sy, terrain_height(field, sx, sy));
    }
  }

  TerrainAttitude out;
  double a = 0.0, b = 0.0, c = 0.0;
  if (!fit_plane(samples, a, b, c)) {
    // Co-linear degenerate samples: level plane at the center height.
    out.z = terrain_height(field, x, y);
    return out;
  }
  out.z = a * x + b * y + c;
  const Vec3 normal = Vec3(-a, -b, 1.0).normalized();
  attitude_from_normal(normal, yaw, out.roll, out.pitch);
  return out;
}

}  // namespace terranav
