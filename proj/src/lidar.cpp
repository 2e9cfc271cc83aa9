#include "terranav/lidar.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "terranav/errors.hpp"
#include "terranav/rng.hpp"

namespace terranav {

void LidarSpec::validate() const {
  if (!(max_range > 0.0)) throw std::invalid_argument("lidar: max_range must be > 0");
  if (azimuth_count < 1) throw std::invalid_argument("lidar: azimuth_count must be >= 1");
  if (noise_std < 0.0) throw std::invalid_argument("lidar: noise_std must be >= 0");
}

namespace {

// Signed clearance of the ray point above the terrain.
double ray_clearance(const TerrainField& field, const Vec3& origin,
                     const Vec3& dir, double t) {
  const Vec3 p = origin + t * dir;
  return p.z() - terrain_height(field, p.x(), p.y());
}

// First sign change of the clearance along [0, max_range], refined by
// bisection to a range interval below 0.25 mm (keeps the world-frame height
// error of the hit under 1 mm for slopes up to ~75 deg).
bool march_ray(const TerrainField& field, const Vec3& origin, const Vec3& dir,
               double max_range, double step, double& t_hit) {
  double t_prev = 0.0;
  double f_prev = ray_clearance(field, origin, dir, 0.0);
  if (f_prev < 0.0) {
    t_hit = 0.0;  // started below terrain
    return true;
  }
  for (double t = step; t <= max_range + 0.5 * step; t += step) {
    const double tc = std::min(t, max_range);
    const double f = ray_clearance(field, origin, dir, tc);
    if (f < 0.0) {
      double lo = t_prev, hi = tc;
      while (hi - lo > 2.5e-4) {
        const double mid = 0.5 * (lo + hi);
        if (ray_clearance(field, origin, dir, mid) < 0.0)
          hi = mid;
        else
          lo = mid;
      }
      t_hit = 0.5 * (lo + hi);
      return true;
    }
    t_prev = tc;
    f_prev = f;
    if (tc >= max_range) break;
  }
  return false;
}

}  // namespace

PointCloud sample_lidar(const TerrainField& field, const Pose& pose,
                        const LidarSpec& spec, double march_step) {
  spec.validate();
  if (!(march_step > 0.0)) throw std::invalid_argument("lidar: march_step must be > 0");

  const Mat3 body_to_world = pose.rotation();
  const Vec3 origin = pose.position();
  Rng rng(spec.rng_seed);

  PointCloud cloud;
  cloud.frame = CloudFrame::Sensor;
  cloud.points.reserve(static_cast<std::size_t>(spec.azimuth_count) *
                       spec.elevation_angles.size());

  for (int ia = 0; ia < spec.azimuth_count; ++ia) {
    const double az = 2.0 * kPi * ia / spec.azimuth_count;
    for (const double el : spec.elevation_angles) {
      const Vec3 dir_sensor(std::cos(el) * std::cos(az),
                            std::cos(el) * std::sin(az), std::sin(el));
      const Vec3 dir_world = body_to_world * dir_sensor;
      double t_hit = 0.0;
      if (!march_ray(field, origin, dir_world, spec.max_range, march_step,
                     t_hit))
        continue;
      double range = t_hit;
      if (spec.noise_std > 0.0) range += rng.gaussian(0.0, spec.noise_std);
      if (range > spec.max_range || range < 0.0) continue;
      cloud.points.emplace_back(dir_sensor * range);
    }
  }
  return cloud;
}

PointCloud level_pointcloud(const PointCloud& cloud, double roll, double pitch) {
  const Mat3 level = rot_pitch(pitch) * rot_roll(roll);
  PointCloud out;
  out.frame = CloudFrame::World;
  out.points.reserve(cloud.points.size());
  for (const auto& p : cloud.points) out.points.emplace_back(level * p);
  return out;
}

void write_pointcloud_csv(const PointCloud& cloud, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for write: " + path);
  os << "# frame=" << (cloud.frame == CloudFrame::Sensor ? "sensor" : "world")
     << "\n";
  char buf[96];
  for (const auto& p : cloud.points) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", p.x(), p.y(), p.z());
    os << buf;
  }
}

PointCloud read_pointcloud_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  PointCloud cloud;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.rfind("# frame=", 0) == 0) {
      const std::string f = line.substr(8);
      if (f == "sensor")
        cloud.frame = CloudFrame::Sensor;
      else if (f == "world")
        cloud.frame = CloudFrame::World;
      else
        throw ConfigError(path + ":" + std::to_string(line_no) +
                          ": unknown frame '" + f + "'");
      continue;
    }
    if (line[0] == '#') continue;
    std::istringstream ls(line);
    double x, y, z;
    char c1, c2;
    if (!(ls >> x >> c1 >> y >> c2 >> z) || c1 != ',' || c2 != ',')
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected 'x,y,z'");
    cloud.points.emplace_back(x, y, z);
  }
  return cloud;
}

}  // namespace terranav
