#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "terranav/geometry.hpp"
#include "terranav/terrain.hpp"

namespace terranav {

struct LidarSpec {
  double max_range = 6.0;        // m; also the local-map radius r
  int azimuth_count = 180;       // rays per revolution
  std::vector<double> elevation_angles;  // rad
  double noise_std = 0.01;       // m, along-ray
  std::uint64_t rng_seed = 0;

  void validate() const;
};

enum class CloudFrame { Sensor, World };

struct PointCloud {
  std::vector<Vec3> points;
  CloudFrame frame = CloudFrame::Sensor;
};

// First-hit ray casting against the ground-truth terrain. Rays are cast from
// the pose origin with the pose attitude; returns sensor-frame points. Rays
// that never intersect within max_range are dropped. Gaussian noise
// (noise_std) perturbs the range; returns whose noisy range exceeds max_range
// are dropped too. Deterministic given spec.rng_seed.
PointCloud sample_lidar(const TerrainField& field, const Pose& pose,
                        const LidarSpec& spec, double march_step = 0.05);

// Removes roll and pitch (yaw kept): p_out = rot_pitch(pitch)*rot_roll(roll)*p.
PointCloud level_pointcloud(const PointCloud& cloud, double roll, double pitch);

// CSV export/import, one "x,y,z" row per point, header "# frame=<sensor|world>".
void write_pointcloud_csv(const PointCloud& cloud, const std::string& path);
PointCloud read_pointcloud_csv(const std::string& path);

}  // namespace terranav
