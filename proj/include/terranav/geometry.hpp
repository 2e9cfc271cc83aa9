#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace terranav {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

constexpr double kPi = 3.14159265358979323846;

// Wrap to (-pi, pi]. -pi maps to +pi.
inline double wrap_angle(double a) {
  double w = std::fmod(a + kPi, 2.0 * kPi);
  if (w <= 0.0) w += 2.0 * kPi;
  return w - kPi;
}

// Body convention (right-handed, world z up, body x forward, y left):
//   roll  phi  — rotation about body x, left side up positive
//   pitch psi  — nose-up positive
//   yaw        — right-handed about world z
// Body-to-world: R = rot_yaw(yaw) * rot_pitch(pitch) * rot_roll(roll).
// Leveling a body-frame cloud (yaw kept): p_level = rot_pitch * rot_roll * p.

inline Mat3 rot_roll(double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  Mat3 r;
  r << 1, 0, 0,
       0, c, -s,
       0, s, c;
  return r;
}

inline Mat3 rot_pitch(double psi) {
  const double c = std::cos(psi), s = std::sin(psi);
  Mat3 r;
  r << c, 0, -s,
       0, 1, 0,
       s, 0, c;
  return r;
}

inline Mat3 rot_yaw(double yaw) {
  const double c = std::cos(yaw), s = std::sin(yaw);
  Mat3 r;
  r << c, -s, 0,
       s, c, 0,
       0, 0, 1;
  return r;
}

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;

  Vec3 position() const { return {x, y, z}; }
  Vec2 position_2d() const { return {x, y}; }
  Mat3 rotation() const { return rot_yaw(yaw) * rot_pitch(pitch) * rot_roll(roll); }

  void normalize_angles() {
    roll = wrap_angle(roll);
    pitch = wrap_angle(pitch);
    yaw = wrap_angle(yaw);
  }
};

// Roll/pitch of a body (after yaw) whose z axis should align with the unit
// normal n of a support plane. Inverse of R = rot_yaw*rot_pitch*rot_roll
// applied to e_z.
inline void attitude_from_normal(const Vec3& unit_normal, double yaw,
                                 double& roll, double& pitch) {
  const Vec3 m = rot_yaw(-yaw) * unit_normal;
  double sy = -m.y();
  sy = std::max(-1.0, std::min(1.0, sy));
  roll = std::asin(sy);
  pitch = std::atan2(-m.x(), m.z());
}

}  // namespace terranav
