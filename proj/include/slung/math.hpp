#pragma once

#include <Eigen/Dense>

namespace slung {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Inertial frame convention: e3 points along gravity, so altitude gain is
// negative z and a payload hangs in the +e3 direction below the vehicle.
inline const Vec3 kGravityDir{0.0, 0.0, 1.0};

// Skew-symmetric matrix of v: hat(v) * w == v x w.
inline Mat3 hat(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

// Body-to-inertial rotation from ZYX Euler angles (phi, theta, psi).
inline Mat3 euler_zyx_to_rotation(const Vec3& euler) {
  const double cphi = std::cos(euler.x()), sphi = std::sin(euler.x());
  const double cth = std::cos(euler.y()), sth = std::sin(euler.y());
  const double cpsi = std::cos(euler.z()), spsi = std::sin(euler.z());
  Mat3 r;
  r << cth * cpsi, sphi * sth * cpsi - cphi * spsi, cphi * sth * cpsi + sphi * spsi,
       cth * spsi, sphi * sth * spsi + cphi * cpsi, cphi * sth * spsi - sphi * cpsi,
       -sth, sphi * cth, cphi * cth;
  return r;
}

// Maps body angular rates to ZYX Euler angle rates. Singular at |theta| = pi/2;
// callers guard the gimbal region before getting near it.
inline Vec3 body_rates_to_euler_rates(const Vec3& euler, const Vec3& omega) {
  const double cphi = std::cos(euler.x()), sphi = std::sin(euler.x());
  const double cth = std::cos(euler.y()), tth = std::tan(euler.y());
  return Vec3(omega.x() + sphi * tth * omega.y() + cphi * tth * omega.z(),
              cphi * omega.y() - sphi * omega.z(),
              (sphi * omega.y() + cphi * omega.z()) / cth);
}

inline double clamp_abs(double x, double limit) {
  return std::clamp(x, -limit, limit);
}

}  // namespace slung
