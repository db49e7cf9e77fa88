#pragma once

#include <Eigen/Dense>

namespace switchquad {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat8 = Eigen::Matrix<double, 8, 8>;
using Mat42 = Eigen::Matrix<double, 4, 2>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kRadToDeg = 180.0 / kPi;

// Actuated coordinates q = (z, roll, pitch, yaw); non-actuated q_u = (x, y).
namespace axis {
inline constexpr int kZ = 0;
inline constexpr int kRoll = 1;
inline constexpr int kPitch = 2;
inline constexpr int kYaw = 3;
}  // namespace axis

}  // namespace switchquad
