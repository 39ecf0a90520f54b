// Copyright 2026 The estpred Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ESTPRED__GEOM_HPP_
#define ESTPRED__GEOM_HPP_

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <span>
#include <string_view>
#include <vector>

namespace estpred
{

/// Wraps an angle into (-pi, pi].
double normalize_angle(double angle);

/**
 * @brief Rigid SE(3) transform with a rotation matrix and a translation [m].
 *
 * The rotation is projected back onto SO(3) at construction whenever it
 * drifts more than 1e-9 from orthonormal. A reflection is rejected.
 */
class Pose3
{
public:
  Pose3();
  Pose3(const Eigen::Matrix3d & rotation, const Eigen::Vector3d & translation);

  static Pose3 identity() { return Pose3{}; }
  /// Quaternion in (x, y, z, w) order; normalized before conversion.
  static Pose3 from_quaternion(
    double qx, double qy, double qz, double qw, const Eigen::Vector3d & translation);
  static Pose3 from_matrix(const Eigen::Matrix4d & m);

  const Eigen::Matrix3d & rotation() const { return rotation_; }
  const Eigen::Vector3d & translation() const { return translation_; }

  Pose3 inverse() const;
  Eigen::Matrix4d matrix() const;
  Eigen::Quaterniond quaternion() const { return Eigen::Quaterniond(rotation_); }
  Eigen::Vector3d transform_point(const Eigen::Vector3d & p) const
  {
    return rotation_ * p + translation_;
  }

  /// Rotation angle of the relative rotation [rad], in [0, pi].
  double rotation_angle() const;

  friend Pose3 operator*(const Pose3 & lhs, const Pose3 & rhs);

private:
  Eigen::Matrix3d rotation_;
  Eigen::Vector3d translation_;
};

/// World-centric frame-to-frame object motion. Left-composes onto a pose.
struct Motion3
{
  Pose3 transform;

  static Motion3 identity() { return Motion3{Pose3::identity()}; }
  /// The motion that carries `from` onto `to`: to * from^-1.
  static Motion3 between(const Pose3 & from, const Pose3 & to)
  {
    return Motion3{to * from.inverse()};
  }
  Motion3 inverse() const { return Motion3{transform.inverse()}; }
};

/// Planar pose; heading is kept in (-pi, pi].
class Pose2
{
public:
  Pose2() = default;
  Pose2(double x, double y, double heading) : x_(x), y_(y), heading_(normalize_angle(heading)) {}

  double x() const { return x_; }
  double y() const { return y_; }
  double heading() const { return heading_; }
  Eigen::Vector2d position() const { return {x_, y_}; }

private:
  double x_ = 0.0;
  double y_ = 0.0;
  double heading_ = 0.0;
};

/**
 * Which two world axes span the prediction plane.
 *
 * world_xy:  planar (x, y) = (t.x, t.y), z is up.
 * camera_xz: planar (x, y) = (t.x, t.z), the KITTI camera frame (x right,
 *            y down, z forward). (x, z) is right-handed about -y (up).
 *
 * In both cases the heading is the direction of the body x-axis projected
 * onto the plane.
 */
enum class AxisConvention { world_xy, camera_xz };

/// Accepts "world-xy" and "camera-xz"; throws ConfigError otherwise.
AxisConvention parse_axis_convention(std::string_view label);
std::string_view to_string(AxisConvention convention);

/// Next object pose from a world-centric motion: motion * prev_pose.
Pose3 recover_pose(const Motion3 & motion, const Pose3 & prev_pose);

/// Poses [initial, M0*initial, M1*M0*initial, ...]. Throws DataError on an empty sequence.
std::vector<Pose3> recover_track(std::span<const Motion3> motions, const Pose3 & initial_pose);

Pose2 project_to_plane(const Pose3 & pose, AxisConvention convention);

/// Rotation about the camera y-axis, used for KITTI rotation_y.
Eigen::Matrix3d rotation_about_y(double angle);

}  // namespace estpred

#endif  // ESTPRED__GEOM_HPP_
