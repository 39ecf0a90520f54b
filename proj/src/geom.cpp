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

#include "estpred/geom.hpp"

#include "estpred/error.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace estpred
{

namespace
{

constexpr double kOrthonormalTolerance = 1e-9;

Eigen::Matrix3d orthonormalized(const Eigen::Matrix3d & r)
{
  const double det = r.determinant();
  if (!(det > 0.0)) {
    throw ContractError("rotation matrix has non-positive determinant");
  }
  const double drift = (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  if (drift <= kOrthonormalTolerance && std::abs(det - 1.0) <= kOrthonormalTolerance) {
    return r;
  }
  // Nearest rotation in the Frobenius sense.
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) {
    u.col(2) *= -1.0;
  }
  return u * v.transpose();
}

}  // namespace

double normalize_angle(double angle)
{
  constexpr double pi = std::numbers::pi;
  if (angle > -pi && angle <= pi) {
    return angle;
  }
  double a = std::fmod(angle + pi, 2.0 * pi);
  if (a <= 0.0) {
    a += 2.0 * pi;
  }
  return a - pi;
}

Pose3::Pose3() : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}

Pose3::Pose3(const Eigen::Matrix3d & rotation, const Eigen::Vector3d & translation)
: rotation_(orthonormalized(rotation)), translation_(translation)
{
}

Pose3 Pose3::from_quaternion(
  double qx, double qy, double qz, double qw, const Eigen::Vector3d & translation)
{
  Eigen::Quaterniond q(qw, qx, qy, qz);
  if (q.norm() == 0.0) {
    throw ContractError("zero quaternion");
  }
  q.normalize();
  return Pose3(q.toRotationMatrix(), translation);
}

Pose3 Pose3::from_matrix(const Eigen::Matrix4d & m)
{
  return Pose3(m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>());
}

Pose3 Pose3::inverse() const
{
  const Eigen::Matrix3d rt = rotation_.transpose();
  return Pose3(rt, -(rt * translation_));
}

Eigen::Matrix4d Pose3::matrix() const
{
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

double Pose3::rotation_angle() const
{
  const double c = std::clamp((rotation_.trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

Pose3 operator*(const Pose3 & lhs, const Pose3 & rhs)
{
  return Pose3(lhs.rotation_ * rhs.rotation_, lhs.rotation_ * rhs.translation_ + lhs.translation_);
}

AxisConvention parse_axis_convention(std::string_view label)
{
  if (label == "world-xy") {
    return AxisConvention::world_xy;
  }
  if (label == "camera-xz") {
    return AxisConvention::camera_xz;
  }
  throw ConfigError("unknown axis convention '" + std::string(label) +
                    "' (expected world-xy or camera-xz)");
}

std::string_view to_string(AxisConvention convention)
{
  switch (convention) {
    case AxisConvention::world_xy:
      return "world-xy";
    case AxisConvention::camera_xz:
      return "camera-xz";
  }
  return "?";
}

Pose3 recover_pose(const Motion3 & motion, const Pose3 & prev_pose)
{
  return motion.transform * prev_pose;
}

std::vector<Pose3> recover_track(std::span<const Motion3> motions, const Pose3 & initial_pose)
{
  if (motions.empty()) {
    throw DataError("recover_track: empty motion sequence");
  }
  std::vector<Pose3> poses;
  poses.reserve(motions.size() + 1);
  poses.push_back(initial_pose);
  for (const auto & motion : motions) {
    poses.push_back(recover_pose(motion, poses.back()));
  }
  return poses;
}

Pose2 project_to_plane(const Pose3 & pose, AxisConvention convention)
{
  const auto & t = pose.translation();
  const auto & r = pose.rotation();
  switch (convention) {
    case AxisConvention::world_xy:
      return Pose2(t.x(), t.y(), std::atan2(r(1, 0), r(0, 0)));
    case AxisConvention::camera_xz:
      return Pose2(t.x(), t.z(), std::atan2(r(2, 0), r(0, 0)));
  }
  throw ConfigError("unhandled axis convention");
}

Eigen::Matrix3d rotation_about_y(double angle)
{
  return Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitY()).toRotationMatrix();
}

}  // namespace estpred
