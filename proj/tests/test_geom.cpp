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

#include "estpred/error.hpp"
#include "estpred/geom.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace estpred
{
namespace
{

using test::random_homogeneous;
using test::rigid_inverse;
using test::uniform;

constexpr double kPi = std::numbers::pi;

void expect_matrix_near(const Eigen::Matrix4d & a, const Eigen::Matrix4d & b, double tol)
{
  EXPECT_LE((a - b).cwiseAbs().maxCoeff(), tol) << "a=\n" << a << "\nb=\n" << b;
}

Eigen::Matrix4d yaw_matrix(double yaw, double tx, double ty, double tz)
{
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(0, 0) = std::cos(yaw);
  m(0, 1) = -std::sin(yaw);
  m(1, 0) = std::sin(yaw);
  m(1, 1) = std::cos(yaw);
  m(0, 3) = tx;
  m(1, 3) = ty;
  m(2, 3) = tz;
  return m;
}

TEST(NormalizeAngle, HalfOpenInterval)
{
  EXPECT_DOUBLE_EQ(normalize_angle(kPi), kPi);
  EXPECT_DOUBLE_EQ(normalize_angle(-kPi), kPi);
  EXPECT_NEAR(normalize_angle(3 * kPi), kPi, 1e-12);
  EXPECT_NEAR(normalize_angle(2 * kPi + 0.1), 0.1, 1e-12);
  EXPECT_NEAR(normalize_angle(-0.5), -0.5, 0.0);
}

TEST(NormalizeAngle, IdempotentAndTotalOverWideRange)
{
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20000; ++i) {
    const double a = uniform(rng, -10 * kPi, 10 * kPi);
    const double n = normalize_angle(a);
    ASSERT_GT(n, -kPi);
    ASSERT_LE(n, kPi);
    ASSERT_EQ(normalize_angle(n), n);
    // Same direction as the input.
    ASSERT_NEAR(std::cos(n), std::cos(a), 1e-9);
    ASSERT_NEAR(std::sin(n), std::sin(a), 1e-9);
  }
}

TEST(Pose3, RotationIsOrthonormal)
{
  Eigen::Matrix3d nearly = Eigen::Matrix3d::Identity();
  nearly(0, 1) = 1e-7;
  const Pose3 p(nearly, Eigen::Vector3d::Zero());
  EXPECT_LE(
    (p.rotation() * p.rotation().transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(),
    1e-9);
  EXPECT_NEAR(p.rotation().determinant(), 1.0, 1e-9);
}

TEST(Pose3, ReflectionIsRejected)
{
  Eigen::Matrix3d reflection = Eigen::Matrix3d::Identity();
  reflection(2, 2) = -1.0;
  EXPECT_THROW(Pose3(reflection, Eigen::Vector3d::Zero()), ContractError);
}

TEST(Pose3, ComposeWithInverseIsIdentity)
{
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const Pose3 p = Pose3::from_matrix(random_homogeneous(rng));
    expect_matrix_near((p * p.inverse()).matrix(), Eigen::Matrix4d::Identity(), 1e-9);
    expect_matrix_near((p.inverse() * p).matrix(), Eigen::Matrix4d::Identity(), 1e-9);
  }
}

TEST(Pose3, QuaternionRoundTrip)
{
  const double h = std::sqrt(0.5);
  const Pose3 p = Pose3::from_quaternion(0.0, 0.0, h, h, {1, 2, 3});
  expect_matrix_near(p.matrix(), yaw_matrix(kPi / 2, 1, 2, 3), 1e-12);
  const auto q = p.quaternion();
  EXPECT_NEAR(std::abs(q.z()), h, 1e-12);
  EXPECT_NEAR(std::abs(q.w()), h, 1e-12);
}

TEST(RecoverPose, IdentityMotionKeepsPose)
{
  std::mt19937_64 rng(5);
  const Pose3 p = Pose3::from_matrix(random_homogeneous(rng));
  expect_matrix_near(recover_pose(Motion3::identity(), p).matrix(), p.matrix(), 0.0);
}

TEST(RecoverPose, AdditiveTranslations)
{
  const Motion3 m{Pose3(Eigen::Matrix3d::Identity(), {1, 0, 0})};
  const Pose3 p(Eigen::Matrix3d::Identity(), {2, 0, 0});
  const Pose3 out = recover_pose(m, p);
  EXPECT_NEAR((out.translation() - Eigen::Vector3d(3, 0, 0)).norm(), 0.0, 1e-15);
}

TEST(RecoverPose, YawAndTranslationMatchesMatrixProduct)
{
  const Eigen::Matrix4d motion = yaw_matrix(kPi / 2, 1, 0, 0);
  const Eigen::Matrix4d pose = yaw_matrix(kPi / 2, 0, 1, 0);
  const Pose3 out =
    recover_pose(Motion3{Pose3::from_matrix(motion)}, Pose3::from_matrix(pose));
  // Hand product: yaw pi, translation R_m * (0,1,0) + (1,0,0) = (0,0,0).
  Eigen::Matrix4d expected = yaw_matrix(kPi, 0, 0, 0);
  expect_matrix_near(out.matrix(), expected, 1e-12);
  expect_matrix_near(out.matrix(), motion * pose, 1e-12);
}

TEST(RecoverPose, InverseMotionRoundTrip)
{
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    const Motion3 m{Pose3::from_matrix(random_homogeneous(rng))};
    const Pose3 p = Pose3::from_matrix(random_homogeneous(rng));
    expect_matrix_near(recover_pose(m, recover_pose(m.inverse(), p)).matrix(), p.matrix(), 1e-9);
  }
}

TEST(RecoverTrack, IdentityMotions)
{
  std::mt19937_64 rng(1);
  const Pose3 p = Pose3::from_matrix(random_homogeneous(rng));
  const std::vector<Motion3> motions(3, Motion3::identity());
  const auto track = recover_track(motions, p);
  ASSERT_EQ(track.size(), 4u);
  for (const auto & pose : track) {
    expect_matrix_near(pose.matrix(), p.matrix(), 0.0);
  }
}

TEST(RecoverTrack, ThirtyTranslationSteps)
{
  const std::vector<Motion3> motions(
    30, Motion3{Pose3(Eigen::Matrix3d::Identity(), {0.1, 0, 0})});
  const auto track = recover_track(motions, Pose3::identity());
  ASSERT_EQ(track.size(), 31u);
  EXPECT_NEAR(track.back().translation().x(), 3.0, 1e-12);
  EXPECT_NEAR(track.back().translation().y(), 0.0, 1e-15);
}

TEST(RecoverTrack, RandomChainMatchesMatrixFold)
{
  std::mt19937_64 rng(23);
  std::vector<Motion3> motions;
  std::vector<Eigen::Matrix4d> raw;
  for (int i = 0; i < 10; ++i) {
    raw.push_back(random_homogeneous(rng, 1.0));
    motions.push_back(Motion3{Pose3::from_matrix(raw.back())});
  }
  const Eigen::Matrix4d initial = random_homogeneous(rng);
  const auto track = recover_track(motions, Pose3::from_matrix(initial));
  ASSERT_EQ(track.size(), 11u);
  Eigen::Matrix4d oracle = initial;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    oracle = raw[i] * oracle;
    expect_matrix_near(track[i + 1].matrix(), oracle, 1e-9);
  }
}

TEST(RecoverTrack, PairwiseMotionIsRecoverable)
{
  std::mt19937_64 rng(29);
  std::vector<Motion3> motions;
  for (int i = 0; i < 50; ++i) {
    motions.push_back(Motion3{Pose3::from_matrix(random_homogeneous(rng, 2.0))});
  }
  const auto track = recover_track(motions, Pose3::identity());
  for (std::size_t k = 1; k < track.size(); ++k) {
    const Eigen::Matrix4d h = track[k].matrix() * rigid_inverse(track[k - 1].matrix());
    expect_matrix_near(h, motions[k - 1].transform.matrix(), 1e-9);
  }
}

TEST(RecoverTrack, EmptyInputThrows)
{
  EXPECT_THROW(recover_track({}, Pose3::identity()), DataError);
}

TEST(ProjectToPlane, IdentityWorldXy)
{
  const Pose2 p = project_to_plane(Pose3::identity(), AxisConvention::world_xy);
  EXPECT_EQ(p.x(), 0.0);
  EXPECT_EQ(p.y(), 0.0);
  EXPECT_EQ(p.heading(), 0.0);
}

TEST(ProjectToPlane, YawWorldXy)
{
  const Pose3 pose = Pose3::from_matrix(yaw_matrix(kPi / 2, 1, 2, 3));
  const Pose2 p = project_to_plane(pose, AxisConvention::world_xy);
  EXPECT_NEAR(p.x(), 1.0, 1e-15);
  EXPECT_NEAR(p.y(), 2.0, 1e-15);
  EXPECT_NEAR(p.heading(), kPi / 2, 1e-12);
}

TEST(ProjectToPlane, CameraConventionRotationY)
{
  // Camera frame: x right, y down, z forward. A rotation about y by ry sends
  // the body x axis to (cos ry, 0, -sin ry); in the (x, z) plane that points
  // at atan2(-sin ry, cos ry) = -ry.
  const double ry = 0.3;
  Eigen::Matrix3d r;
  r << std::cos(ry), 0, std::sin(ry), 0, 1, 0, -std::sin(ry), 0, std::cos(ry);
  const Pose3 pose(r, {4.0, 1.5, 12.0});
  const Pose2 p = project_to_plane(pose, AxisConvention::camera_xz);
  EXPECT_NEAR(p.x(), 4.0, 1e-15);
  EXPECT_NEAR(p.y(), 12.0, 1e-15);
  EXPECT_NEAR(p.heading(), -0.3, 1e-12);
  EXPECT_LE((rotation_about_y(ry) - r).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ProjectToPlane, UnknownConventionIsConfigError)
{
  EXPECT_THROW(parse_axis_convention("world-yz"), ConfigError);
  EXPECT_EQ(parse_axis_convention("world-xy"), AxisConvention::world_xy);
  EXPECT_EQ(parse_axis_convention("camera-xz"), AxisConvention::camera_xz);
  EXPECT_EQ(to_string(AxisConvention::camera_xz), "camera-xz");
}

TEST(Pose2, HeadingIsNormalized)
{
  const Pose2 p(0, 0, 3 * kPi / 2);
  EXPECT_NEAR(p.heading(), -kPi / 2, 1e-12);
}

}  // namespace
}  // namespace estpred
