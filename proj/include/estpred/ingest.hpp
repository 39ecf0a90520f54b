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

#ifndef ESTPRED__INGEST_HPP_
#define ESTPRED__INGEST_HPP_

#include "estpred/geom.hpp"
#include "estpred/track.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace estpred
{

/// Minimum per-frame displacement [m] for a differenced heading to be trusted.
inline constexpr double kMinHeadingStep = 0.01;

/// One KITTI tracking label row, reduced to what the pipeline uses.
struct CameraFrameRecord
{
  int frame = 0;
  int track_id = 0;
  std::string type;
  Eigen::Vector3d location = Eigen::Vector3d::Zero();  // camera coordinates [m]
  double rotation_y = 0.0;                             // [rad]
};

/// Records per track id, each list sorted by frame.
using CameraFrameRecords = std::map<int, std::vector<CameraFrameRecord>>;

/**
 * @brief Parses a KITTI tracking label file (17 or 18 whitespace-separated columns).
 *
 * Rows may appear in any frame order, but for one track id the frames must be
 * strictly increasing. Rows with track_id -1 (DontCare) are dropped. When
 * `type_whitelist` is non-empty only those object types are kept.
 */
CameraFrameRecords parse_kitti_tracking_labels(
  const std::filesystem::path & path, const std::set<std::string> & type_whitelist = {});

/// Estimator output for one sequence. Map points are not represented.
struct SceneBundle
{
  std::map<int, Pose3> camera_poses;                          // frame -> world camera pose
  std::map<int, std::map<int, Pose3>> object_poses;           // object -> frame -> world pose
  std::map<int, std::map<int, Motion3>> object_motions;       // object -> frame k -> H_{k-1,k}
  FrameClock clock;
  std::vector<std::string> warnings;
};

/// Translation disagreement [m] above which a motion/pose pair is reported.
inline constexpr double kMotionConsistencyTolerance = 1e-3;

/**
 * @brief Reads "frame object_id tx ty tz qx qy qz qw" rows (object 0 is the camera).
 *
 * The optional motion file has the same shape; a row at frame k holds the
 * world-centric motion from k-1 to k. A motion whose frame k pose is missing
 * fills that pose in by composing onto the k-1 pose. Disagreements above
 * kMotionConsistencyTolerance are recorded in SceneBundle::warnings.
 */
SceneBundle parse_estimator_tracks(
  const std::filesystem::path & pose_file, const FrameClock & clock,
  const std::optional<std::filesystem::path> & motion_file = std::nullopt);

/// Writes camera and object poses in the same row format the parser reads.
void write_pose_file(const std::filesystem::path & path, const SceneBundle & bundle);

enum class HeadingSource { provided, differenced };

HeadingSource parse_heading_source(std::string_view label);
std::string_view to_string(HeadingSource source);

struct FramePoint
{
  int frame = 0;
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
};

/**
 * @brief Fills speed and heading for a frame-indexed position series.
 *
 * Each run of consecutive frames is handled on its own. Speed uses central
 * differences (one-sided at run ends) times the frame rate. A differenced
 * heading follows the same displacement when it is at least kMinHeadingStep
 * per frame and otherwise repeats the previous heading; leading headings take
 * the first valid direction, or 0 if the run never moves.
 */
std::vector<AgentState2> derive_kinematics(
  std::span<const FramePoint> positions, const FrameClock & clock, HeadingSource heading_source,
  std::span<const double> provided_heading = {});

/// Moves camera-frame records into the world and projects them onto the plane.
Track to_world_track(
  int object_id, std::span<const CameraFrameRecord> records,
  const std::map<int, Pose3> & camera_poses, AxisConvention convention, const FrameClock & clock,
  HeadingSource heading_source = HeadingSource::provided);

/// One planar track per estimated object, tagged `estimated`.
std::vector<Track> bundle_to_tracks(
  const SceneBundle & bundle, AxisConvention convention,
  HeadingSource heading_source = HeadingSource::differenced);

struct ScaleCalibration
{
  Track track;
  double scale = 1.0;
};

/// Uniform scale = mean(reference) / mean(track speeds), applied to positions and speeds.
ScaleCalibration calibrate_scale(const Track & track, std::span<const double> reference_speeds);

/// Canonical planar state file: CSV "frame,object_id,x,y,heading,speed".
void write_state_csv(const std::filesystem::path & path, std::span<const Track> tracks);
std::vector<Track> read_state_csv(const std::filesystem::path & path, SourceTag tag);

}  // namespace estpred

#endif  // ESTPRED__INGEST_HPP_
