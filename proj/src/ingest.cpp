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

#include "estpred/ingest.hpp"

#include "estpred/error.hpp"
#include "estpred/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace estpred
{

namespace
{

struct PoseRow
{
  int frame;
  int object_id;
  Pose3 pose;
};

constexpr double kQuaternionNormTolerance = 1e-3;

std::vector<PoseRow> read_pose_rows(const std::filesystem::path & path)
{
  auto in = text::open_input(path);
  std::vector<PoseRow> rows;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    const auto fields = text::split_ws(line);
    if (fields.size() != 9) {
      throw ParseError(
        path.string(), line_no, "expected 9 fields, found " + std::to_string(fields.size()));
    }
    const auto frame = text::to_int(fields[0]);
    const auto id = text::to_int(fields[1]);
    if (!frame || !id) {
      throw ParseError(path.string(), line_no, "frame and object id must be integers");
    }
    double v[7];
    for (int i = 0; i < 7; ++i) {
      const auto d = text::to_double(fields[2 + i]);
      if (!d || !std::isfinite(*d)) {
        throw ParseError(path.string(), line_no, "bad number '" + std::string(fields[2 + i]) + "'");
      }
      v[i] = *d;
    }
    const double qnorm = std::sqrt(v[3] * v[3] + v[4] * v[4] + v[5] * v[5] + v[6] * v[6]);
    if (std::abs(qnorm - 1.0) > kQuaternionNormTolerance) {
      throw DataError(fmt::format(
        "{}:{}: quaternion norm {} is not unit (tolerance {})", path.string(), line_no, qnorm,
        kQuaternionNormTolerance));
    }
    rows.push_back(
      {*frame, *id, Pose3::from_quaternion(v[3], v[4], v[5], v[6], {v[0], v[1], v[2]})});
  }
  return rows;
}

void write_pose_row(std::ostream & out, int frame, int object_id, const Pose3 & pose)
{
  auto q = pose.quaternion();
  // Canonical sign so the written form is unique.
  if (q.w() < 0.0) {
    q.coeffs() *= -1.0;
  }
  const auto & t = pose.translation();
  out << frame << ' ' << object_id << ' ' << text::exact(t.x()) << ' ' << text::exact(t.y()) << ' '
      << text::exact(t.z()) << ' ' << text::exact(q.x()) << ' ' << text::exact(q.y()) << ' '
      << text::exact(q.z()) << ' ' << text::exact(q.w()) << '\n';
}

/// Splits a frame-sorted series into runs of consecutive frames: [begin, end) index pairs.
std::vector<std::pair<std::size_t, std::size_t>> consecutive_runs(std::span<const FramePoint> pts)
{
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= pts.size(); ++i) {
    if (i == pts.size() || pts[i].frame != pts[i - 1].frame + 1) {
      runs.emplace_back(begin, i);
      begin = i;
    }
  }
  return runs;
}

}  // namespace

CameraFrameRecords parse_kitti_tracking_labels(
  const std::filesystem::path & path, const std::set<std::string> & type_whitelist)
{
  auto in = text::open_input(path);
  CameraFrameRecords records;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto fields = text::split_ws(raw);
    if (fields.empty()) {
      continue;
    }
    if (fields.size() != 17 && fields.size() != 18) {
      throw ParseError(
        path.string(), line_no, "expected 17 or 18 fields, found " + std::to_string(fields.size()));
    }
    CameraFrameRecord rec;
    const auto frame = text::to_int(fields[0]);
    const auto id = text::to_int(fields[1]);
    if (!frame || !id) {
      throw ParseError(path.string(), line_no, "frame and track id must be integers");
    }
    rec.frame = *frame;
    rec.track_id = *id;
    rec.type = std::string(fields[2]);
    // Columns 3..5 truncated/occluded/alpha, 6..9 bbox, 10..12 dimensions (validated, unused).
    for (std::size_t i = 3; i < fields.size(); ++i) {
      if (!text::to_double(fields[i])) {
        throw ParseError(
          path.string(), line_no, "bad number '" + std::string(fields[i]) + "' in column " +
                                    std::to_string(i + 1));
      }
    }
    rec.location = {*text::to_double(fields[13]), *text::to_double(fields[14]),
                    *text::to_double(fields[15])};
    rec.rotation_y = *text::to_double(fields[16]);

    if (rec.track_id < 0 || rec.type == "DontCare") {
      continue;
    }
    if (!type_whitelist.empty() && !type_whitelist.contains(rec.type)) {
      continue;
    }
    auto & list = records[rec.track_id];
    if (!list.empty() && list.back().frame >= rec.frame) {
      throw DataError(fmt::format(
        "{}:{}: track {} frame {} does not follow frame {}", path.string(), line_no, rec.track_id,
        rec.frame, list.back().frame));
    }
    list.push_back(std::move(rec));
  }
  return records;
}

SceneBundle parse_estimator_tracks(
  const std::filesystem::path & pose_file, const FrameClock & clock,
  const std::optional<std::filesystem::path> & motion_file)
{
  SceneBundle bundle{{}, {}, {}, clock, {}};
  for (auto & row : read_pose_rows(pose_file)) {
    auto & target = row.object_id == 0 ? bundle.camera_poses : bundle.object_poses[row.object_id];
    if (!target.emplace(row.frame, row.pose).second) {
      throw DataError(fmt::format(
        "{}: duplicate pose for object {} at frame {}", pose_file.string(), row.object_id,
        row.frame));
    }
  }
  if (!motion_file) {
    return bundle;
  }
  for (auto & row : read_pose_rows(*motion_file)) {
    if (row.object_id == 0) {
      throw DataError(motion_file->string() + ": object id 0 is reserved for the camera");
    }
    if (!bundle.object_motions[row.object_id].emplace(row.frame, Motion3{row.pose}).second) {
      throw DataError(fmt::format(
        "{}: duplicate motion for object {} at frame {}", motion_file->string(), row.object_id,
        row.frame));
    }
  }
  // Frame order matters: a recovered pose may feed the next motion.
  for (const auto & [object_id, motions] : bundle.object_motions) {
    auto & poses = bundle.object_poses[object_id];
    for (const auto & [frame, motion] : motions) {
      const auto prev = poses.find(frame - 1);
      if (prev == poses.end()) {
        throw DataError(fmt::format(
          "object {}: motion at frame {} has no pose at frame {}", object_id, frame, frame - 1));
      }
      const Pose3 predicted = recover_pose(motion, prev->second);
      const auto current = poses.find(frame);
      if (current == poses.end()) {
        poses.emplace(frame, predicted);
        continue;
      }
      const double gap = (predicted.translation() - current->second.translation()).norm();
      if (gap > kMotionConsistencyTolerance) {
        bundle.warnings.push_back(fmt::format(
          "object {} frame {}: motion disagrees with pose pair by {:.6f} m", object_id, frame, gap));
      }
    }
  }
  return bundle;
}

void write_pose_file(const std::filesystem::path & path, const SceneBundle & bundle)
{
  auto out = text::open_output(path);
  out << "# frame object_id tx ty tz qx qy qz qw\n";
  for (const auto & [frame, pose] : bundle.camera_poses) {
    write_pose_row(out, frame, 0, pose);
  }
  for (const auto & [object_id, poses] : bundle.object_poses) {
    for (const auto & [frame, pose] : poses) {
      write_pose_row(out, frame, object_id, pose);
    }
  }
}

HeadingSource parse_heading_source(std::string_view label)
{
  if (label == "provided") {
    return HeadingSource::provided;
  }
  if (label == "differenced") {
    return HeadingSource::differenced;
  }
  throw ConfigError("unknown heading source '" + std::string(label) + "'");
}

std::string_view to_string(HeadingSource source)
{
  return source == HeadingSource::provided ? "provided" : "differenced";
}

std::vector<AgentState2> derive_kinematics(
  std::span<const FramePoint> positions, const FrameClock & clock, HeadingSource heading_source,
  std::span<const double> provided_heading)
{
  if (heading_source == HeadingSource::provided && provided_heading.size() != positions.size()) {
    throw ContractError("derive_kinematics: provided heading series length mismatch");
  }
  std::vector<AgentState2> states(positions.size());
  for (const auto & [begin, end] : consecutive_runs(positions)) {
    const std::size_t n = end - begin;
    std::optional<std::size_t> first_valid;
    double carried = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = begin + k;
      Eigen::Vector2d step = Eigen::Vector2d::Zero();
      if (n > 1) {
        if (k == 0) {
          step = positions[i + 1].position - positions[i].position;
        } else if (k == n - 1) {
          step = positions[i].position - positions[i - 1].position;
        } else {
          step = 0.5 * (positions[i + 1].position - positions[i - 1].position);
        }
      }
      auto & s = states[i];
      s.frame = positions[i].frame;
      s.x = positions[i].position.x();
      s.y = positions[i].position.y();
      s.speed = step.norm() * clock.rate_hz();
      if (heading_source == HeadingSource::provided) {
        s.heading = normalize_angle(provided_heading[i]);
        continue;
      }
      if (step.norm() >= kMinHeadingStep) {
        carried = std::atan2(step.y(), step.x());
        if (!first_valid) {
          first_valid = k;
        }
      }
      s.heading = carried;
    }
    if (first_valid) {
      // The stationary prefix takes the first observed direction.
      for (std::size_t k = 0; k < *first_valid; ++k) {
        states[begin + k].heading = states[begin + *first_valid].heading;
      }
    }
  }
  return states;
}

Track to_world_track(
  int object_id, std::span<const CameraFrameRecord> records,
  const std::map<int, Pose3> & camera_poses, AxisConvention convention, const FrameClock & clock,
  HeadingSource heading_source)
{
  std::vector<int> missing;
  for (const auto & rec : records) {
    if (!camera_poses.contains(rec.frame)) {
      missing.push_back(rec.frame);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (int f : missing) {
      list += (list.empty() ? "" : ",") + std::to_string(f);
    }
    throw DataError(fmt::format("object {}: no camera pose for frames {}", object_id, list));
  }
  std::vector<FramePoint> points;
  std::vector<double> headings;
  points.reserve(records.size());
  headings.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto & rec = records[i];
    if (i > 0 && rec.frame <= records[i - 1].frame) {
      throw DataError(fmt::format("object {}: frames not strictly increasing", object_id));
    }
    const Pose3 object_in_camera(rotation_about_y(rec.rotation_y), rec.location);
    const Pose2 planar = project_to_plane(camera_poses.at(rec.frame) * object_in_camera, convention);
    points.push_back({rec.frame, planar.position()});
    headings.push_back(planar.heading());
  }
  return Track::from_states(
    object_id, SourceTag::gt, derive_kinematics(points, clock, heading_source, headings));
}

std::vector<Track> bundle_to_tracks(
  const SceneBundle & bundle, AxisConvention convention, HeadingSource heading_source)
{
  std::vector<Track> tracks;
  for (const auto & [object_id, poses] : bundle.object_poses) {
    std::vector<FramePoint> points;
    std::vector<double> headings;
    for (const auto & [frame, pose] : poses) {
      const Pose2 planar = project_to_plane(pose, convention);
      points.push_back({frame, planar.position()});
      headings.push_back(planar.heading());
    }
    tracks.push_back(Track::from_states(
      object_id, SourceTag::estimated,
      derive_kinematics(points, bundle.clock, heading_source, headings)));
  }
  return tracks;
}

ScaleCalibration calibrate_scale(const Track & track, std::span<const double> reference_speeds)
{
  if (track.state_count() < 2) {
    throw ContractError("calibrate_scale: track needs at least 2 states");
  }
  if (reference_speeds.empty()) {
    throw ContractError("calibrate_scale: empty reference speed profile");
  }
  const double ref_mean =
    std::accumulate(reference_speeds.begin(), reference_speeds.end(), 0.0) /
    static_cast<double>(reference_speeds.size());
  if (!(ref_mean > 0.0)) {
    throw ContractError("calibrate_scale: reference mean speed must be positive");
  }
  double sum = 0.0;
  for (const auto & seg : track.segments) {
    for (const auto & s : seg) {
      sum += s.speed;
    }
  }
  const double track_mean = sum / static_cast<double>(track.state_count());
  if (!(track_mean > 0.0)) {
    throw DataError(fmt::format(
      "calibration error: object {} has zero mean speed, scale is undefined", track.object_id));
  }
  ScaleCalibration out{track, ref_mean / track_mean};
  for (auto & seg : out.track.segments) {
    for (auto & s : seg) {
      s.x *= out.scale;
      s.y *= out.scale;
      s.speed *= out.scale;
    }
  }
  return out;
}

void write_state_csv(const std::filesystem::path & path, std::span<const Track> tracks)
{
  auto out = text::open_output(path);
  out << "frame,object_id,x,y,heading,speed\n";
  for (const auto & track : tracks) {
    for (const auto & seg : track.segments) {
      for (const auto & s : seg) {
        out << s.frame << ',' << track.object_id << ',' << text::fixed9(s.x) << ','
            << text::fixed9(s.y) << ',' << text::fixed9(s.heading) << ','
            << text::fixed9(s.speed) << '\n';
      }
    }
  }
}

std::vector<Track> read_state_csv(const std::filesystem::path & path, SourceTag tag)
{
  auto in = text::open_input(path);
  std::string raw;
  std::size_t line_no = 0;
  std::map<int, std::vector<AgentState2>> by_object;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    if (!header_seen) {
      if (line != "frame,object_id,x,y,heading,speed") {
        throw ParseError(path.string(), line_no, "unexpected header '" + std::string(line) + "'");
      }
      header_seen = true;
      continue;
    }
    const auto f = text::split(line, ',');
    if (f.size() != 6) {
      throw ParseError(path.string(), line_no, "expected 6 columns");
    }
    const auto frame = text::to_int(f[0]);
    const auto id = text::to_int(f[1]);
    const auto x = text::to_double(f[2]);
    const auto y = text::to_double(f[3]);
    const auto heading = text::to_double(f[4]);
    const auto speed = text::to_double(f[5]);
    if (!frame || !id || !x || !y || !heading || !speed) {
      throw ParseError(path.string(), line_no, "malformed number");
    }
    if (*speed < 0.0) {
      throw ParseError(path.string(), line_no, "negative speed");
    }
    by_object[*id].push_back({*frame, *x, *y, normalize_angle(*heading), *speed});
  }
  std::vector<Track> tracks;
  for (auto & [id, states] : by_object) {
    std::stable_sort(states.begin(), states.end(), [](const auto & a, const auto & b) {
      return a.frame < b.frame;
    });
    tracks.push_back(Track::from_states(id, tag, std::move(states)));
  }
  return tracks;
}

}  // namespace estpred
