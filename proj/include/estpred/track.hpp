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

#ifndef ESTPRED__TRACK_HPP_
#define ESTPRED__TRACK_HPP_

#include <Eigen/Core>

#include <cstddef>
#include <string_view>
#include <vector>

namespace estpred
{

/// Fixed sampling clock. Sequences are assumed to be sampled at exactly this rate.
class FrameClock
{
public:
  explicit FrameClock(double rate_hz = 20.0);

  double rate_hz() const { return rate_hz_; }
  double dt() const { return 1.0 / rate_hz_; }

private:
  double rate_hz_;
};

/// Planar agent state at one frame. speed >= 0, heading in (-pi, pi].
struct AgentState2
{
  int frame = 0;
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double speed = 0.0;

  Eigen::Vector2d position() const { return {x, y}; }
};

enum class SourceTag { estimated, gt, gt_ekf, synthetic };

std::string_view to_string(SourceTag tag);
/// Throws ConfigError for unknown labels.
SourceTag parse_source_tag(std::string_view label);

/// A maximal run of consecutive frames.
using Segment = std::vector<AgentState2>;

/**
 * @brief All observations of one object from one source.
 *
 * Segments hold strictly consecutive frames, are disjoint and are ordered by
 * frame. Use Track::from_states to build one from an arbitrary frame-sorted
 * list; gaps start a new segment.
 */
struct Track
{
  int object_id = 0;
  SourceTag source_tag = SourceTag::estimated;
  std::vector<Segment> segments;

  /// `states` must be strictly increasing in frame (throws DataError otherwise).
  static Track from_states(int object_id, SourceTag tag, std::vector<AgentState2> states);

  std::size_t state_count() const;
  std::vector<AgentState2> flattened() const;
  /// Throws DataError when a segment invariant is broken.
  void validate() const;
};

}  // namespace estpred

#endif  // ESTPRED__TRACK_HPP_
