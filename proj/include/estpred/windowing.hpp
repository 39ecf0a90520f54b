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

#ifndef ESTPRED__WINDOWING_HPP_
#define ESTPRED__WINDOWING_HPP_

#include "estpred/track.hpp"

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace estpred
{

/// History/horizon contract of a prediction instance, in frames.
struct WindowSpec
{
  int min_history = 1;
  int max_history = 6;
  int horizon = 30;

  /// Throws ConfigError unless 1 <= min_history <= max_history and horizon >= 1.
  void validate() const;
  /// Shortest segment that yields an instance: history + current frame + horizon.
  int min_segment_length() const { return min_history + 1 + horizon; }
};

/**
 * One (history, current, future) window cut from a single segment.
 *
 * `history` holds the frames before the anchor (oldest first), `future_truth`
 * the `horizon` frames after it. All frames are consecutive.
 */
struct PredictionInstance
{
  int object_id = 0;
  int anchor_frame = 0;
  std::vector<AgentState2> history;
  AgentState2 anchor;
  std::vector<AgentState2> future_truth;
  SourceTag source_tag = SourceTag::estimated;
};

std::vector<bool> eligible(const Track & track, const WindowSpec & spec);

/// max(0, N - horizon - min_history) instances per segment, anchors sliding by one frame.
std::vector<PredictionInstance> make_instances(const Track & track, const WindowSpec & spec);

/// Number of instance pairs with consecutive anchors on the same object.
std::size_t consecutive_pair_count(std::span<const PredictionInstance> instances);

/// CSV "object_id,anchor_frame,role,frame,x,y,heading,speed", role in history|anchor|truth.
void write_instances_csv(
  const std::filesystem::path & path, std::span<const PredictionInstance> instances);
/// Inverse of write_instances_csv. Rows of one instance must be contiguous.
std::vector<PredictionInstance> read_instances_csv(
  const std::filesystem::path & path, SourceTag tag = SourceTag::estimated);

}  // namespace estpred

#endif  // ESTPRED__WINDOWING_HPP_
