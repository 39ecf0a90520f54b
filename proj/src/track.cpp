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

#include "estpred/track.hpp"

#include "estpred/error.hpp"

#include <cmath>
#include <string>

namespace estpred
{

FrameClock::FrameClock(double rate_hz) : rate_hz_(rate_hz)
{
  if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) {
    throw ConfigError("frame rate must be positive, got " + std::to_string(rate_hz));
  }
}

std::string_view to_string(SourceTag tag)
{
  switch (tag) {
    case SourceTag::estimated:
      return "estimated";
    case SourceTag::gt:
      return "gt";
    case SourceTag::gt_ekf:
      return "gt_ekf";
    case SourceTag::synthetic:
      return "synthetic";
  }
  return "?";
}

SourceTag parse_source_tag(std::string_view label)
{
  for (auto tag : {SourceTag::estimated, SourceTag::gt, SourceTag::gt_ekf, SourceTag::synthetic}) {
    if (to_string(tag) == label) {
      return tag;
    }
  }
  throw ConfigError("unknown source tag '" + std::string(label) + "'");
}

Track Track::from_states(int object_id, SourceTag tag, std::vector<AgentState2> states)
{
  Track track;
  track.object_id = object_id;
  track.source_tag = tag;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i > 0 && states[i].frame <= states[i - 1].frame) {
      throw DataError(
        "object " + std::to_string(object_id) + ": frames not strictly increasing at frame " +
        std::to_string(states[i].frame));
    }
    if (i == 0 || states[i].frame != states[i - 1].frame + 1) {
      track.segments.emplace_back();
    }
    track.segments.back().push_back(states[i]);
  }
  return track;
}

std::size_t Track::state_count() const
{
  std::size_t n = 0;
  for (const auto & seg : segments) {
    n += seg.size();
  }
  return n;
}

std::vector<AgentState2> Track::flattened() const
{
  std::vector<AgentState2> out;
  out.reserve(state_count());
  for (const auto & seg : segments) {
    out.insert(out.end(), seg.begin(), seg.end());
  }
  return out;
}

void Track::validate() const
{
  const AgentState2 * prev = nullptr;
  for (const auto & seg : segments) {
    if (seg.empty()) {
      throw DataError("object " + std::to_string(object_id) + ": empty segment");
    }
    for (std::size_t i = 0; i < seg.size(); ++i) {
      if (i > 0 && seg[i].frame != seg[i - 1].frame + 1) {
        throw DataError("object " + std::to_string(object_id) + ": non-consecutive frames in segment");
      }
      if (seg[i].speed < 0.0) {
        throw DataError("object " + std::to_string(object_id) + ": negative speed");
      }
    }
    if (prev != nullptr && seg.front().frame <= prev->frame + 1) {
      throw DataError("object " + std::to_string(object_id) + ": segments overlap or touch");
    }
    prev = &seg.back();
  }
}

}  // namespace estpred
