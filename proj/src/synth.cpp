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

#include "estpred/synth.hpp"

#include "estpred/error.hpp"
#include "estpred/geom.hpp"
#include "estpred/ingest.hpp"
#include "estpred/predictors.hpp"
#include "estpred/text.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace estpred
{

double NormalSource::next()
{
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  constexpr double kInv53 = 1.0 / 9007199254740992.0;  // 2^-53
  const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * kInv53;
  const double u2 = static_cast<double>(engine_() >> 11) * kInv53;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

void MotionProfile::validate() const
{
  if (schedule.empty()) {
    throw ConfigError("motion profile: empty control schedule");
  }
  for (const auto & seg : schedule) {
    if (!(seg.duration > 0.0)) {
      throw ConfigError(fmt::format("motion profile: non-positive duration {}", seg.duration));
    }
    if (std::llround(seg.duration * clock.rate_hz()) < 1) {
      throw ConfigError(
        fmt::format("motion profile: duration {} s is shorter than one frame", seg.duration));
    }
  }
  if (speed < 0.0) {
    throw ConfigError("motion profile: negative initial speed");
  }
}

MotionProfile MotionProfile::from_file(const std::filesystem::path & path)
{
  MotionProfile profile;
  double rate_hz = profile.clock.rate_hz();
  const auto sections = text::read_key_value(path);
  for (const auto & section : sections) {
    const auto number = [&](const std::string & key, const std::string & value) {
      const auto v = text::to_double(value);
      if (!v) {
        throw ParseError(path.string(), section.line, "bad value for " + key);
      }
      return *v;
    };
    const auto integer = [&](const std::string & key, const std::string & value) {
      const auto v = text::to_int(value);
      if (!v) {
        throw ParseError(path.string(), section.line, "bad integer for " + key);
      }
      return *v;
    };
    if (section.name.empty() || section.name == "initial") {
      for (const auto & [key, value] : section.values) {
        if (key == "object_id") {
          profile.object_id = integer(key, value);
        } else if (key == "start_frame") {
          profile.start_frame = integer(key, value);
        } else if (key == "rate_hz") {
          rate_hz = number(key, value);
        } else if (key == "x") {
          profile.x = number(key, value);
        } else if (key == "y") {
          profile.y = number(key, value);
        } else if (key == "heading") {
          profile.heading = number(key, value);
        } else if (key == "speed") {
          profile.speed = number(key, value);
        } else {
          throw ParseError(path.string(), section.line, "unknown profile key '" + key + "'");
        }
      }
    } else if (section.name == "segment") {
      ControlSegment seg;
      for (const auto & [key, value] : section.values) {
        if (key == "duration") {
          seg.duration = number(key, value);
        } else if (key == "accel") {
          seg.accel = number(key, value);
        } else if (key == "turn_rate") {
          seg.turn_rate = number(key, value);
        } else {
          throw ParseError(path.string(), section.line, "unknown segment key '" + key + "'");
        }
      }
      if (!section.values.contains("duration")) {
        throw ParseError(path.string(), section.line, "segment without duration");
      }
      profile.schedule.push_back(seg);
    } else {
      throw ParseError(path.string(), section.line, "unknown section [" + section.name + "]");
    }
  }
  profile.clock = FrameClock(rate_hz);
  profile.validate();
  return profile;
}

Track generate(const MotionProfile & profile)
{
  profile.validate();
  AgentState2 state{
    profile.start_frame, profile.x, profile.y, normalize_angle(profile.heading), profile.speed};
  std::vector<AgentState2> states{state};
  for (const auto & seg : profile.schedule) {
    const long long steps = std::llround(seg.duration * profile.clock.rate_hz());
    for (long long i = 0; i < steps; ++i) {
      state = unicycle_step(state, {seg.accel, seg.turn_rate}, profile.clock.dt());
      states.push_back(state);
    }
  }
  return Track::from_states(profile.object_id, SourceTag::synthetic, std::move(states));
}

Track corrupt(const Track & track, const NoiseSpec & noise, const FrameClock & clock)
{
  if (noise.position_std < 0.0 || noise.heading_std < 0.0) {
    throw ConfigError("noise standard deviations must be non-negative");
  }
  NormalSource normal(noise.seed);
  Track out = track;
  for (auto & seg : out.segments) {
    std::vector<FramePoint> points;
    std::vector<double> heading_noise;
    points.reserve(seg.size());
    for (auto & s : seg) {
      const double nx = normal.next();
      const double ny = normal.next();
      const double nh = normal.next();
      points.push_back(
        {s.frame, {s.x + noise.position_std * nx, s.y + noise.position_std * ny}});
      heading_noise.push_back(noise.heading_std * nh);
    }
    if (noise.position_std > 0.0) {
      seg = derive_kinematics(points, clock, HeadingSource::differenced);
    }
    for (std::size_t i = 0; i < seg.size(); ++i) {
      if (noise.heading_std > 0.0) {
        seg[i].heading = normalize_angle(seg[i].heading + heading_noise[i]);
      }
    }
  }
  return out;
}

}  // namespace estpred
