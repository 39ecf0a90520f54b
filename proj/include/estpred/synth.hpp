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

#ifndef ESTPRED__SYNTH_HPP_
#define ESTPRED__SYNTH_HPP_

#include "estpred/track.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <string_view>
#include <vector>

namespace estpred
{

/**
 * @brief Seeded standard-normal source with a fixed, portable algorithm.
 *
 * Uniforms come from std::mt19937_64 (bit-exact across standard libraries).
 * Each pair of normals uses the Box-Muller transform on
 *   u1 = ((r1 >> 11) + 1) * 2^-53   in (0, 1]
 *   u2 =  (r2 >> 11)      * 2^-53   in [0, 1)
 * giving sqrt(-2 ln u1) * cos(2 pi u2) first and the sine branch second.
 */
class NormalSource
{
public:
  static constexpr std::string_view kAlgorithm = "mt19937_64+box-muller-53";

  explicit NormalSource(std::uint64_t seed) : engine_(seed) {}
  double next();

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct ControlSegment
{
  double duration = 1.0;   // [s], > 0
  double accel = 0.0;      // [m/s^2]
  double turn_rate = 0.0;  // [rad/s]
};

/// Initial state plus a piecewise-constant control schedule.
struct MotionProfile
{
  int object_id = 1;
  int start_frame = 0;
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double speed = 0.0;
  std::vector<ControlSegment> schedule;
  FrameClock clock;

  /// Throws ConfigError for an empty schedule or a non-positive duration.
  void validate() const;

  /**
   * Reads a key=value profile. Top-level keys: object_id, start_frame,
   * rate_hz, x, y, heading, speed. Each "[segment]" section holds duration,
   * accel and turn_rate.
   */
  static MotionProfile from_file(const std::filesystem::path & path);
};

/// Noise-free unicycle integration of the schedule; one state per frame, tagged synthetic.
Track generate(const MotionProfile & profile);

struct NoiseSpec
{
  double position_std = 0.0;  // [m], per axis
  double heading_std = 0.0;   // [rad]
  std::uint64_t seed = 0;
};

/**
 * @brief Adds i.i.d. Gaussian noise to a track.
 *
 * Three normals (x, y, heading) are drawn per state in frame order whatever
 * the standard deviations, so one seed yields noise that only scales with
 * sigma. With position noise, speed and heading are re-derived from the noisy
 * positions before the heading noise is added. Zero noise returns the input.
 */
Track corrupt(const Track & track, const NoiseSpec & noise, const FrameClock & clock);

}  // namespace estpred

#endif  // ESTPRED__SYNTH_HPP_
