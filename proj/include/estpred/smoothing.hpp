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

#ifndef ESTPRED__SMOOTHING_HPP_
#define ESTPRED__SMOOTHING_HPP_

#include "estpred/track.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <map>
#include <string>

namespace estpred
{

/**
 * @brief Noise model of the planar unicycle EKF.
 *
 * Process noise enters as white acceleration and turn-rate inputs; the
 * measurement is the planar position plus, when `use_heading` is set, the
 * heading.
 */
struct EkfConfig
{
  double accel_std = 2.0;       // [m/s^2]
  double turn_rate_std = 0.5;   // [rad/s]
  double position_std = 0.3;    // [m]
  bool use_heading = true;
  double heading_std = 0.2;     // [rad]
  Eigen::Vector4d initial_covariance{1.0, 1.0, 0.5, 4.0};  // diag over (x, y, heading, speed)

  /// Throws ConfigError when a standard deviation or variance is not positive.
  void validate() const;

  /// Reads keys accel_std, turn_rate_std, position_std, use_heading, heading_std and
  /// initial_covariance ("a,b,c,d"); missing keys keep their defaults.
  static EkfConfig from_file(const std::filesystem::path & path);

  /// Flat key -> value form, as written into run manifests.
  std::map<std::string, std::string> to_key_values() const;
};

struct EkfState
{
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();  // x, y, heading, speed
  Eigen::Matrix4d covariance = Eigen::Matrix4d::Identity();
};

/// Forward-only planar EKF over one segment at a time.
class UnicycleEkf
{
public:
  UnicycleEkf(const EkfConfig & config, const FrameClock & clock);

  void initialize(const AgentState2 & measurement);
  void predict();
  /// Position (and heading) correction; the heading residual is wrapped to (-pi, pi].
  void update(const AgentState2 & measurement);

  const EkfState & state() const { return state_; }

private:
  void check_covariance(int frame);

  EkfConfig config_;
  double dt_;
  EkfState state_;
};

/**
 * Filters every segment of `track` and returns a track tagged gt_ekf.
 * Throws NumericalError naming the frame if the covariance stops being
 * positive-definite.
 */
Track ekf_smooth(const Track & track, const EkfConfig & config, const FrameClock & clock);

}  // namespace estpred

#endif  // ESTPRED__SMOOTHING_HPP_
