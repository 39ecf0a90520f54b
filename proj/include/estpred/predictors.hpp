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

#ifndef ESTPRED__PREDICTORS_HPP_
#define ESTPRED__PREDICTORS_HPP_

#include "estpred/track.hpp"
#include "estpred/windowing.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace estpred
{

/// Symmetric control bounds applied to every rollout step.
struct ControlLimits
{
  double max_turn_rate = 0.7;  // [rad/s]
  double max_accel = 4.0;      // [m/s^2]

  void validate() const;
};

struct PredictedTrajectory
{
  int object_id = 0;
  int anchor_frame = 0;
  std::vector<Eigen::Vector2d> points;  // steps 1..horizon after the anchor
  std::string predictor_tag;
};

/// Single-integrator extrapolation of the anchor's last observed displacement.
PredictedTrajectory predict_constant_velocity(
  const PredictionInstance & instance, const FrameClock & clock, int horizon);

struct Control
{
  double accel = 0.0;      // [m/s^2]
  double turn_rate = 0.0;  // [rad/s]
};

/// Per-step requested controls; must hold exactly `horizon` entries.
using ControlSequence = std::vector<Control>;
/// Fit one constant (accel, turn rate) pair to the observed history and hold it.
struct FittedConstant
{
};
using ControlMode = std::variant<ControlSequence, FittedConstant>;

/// Least-squares constant controls over history + anchor, before clamping.
Control fit_constant_controls(const PredictionInstance & instance, const FrameClock & clock);

Control clamp(const Control & requested, const ControlLimits & limits);

/// One explicit-Euler unicycle step without clamping; see rollout_unicycle.
AgentState2 unicycle_step(const AgentState2 & state, const Control & control, double dt);

/**
 * @brief Dynamically-extended unicycle rollout from the anchor state.
 *
 * Per step the clamped controls advance heading and speed first (speed floored
 * at 0), then the position with the updated values:
 *   theta += w dt;  v = max(0, v + a dt);  x += v cos(theta) dt;  y += v sin(theta) dt.
 * Returns the `horizon` states after the anchor.
 */
std::vector<AgentState2> rollout_unicycle(
  const AgentState2 & start, std::span<const Control> controls, const ControlLimits & limits,
  const FrameClock & clock);

PredictedTrajectory predict_unicycle(
  const PredictionInstance & instance, const ControlMode & controls, const ControlLimits & limits,
  const FrameClock & clock, int horizon);

/// CSV "object_id,anchor_frame,step,x,y" with steps 1..horizon.
void write_predictions_csv(
  const std::filesystem::path & path, std::span<const PredictedTrajectory> predictions);

/**
 * @brief Reads a prediction exchange file and matches it to `instances`.
 *
 * The result is ordered like `instances`. Throws CoverageError listing every
 * (object_id, anchor_frame) without predictions and FormatError when an
 * instance does not have exactly the steps 1..horizon.
 */
std::vector<PredictedTrajectory> read_predictions_csv(
  const std::filesystem::path & path, std::span<const PredictionInstance> instances, int horizon,
  const std::string & predictor_tag = "external");

/**
 * Out-of-process predictor. `command` is run through the shell after
 * substituting {instances} and {predictions} with file paths inside
 * `work_dir`; it must write the prediction exchange file.
 */
struct ExternalPredictor
{
  std::string command;
  std::filesystem::path work_dir;
};

std::vector<PredictedTrajectory> run_external_predictor(
  std::span<const PredictionInstance> instances, const ExternalPredictor & predictor, int horizon);

}  // namespace estpred

#endif  // ESTPRED__PREDICTORS_HPP_
