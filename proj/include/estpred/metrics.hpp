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

#ifndef ESTPRED__METRICS_HPP_
#define ESTPRED__METRICS_HPP_

#include "estpred/geom.hpp"
#include "estpred/predictors.hpp"
#include "estpred/windowing.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace estpred
{

/// Average displacement error [m]: mean Euclidean distance over the horizon.
double ade(std::span<const Eigen::Vector2d> pred, std::span<const Eigen::Vector2d> truth);
/// Final displacement error [m]: Euclidean distance at the last step.
double fde(std::span<const Eigen::Vector2d> pred, std::span<const Eigen::Vector2d> truth);

/**
 * @brief Absolute consistency error [m].
 *
 * Distance between the last point of the prediction anchored at s and the
 * second-to-last point of the prediction anchored at s + 1. Both target the
 * frame s + T. Throws ContractError when the anchors are not consecutive, the
 * objects differ, or the horizons differ or are shorter than 2.
 */
double ace(const PredictedTrajectory & pred_at_s, const PredictedTrajectory & pred_at_s_plus_1);

struct InstanceScore
{
  int object_id = 0;
  int anchor_frame = 0;
  double ade = 0.0;
  double fde = 0.0;
  std::optional<double> ace;  // absent for the last anchor of a segment
};

/// Truth positions of an instance.
std::vector<Eigen::Vector2d> truth_points(const PredictionInstance & instance);

/// Scores predictions[i] against instances[i]; ACE pairs instances with consecutive anchors.
std::vector<InstanceScore> score_instances(
  std::span<const PredictionInstance> instances, std::span<const PredictedTrajectory> predictions);

struct RpeScore
{
  double rpe_t_rmse = 0.0;  // [m]
  double rpe_r_rmse = 0.0;  // [deg]
  int delta = 1;            // [frames]
  std::size_t pairs = 0;
};

/// Relative pose error over all frame pairs (k, k + delta) present in both trajectories.
RpeScore rpe(
  const std::map<int, Pose3> & reference, const std::map<int, Pose3> & estimate, int delta = 1);

/// Mean scores of one sequence (or of the pooled set).
struct AggregateRow
{
  std::string sequence;
  std::size_t count = 0;      // ADE/FDE instances
  std::size_t ace_count = 0;  // ACE pairs
  double ade = 0.0;
  double fde = 0.0;
  std::optional<double> ace;
};

struct AggregateReport
{
  std::vector<AggregateRow> per_sequence;  // ordered by sequence name
  AggregateRow overall;                    // instance-count weighted, sequence "avg"
};

/// Throws ContractError when there is no score at all.
AggregateReport aggregate(const std::map<std::string, std::vector<InstanceScore>> & scores);

void write_instance_scores_csv(
  const std::filesystem::path & path,
  const std::map<std::string, std::vector<InstanceScore>> & scores);

/**
 * @brief Writes the metric x source table.
 *
 * Header "metric,source,<sequence>...,avg"; one row for each of ADE, FDE and
 * ACE per source. Cells with no data are left empty.
 */
void write_summary_table_csv(
  const std::filesystem::path & path, const std::map<std::string, AggregateReport> & by_source);

/// Counts table: "row,<sequence>...,sum" with rows "<source> instances" and "<source> ace".
void write_counts_csv(
  const std::filesystem::path & path, const std::map<std::string, AggregateReport> & by_source);

void write_rpe_csv(
  const std::filesystem::path & path, const std::map<std::string, RpeScore> & by_label);

}  // namespace estpred

#endif  // ESTPRED__METRICS_HPP_
