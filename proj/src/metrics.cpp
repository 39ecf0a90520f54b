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

#include "estpred/metrics.hpp"

#include "estpred/error.hpp"
#include "estpred/text.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <set>
#include <utility>

namespace estpred
{

namespace
{

void require_same_length(
  std::span<const Eigen::Vector2d> pred, std::span<const Eigen::Vector2d> truth, const char * name)
{
  if (pred.size() != truth.size() || pred.empty()) {
    throw ContractError(fmt::format(
      "{}: prediction has {} points, truth has {} (need equal, non-zero)", name, pred.size(),
      truth.size()));
  }
}

std::string cell(const std::optional<double> & v) { return v ? text::fixed9(*v) : std::string(); }

}  // namespace

double ade(std::span<const Eigen::Vector2d> pred, std::span<const Eigen::Vector2d> truth)
{
  require_same_length(pred, truth, "ade");
  double sum = 0.0;
  for (std::size_t t = 0; t < pred.size(); ++t) {
    sum += (pred[t] - truth[t]).norm();
  }
  return sum / static_cast<double>(pred.size());
}

double fde(std::span<const Eigen::Vector2d> pred, std::span<const Eigen::Vector2d> truth)
{
  require_same_length(pred, truth, "fde");
  return (pred.back() - truth.back()).norm();
}

double ace(const PredictedTrajectory & pred_at_s, const PredictedTrajectory & pred_at_s_plus_1)
{
  if (pred_at_s.object_id != pred_at_s_plus_1.object_id) {
    throw ContractError(fmt::format(
      "ace: object mismatch ({} vs {})", pred_at_s.object_id, pred_at_s_plus_1.object_id));
  }
  if (pred_at_s_plus_1.anchor_frame != pred_at_s.anchor_frame + 1) {
    throw ContractError(fmt::format(
      "ace: anchors {} and {} are not consecutive", pred_at_s.anchor_frame,
      pred_at_s_plus_1.anchor_frame));
  }
  const std::size_t horizon = pred_at_s.points.size();
  if (horizon < 2 || pred_at_s_plus_1.points.size() != horizon) {
    throw ContractError("ace: both predictions need the same horizon of at least 2");
  }
  return (pred_at_s.points[horizon - 1] - pred_at_s_plus_1.points[horizon - 2]).norm();
}

std::vector<Eigen::Vector2d> truth_points(const PredictionInstance & instance)
{
  std::vector<Eigen::Vector2d> out;
  out.reserve(instance.future_truth.size());
  for (const auto & s : instance.future_truth) {
    out.push_back(s.position());
  }
  return out;
}

std::vector<InstanceScore> score_instances(
  std::span<const PredictionInstance> instances, std::span<const PredictedTrajectory> predictions)
{
  if (instances.size() != predictions.size()) {
    throw ContractError("score_instances: instance and prediction counts differ");
  }
  std::map<std::pair<int, int>, std::size_t> by_key;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (
      predictions[i].object_id != instances[i].object_id ||
      predictions[i].anchor_frame != instances[i].anchor_frame) {
      throw ContractError("score_instances: prediction order does not match instances");
    }
    by_key.emplace(std::pair{predictions[i].object_id, predictions[i].anchor_frame}, i);
  }
  std::vector<InstanceScore> scores;
  scores.reserve(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto truth = truth_points(instances[i]);
    InstanceScore s;
    s.object_id = instances[i].object_id;
    s.anchor_frame = instances[i].anchor_frame;
    s.ade = ade(predictions[i].points, truth);
    s.fde = fde(predictions[i].points, truth);
    const auto next = by_key.find({s.object_id, s.anchor_frame + 1});
    if (next != by_key.end()) {
      s.ace = ace(predictions[i], predictions[next->second]);
    }
    scores.push_back(s);
  }
  return scores;
}

RpeScore rpe(
  const std::map<int, Pose3> & reference, const std::map<int, Pose3> & estimate, int delta)
{
  if (delta < 1) {
    throw ContractError("rpe: delta must be at least 1");
  }
  RpeScore out;
  out.delta = delta;
  double sum_t2 = 0.0;
  double sum_r2 = 0.0;
  for (const auto & [k, q_k] : reference) {
    const auto q_next = reference.find(k + delta);
    const auto p_k = estimate.find(k);
    const auto p_next = estimate.find(k + delta);
    if (q_next == reference.end() || p_k == estimate.end() || p_next == estimate.end()) {
      continue;
    }
    const Pose3 ref_rel = q_k.inverse() * q_next->second;
    const Pose3 est_rel = p_k->second.inverse() * p_next->second;
    const Pose3 error = ref_rel.inverse() * est_rel;
    sum_t2 += error.translation().squaredNorm();
    const double angle_deg = error.rotation_angle() * 180.0 / std::numbers::pi;
    sum_r2 += angle_deg * angle_deg;
    ++out.pairs;
  }
  if (out.pairs == 0) {
    throw DataError(fmt::format(
      "rpe: need at least {} common frames spaced by {} in both trajectories", delta + 1, delta));
  }
  out.rpe_t_rmse = std::sqrt(sum_t2 / static_cast<double>(out.pairs));
  out.rpe_r_rmse = std::sqrt(sum_r2 / static_cast<double>(out.pairs));
  return out;
}

AggregateReport aggregate(const std::map<std::string, std::vector<InstanceScore>> & scores)
{
  AggregateReport report;
  report.overall.sequence = "avg";
  double total_ade = 0.0;
  double total_fde = 0.0;
  double total_ace = 0.0;
  for (const auto & [sequence, list] : scores) {
    AggregateRow row;
    row.sequence = sequence;
    double sum_ade = 0.0;
    double sum_fde = 0.0;
    double sum_ace = 0.0;
    for (const auto & s : list) {
      sum_ade += s.ade;
      sum_fde += s.fde;
      if (s.ace) {
        sum_ace += *s.ace;
        ++row.ace_count;
      }
    }
    row.count = list.size();
    if (row.count > 0) {
      row.ade = sum_ade / static_cast<double>(row.count);
      row.fde = sum_fde / static_cast<double>(row.count);
    }
    if (row.ace_count > 0) {
      row.ace = sum_ace / static_cast<double>(row.ace_count);
    }
    total_ade += sum_ade;
    total_fde += sum_fde;
    total_ace += sum_ace;
    report.overall.count += row.count;
    report.overall.ace_count += row.ace_count;
    report.per_sequence.push_back(std::move(row));
  }
  if (report.overall.count == 0) {
    throw ContractError("aggregate: no instance scores");
  }
  report.overall.ade = total_ade / static_cast<double>(report.overall.count);
  report.overall.fde = total_fde / static_cast<double>(report.overall.count);
  if (report.overall.ace_count > 0) {
    report.overall.ace = total_ace / static_cast<double>(report.overall.ace_count);
  }
  return report;
}

void write_instance_scores_csv(
  const std::filesystem::path & path,
  const std::map<std::string, std::vector<InstanceScore>> & scores)
{
  auto out = text::open_output(path);
  out << "sequence,object_id,anchor_frame,ade,fde,ace\n";
  for (const auto & [sequence, list] : scores) {
    for (const auto & s : list) {
      out << sequence << ',' << s.object_id << ',' << s.anchor_frame << ',' << text::fixed9(s.ade)
          << ',' << text::fixed9(s.fde) << ',' << cell(s.ace) << '\n';
    }
  }
}

namespace
{

std::vector<std::string> all_sequences(const std::map<std::string, AggregateReport> & by_source)
{
  std::set<std::string> names;
  for (const auto & [source, report] : by_source) {
    for (const auto & row : report.per_sequence) {
      names.insert(row.sequence);
    }
  }
  return {names.begin(), names.end()};
}

const AggregateRow * find_row(const AggregateReport & report, const std::string & sequence)
{
  for (const auto & row : report.per_sequence) {
    if (row.sequence == sequence) {
      return &row;
    }
  }
  return nullptr;
}

}  // namespace

void write_summary_table_csv(
  const std::filesystem::path & path, const std::map<std::string, AggregateReport> & by_source)
{
  const auto sequences = all_sequences(by_source);
  auto out = text::open_output(path);
  out << "metric,source";
  for (const auto & s : sequences) {
    out << ',' << s;
  }
  out << ",avg\n";
  using Getter = std::optional<double> (*)(const AggregateRow &);
  const std::pair<const char *, Getter> metrics[] = {
    {"ADE", [](const AggregateRow & r) -> std::optional<double> { return r.count ? std::optional(r.ade) : std::nullopt; }},
    {"FDE", [](const AggregateRow & r) -> std::optional<double> { return r.count ? std::optional(r.fde) : std::nullopt; }},
    {"ACE", [](const AggregateRow & r) { return r.ace; }},
  };
  for (const auto & [name, get] : metrics) {
    for (const auto & [source, report] : by_source) {
      out << name << ',' << source;
      for (const auto & s : sequences) {
        const auto * row = find_row(report, s);
        out << ',' << (row ? cell(get(*row)) : std::string());
      }
      out << ',' << cell(get(report.overall)) << '\n';
    }
  }
}

void write_counts_csv(
  const std::filesystem::path & path, const std::map<std::string, AggregateReport> & by_source)
{
  const auto sequences = all_sequences(by_source);
  auto out = text::open_output(path);
  out << "row";
  for (const auto & s : sequences) {
    out << ',' << s;
  }
  out << ",sum\n";
  for (const auto & [source, report] : by_source) {
    for (const bool ace_row : {false, true}) {
      out << source << (ace_row ? " ace" : " instances");
      for (const auto & s : sequences) {
        const auto * row = find_row(report, s);
        out << ',' << (row ? std::to_string(ace_row ? row->ace_count : row->count) : std::string());
      }
      out << ',' << (ace_row ? report.overall.ace_count : report.overall.count) << '\n';
    }
  }
}

void write_rpe_csv(
  const std::filesystem::path & path, const std::map<std::string, RpeScore> & by_label)
{
  auto out = text::open_output(path);
  out << "label,delta,pairs,rpe_t_rmse_m,rpe_r_rmse_deg\n";
  for (const auto & [label, score] : by_label) {
    out << label << ',' << score.delta << ',' << score.pairs << ',' << text::fixed9(score.rpe_t_rmse)
        << ',' << text::fixed9(score.rpe_r_rmse) << '\n';
  }
}

}  // namespace estpred
