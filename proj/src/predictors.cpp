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

#include "estpred/predictors.hpp"

#include "estpred/error.hpp"
#include "estpred/geom.hpp"
#include "estpred/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <utility>

namespace estpred
{

namespace
{

std::string replace_all(std::string s, const std::string & from, const std::string & to)
{
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

std::string shell_quote(const std::string & s)
{
  return "'" + replace_all(s, "'", "'\\''") + "'";
}

}  // namespace

void ControlLimits::validate() const
{
  if (!(max_turn_rate > 0.0) || !(max_accel > 0.0)) {
    throw ConfigError(fmt::format(
      "control limits must be positive (turn rate {}, accel {})", max_turn_rate, max_accel));
  }
}

PredictedTrajectory predict_constant_velocity(
  const PredictionInstance & instance, const FrameClock & clock, int horizon)
{
  (void)clock;  // per-frame displacement already encodes the rate
  PredictedTrajectory out{instance.object_id, instance.anchor_frame, {}, "constant_velocity"};
  const Eigen::Vector2d origin = instance.anchor.position();
  Eigen::Vector2d step = Eigen::Vector2d::Zero();
  if (!instance.history.empty()) {
    step = origin - instance.history.back().position();
  }
  out.points.reserve(static_cast<std::size_t>(horizon));
  for (int k = 1; k <= horizon; ++k) {
    out.points.push_back(origin + static_cast<double>(k) * step);
  }
  return out;
}

Control fit_constant_controls(const PredictionInstance & instance, const FrameClock & clock)
{
  std::vector<AgentState2> observed = instance.history;
  observed.push_back(instance.anchor);
  if (observed.size() < 2) {
    return {};
  }
  // Least squares for a constant rate over equal steps is the mean difference.
  double dv = 0.0;
  double dtheta = 0.0;
  for (std::size_t i = 1; i < observed.size(); ++i) {
    dv += observed[i].speed - observed[i - 1].speed;
    dtheta += normalize_angle(observed[i].heading - observed[i - 1].heading);
  }
  const double steps = static_cast<double>(observed.size() - 1);
  return {dv / steps * clock.rate_hz(), dtheta / steps * clock.rate_hz()};
}

Control clamp(const Control & requested, const ControlLimits & limits)
{
  return {
    std::clamp(requested.accel, -limits.max_accel, limits.max_accel),
    std::clamp(requested.turn_rate, -limits.max_turn_rate, limits.max_turn_rate)};
}

AgentState2 unicycle_step(const AgentState2 & state, const Control & control, double dt)
{
  AgentState2 next;
  next.frame = state.frame + 1;
  const double theta = state.heading + control.turn_rate * dt;
  next.speed = std::max(0.0, state.speed + control.accel * dt);
  next.x = state.x + next.speed * std::cos(theta) * dt;
  next.y = state.y + next.speed * std::sin(theta) * dt;
  next.heading = normalize_angle(theta);
  return next;
}

std::vector<AgentState2> rollout_unicycle(
  const AgentState2 & start, std::span<const Control> controls, const ControlLimits & limits,
  const FrameClock & clock)
{
  limits.validate();
  std::vector<AgentState2> states;
  states.reserve(controls.size());
  AgentState2 state = start;
  state.speed = std::max(0.0, state.speed);
  for (const auto & requested : controls) {
    state = unicycle_step(state, clamp(requested, limits), clock.dt());
    states.push_back(state);
  }
  return states;
}

PredictedTrajectory predict_unicycle(
  const PredictionInstance & instance, const ControlMode & controls, const ControlLimits & limits,
  const FrameClock & clock, int horizon)
{
  ControlSequence sequence;
  if (const auto * given = std::get_if<ControlSequence>(&controls)) {
    if (static_cast<int>(given->size()) != horizon) {
      throw ContractError(fmt::format(
        "predict_unicycle: {} controls supplied for a horizon of {}", given->size(), horizon));
    }
    sequence = *given;
  } else {
    sequence.assign(
      static_cast<std::size_t>(horizon), clamp(fit_constant_controls(instance, clock), limits));
  }
  PredictedTrajectory out{instance.object_id, instance.anchor_frame, {}, "unicycle"};
  for (const auto & s : rollout_unicycle(instance.anchor, sequence, limits, clock)) {
    out.points.push_back(s.position());
  }
  return out;
}

void write_predictions_csv(
  const std::filesystem::path & path, std::span<const PredictedTrajectory> predictions)
{
  auto out = text::open_output(path);
  out << "object_id,anchor_frame,step,x,y\n";
  for (const auto & p : predictions) {
    for (std::size_t i = 0; i < p.points.size(); ++i) {
      out << p.object_id << ',' << p.anchor_frame << ',' << (i + 1) << ','
          << text::fixed9(p.points[i].x()) << ',' << text::fixed9(p.points[i].y()) << '\n';
    }
  }
}

std::vector<PredictedTrajectory> read_predictions_csv(
  const std::filesystem::path & path, std::span<const PredictionInstance> instances, int horizon,
  const std::string & predictor_tag)
{
  std::map<std::pair<int, int>, std::size_t> index;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    index.emplace(std::pair{instances[i].object_id, instances[i].anchor_frame}, i);
  }
  std::map<std::pair<int, int>, std::vector<std::pair<int, Eigen::Vector2d>>> rows;

  auto in = text::open_input(path);
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    if (!header_seen) {
      if (line != "object_id,anchor_frame,step,x,y") {
        throw ParseError(path.string(), line_no, "unexpected header '" + std::string(line) + "'");
      }
      header_seen = true;
      continue;
    }
    const auto f = text::split(line, ',');
    if (f.size() != 5) {
      throw ParseError(path.string(), line_no, "expected 5 columns");
    }
    const auto id = text::to_int(f[0]);
    const auto anchor = text::to_int(f[1]);
    const auto step = text::to_int(f[2]);
    const auto x = text::to_double(f[3]);
    const auto y = text::to_double(f[4]);
    if (!id || !anchor || !step || !x || !y) {
      throw ParseError(path.string(), line_no, "malformed number");
    }
    const std::pair key{*id, *anchor};
    if (!index.contains(key)) {
      throw ParseError(
        path.string(), line_no,
        fmt::format("prediction for unknown instance (object {}, anchor {})", *id, *anchor));
    }
    rows[key].emplace_back(*step, Eigen::Vector2d{*x, *y});
  }

  std::vector<std::string> missing;
  for (const auto & inst : instances) {
    if (!rows.contains({inst.object_id, inst.anchor_frame})) {
      missing.push_back(fmt::format("({}, {})", inst.object_id, inst.anchor_frame));
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto & m : missing) {
      list += (list.empty() ? "" : " ") + m;
    }
    throw CoverageError(fmt::format(
      "{}: coverage error, no predictions for (object_id, anchor_frame) {}", path.string(), list));
  }

  std::vector<PredictedTrajectory> out(instances.size());
  for (auto & [key, points] : rows) {
    if (static_cast<int>(points.size()) != horizon) {
      throw FormatError(fmt::format(
        "{}: format error, object {} anchor {} has {} points, expected {}", path.string(),
        key.first, key.second, points.size(), horizon));
    }
    std::sort(points.begin(), points.end(), [](const auto & a, const auto & b) {
      return a.first < b.first;
    });
    for (int i = 0; i < horizon; ++i) {
      if (points[static_cast<std::size_t>(i)].first != i + 1) {
        throw FormatError(fmt::format(
          "{}: format error, object {} anchor {} steps are not 1..{}", path.string(), key.first,
          key.second, horizon));
      }
    }
    auto & p = out[index.at(key)];
    p.object_id = key.first;
    p.anchor_frame = key.second;
    p.predictor_tag = predictor_tag;
    for (const auto & pt : points) {
      p.points.push_back(pt.second);
    }
  }
  return out;
}

std::vector<PredictedTrajectory> run_external_predictor(
  std::span<const PredictionInstance> instances, const ExternalPredictor & predictor, int horizon)
{
  std::filesystem::create_directories(predictor.work_dir);
  const auto instances_path = predictor.work_dir / "instances.csv";
  const auto predictions_path = predictor.work_dir / "predictions.csv";
  std::filesystem::remove(predictions_path);
  write_instances_csv(instances_path, instances);

  std::string command = predictor.command;
  command = replace_all(command, "{instances}", shell_quote(instances_path.string()));
  command = replace_all(command, "{predictions}", shell_quote(predictions_path.string()));
  const int status = std::system(command.c_str());
  if (status != 0) {
    throw DataError(fmt::format("external predictor failed with status {}: {}", status, command));
  }
  return read_predictions_csv(predictions_path, instances, horizon, "external");
}

}  // namespace estpred
