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

#include "estpred/smoothing.hpp"

#include "estpred/error.hpp"
#include "estpred/geom.hpp"
#include "estpred/text.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace estpred
{

void EkfConfig::validate() const
{
  const auto require_positive = [](double v, const char * name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(fmt::format("EKF config: {} must be positive, got {}", name, v));
    }
  };
  require_positive(accel_std, "accel_std");
  require_positive(turn_rate_std, "turn_rate_std");
  require_positive(position_std, "position_std");
  require_positive(heading_std, "heading_std");
  for (int i = 0; i < 4; ++i) {
    require_positive(initial_covariance[i], "initial_covariance");
  }
}

EkfConfig EkfConfig::from_file(const std::filesystem::path & path)
{
  EkfConfig config;
  for (const auto & section : text::read_key_value(path)) {
    for (const auto & [key, value] : section.values) {
      const auto number = [&](double & out) {
        const auto v = text::to_double(value);
        if (!v) {
          throw ConfigError(path.string() + ": bad value for " + key);
        }
        out = *v;
      };
      if (key == "accel_std") {
        number(config.accel_std);
      } else if (key == "turn_rate_std") {
        number(config.turn_rate_std);
      } else if (key == "position_std") {
        number(config.position_std);
      } else if (key == "heading_std") {
        number(config.heading_std);
      } else if (key == "use_heading") {
        const auto b = text::to_bool(value);
        if (!b) {
          throw ConfigError(path.string() + ": bad value for use_heading");
        }
        config.use_heading = *b;
      } else if (key == "initial_covariance") {
        const auto parts = text::split(value, ',');
        if (parts.size() != 4) {
          throw ConfigError(path.string() + ": initial_covariance needs 4 comma-separated values");
        }
        for (int i = 0; i < 4; ++i) {
          const auto v = text::to_double(parts[i]);
          if (!v) {
            throw ConfigError(path.string() + ": bad value in initial_covariance");
          }
          config.initial_covariance[i] = *v;
        }
      } else {
        throw ConfigError(path.string() + ": unknown EKF key '" + key + "'");
      }
    }
  }
  config.validate();
  return config;
}

std::map<std::string, std::string> EkfConfig::to_key_values() const
{
  return {
    {"accel_std", text::exact(accel_std)},
    {"turn_rate_std", text::exact(turn_rate_std)},
    {"position_std", text::exact(position_std)},
    {"use_heading", use_heading ? "true" : "false"},
    {"heading_std", text::exact(heading_std)},
    {"initial_covariance",
     fmt::format(
       "{},{},{},{}", text::exact(initial_covariance[0]), text::exact(initial_covariance[1]),
       text::exact(initial_covariance[2]), text::exact(initial_covariance[3]))},
  };
}

UnicycleEkf::UnicycleEkf(const EkfConfig & config, const FrameClock & clock)
: config_(config), dt_(clock.dt())
{
  config_.validate();
}

void UnicycleEkf::initialize(const AgentState2 & measurement)
{
  state_.mean = {measurement.x, measurement.y, measurement.heading, measurement.speed};
  state_.covariance = config_.initial_covariance.asDiagonal();
}

void UnicycleEkf::predict()
{
  auto & m = state_.mean;
  const double c = std::cos(m[2]);
  const double s = std::sin(m[2]);
  const double v = m[3];

  Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
  f(0, 2) = -v * s * dt_;
  f(0, 3) = c * dt_;
  f(1, 2) = v * c * dt_;
  f(1, 3) = s * dt_;

  // Noise inputs (acceleration, turn rate) held over one step.
  Eigen::Matrix<double, 4, 2> g = Eigen::Matrix<double, 4, 2>::Zero();
  g(0, 0) = 0.5 * dt_ * dt_ * c;
  g(1, 0) = 0.5 * dt_ * dt_ * s;
  g(2, 1) = dt_;
  g(3, 0) = dt_;
  const Eigen::Vector2d q_diag{
    config_.accel_std * config_.accel_std, config_.turn_rate_std * config_.turn_rate_std};

  m[0] += v * c * dt_;
  m[1] += v * s * dt_;

  state_.covariance = f * state_.covariance * f.transpose() + g * q_diag.asDiagonal() * g.transpose();
  state_.covariance = 0.5 * (state_.covariance + state_.covariance.transpose());
}

void UnicycleEkf::update(const AgentState2 & measurement)
{
  const int dim = config_.use_heading ? 3 : 2;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, 4);
  Eigen::VectorXd residual(dim);
  Eigen::VectorXd r_diag(dim);
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;
  residual[0] = measurement.x - state_.mean[0];
  residual[1] = measurement.y - state_.mean[1];
  r_diag[0] = r_diag[1] = config_.position_std * config_.position_std;
  if (config_.use_heading) {
    h(2, 2) = 1.0;
    residual[2] = normalize_angle(measurement.heading - state_.mean[2]);
    r_diag[2] = config_.heading_std * config_.heading_std;
  }
  const Eigen::MatrixXd r = r_diag.asDiagonal();
  const Eigen::Matrix4d & p = state_.covariance;
  const Eigen::MatrixXd s = h * p * h.transpose() + r;
  const Eigen::MatrixXd k = s.ldlt().solve(h * p).transpose();

  state_.mean += k * residual;
  state_.mean[2] = normalize_angle(state_.mean[2]);

  // Joseph form keeps the update symmetric positive-definite in floating point.
  const Eigen::Matrix4d i_kh = Eigen::Matrix4d::Identity() - k * h;
  state_.covariance = i_kh * p * i_kh.transpose() + k * r * k.transpose();
  state_.covariance = 0.5 * (state_.covariance + state_.covariance.transpose());
  check_covariance(measurement.frame);
}

void UnicycleEkf::check_covariance(int frame)
{
  const Eigen::LLT<Eigen::Matrix4d> llt(state_.covariance);
  if (llt.info() != Eigen::Success || !state_.covariance.allFinite()) {
    throw NumericalError(
      fmt::format("EKF covariance lost positive-definiteness at frame {}", frame));
  }
}

Track ekf_smooth(const Track & track, const EkfConfig & config, const FrameClock & clock)
{
  Track out;
  out.object_id = track.object_id;
  out.source_tag = SourceTag::gt_ekf;
  UnicycleEkf filter(config, clock);
  for (const auto & segment : track.segments) {
    if (segment.empty()) {
      throw ContractError("ekf_smooth: empty segment");
    }
    Segment filtered;
    filtered.reserve(segment.size());
    for (std::size_t i = 0; i < segment.size(); ++i) {
      if (i == 0) {
        filter.initialize(segment[i]);
      } else {
        filter.predict();
        filter.update(segment[i]);
      }
      const auto & m = filter.state().mean;
      AgentState2 s{segment[i].frame, m[0], m[1], m[2], m[3]};
      // A negative speed estimate is the same motion facing the other way.
      if (s.speed < 0.0) {
        s.speed = -s.speed;
        s.heading = normalize_angle(s.heading + std::numbers::pi);
      }
      filtered.push_back(s);
    }
    out.segments.push_back(std::move(filtered));
  }
  return out;
}

}  // namespace estpred
