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

#include "estpred/diagnostics.hpp"

#include "estpred/error.hpp"
#include "estpred/geom.hpp"
#include "estpred/text.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace estpred
{

namespace
{

template <typename Diff>
std::optional<double> mean_abs_second_difference(std::span<const double> x, Diff diff)
{
  if (x.size() < 3) {
    return std::nullopt;
  }
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    sum += std::abs(diff(x[i + 1], x[i]) - diff(x[i], x[i - 1]));
  }
  return sum / static_cast<double>(x.size() - 2);
}

std::size_t second_difference_count(std::size_t n) { return n >= 3 ? n - 2 : 0; }

std::size_t series_size(const SmoothnessReport & r, SeriesKind kind)
{
  switch (kind) {
    case SeriesKind::step_distance:
      return r.step_distance.size();
    case SeriesKind::speed:
      return r.speed.size();
    case SeriesKind::heading:
      return r.heading.size();
  }
  return 0;
}

}  // namespace

std::string_view to_string(SeriesKind kind)
{
  switch (kind) {
    case SeriesKind::step_distance:
      return "step_distance";
    case SeriesKind::speed:
      return "speed";
    case SeriesKind::heading:
      return "heading";
  }
  return "?";
}

std::optional<double> roughness(std::span<const double> series)
{
  return mean_abs_second_difference(series, [](double a, double b) { return a - b; });
}

std::optional<double> angular_roughness(std::span<const double> series)
{
  return mean_abs_second_difference(
    series, [](double a, double b) { return normalize_angle(a - b); });
}

std::optional<double> SmoothnessReport::roughness_of(SeriesKind kind) const
{
  switch (kind) {
    case SeriesKind::step_distance:
      return step_roughness;
    case SeriesKind::speed:
      return speed_roughness;
    case SeriesKind::heading:
      return heading_roughness;
  }
  return std::nullopt;
}

std::optional<double> RoughnessSummary::of(SeriesKind kind) const
{
  switch (kind) {
    case SeriesKind::step_distance:
      return step_distance;
    case SeriesKind::speed:
      return speed;
    case SeriesKind::heading:
      return heading;
  }
  return std::nullopt;
}

std::vector<SmoothnessReport> smoothness(const Track & track)
{
  std::vector<SmoothnessReport> reports;
  reports.reserve(track.segments.size());
  for (const auto & seg : track.segments) {
    SmoothnessReport r;
    for (std::size_t i = 0; i < seg.size(); ++i) {
      r.frames.push_back(seg[i].frame);
      r.speed.push_back(seg[i].speed);
      r.heading.push_back(seg[i].heading);
      if (i > 0) {
        r.step_distance.push_back((seg[i].position() - seg[i - 1].position()).norm());
      }
    }
    if (seg.size() >= 3) {
      r.step_roughness = roughness(r.step_distance);
      r.speed_roughness = roughness(r.speed);
      r.heading_roughness = angular_roughness(r.heading);
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

RoughnessSummary summarize(std::span<const SmoothnessReport> reports)
{
  RoughnessSummary out;
  for (auto kind : kAllSeries) {
    double weighted = 0.0;
    std::size_t count = 0;
    for (const auto & r : reports) {
      const auto value = r.roughness_of(kind);
      const std::size_t n = second_difference_count(series_size(r, kind));
      if (value && n > 0) {
        weighted += *value * static_cast<double>(n);
        count += n;
      }
    }
    std::optional<double> pooled;
    if (count > 0) {
      pooled = weighted / static_cast<double>(count);
    }
    switch (kind) {
      case SeriesKind::step_distance:
        out.step_distance = pooled;
        break;
      case SeriesKind::speed:
        out.speed = pooled;
        break;
      case SeriesKind::heading:
        out.heading = pooled;
        break;
    }
  }
  return out;
}

SourceComparison compare_sources(std::span<const LabeledTrack> tracks)
{
  if (tracks.size() < 2) {
    throw ContractError("compare_sources: need at least 2 tracks");
  }
  SourceComparison cmp;
  cmp.object_id = tracks.front().track.object_id;
  std::set<int> common;
  for (const auto & s : tracks.front().track.flattened()) {
    common.insert(s.frame);
  }
  for (const auto & lt : tracks) {
    if (lt.track.object_id != cmp.object_id) {
      throw ContractError("compare_sources: tracks belong to different objects");
    }
    std::set<int> frames;
    for (const auto & s : lt.track.flattened()) {
      if (common.contains(s.frame)) {
        frames.insert(s.frame);
      }
    }
    common = std::move(frames);
  }
  if (common.empty()) {
    throw DataError(
      "compare_sources: object " + std::to_string(cmp.object_id) + " has no common frames");
  }
  cmp.frames.assign(common.begin(), common.end());

  for (const auto & lt : tracks) {
    std::vector<AgentState2> kept;
    for (const auto & s : lt.track.flattened()) {
      if (common.contains(s.frame)) {
        kept.push_back(s);
      }
    }
    const Track restricted = Track::from_states(lt.track.object_id, lt.track.source_tag, kept);
    cmp.sources.push_back(lt.label);
    cmp.reports.push_back(smoothness(restricted));
    cmp.summaries.push_back(summarize(cmp.reports.back()));
  }

  const std::size_t n = tracks.size();
  cmp.ratio.resize(n);
  cmp.rank.resize(n);
  for (std::size_t k = 0; k < kAllSeries.size(); ++k) {
    const auto kind = kAllSeries[k];
    const auto base = cmp.summaries.front().of(kind);
    for (std::size_t i = 0; i < n; ++i) {
      const auto value = cmp.summaries[i].of(kind);
      if (value && base) {
        if (*value == *base) {
          cmp.ratio[i][k] = 1.0;
        } else if (*base == 0.0) {
          cmp.ratio[i][k] = std::numeric_limits<double>::infinity();
        } else {
          cmp.ratio[i][k] = *value / *base;
        }
      }
      const double mine = value.value_or(std::numeric_limits<double>::infinity());
      int rank = 1;
      for (std::size_t j = 0; j < n; ++j) {
        const double other =
          cmp.summaries[j].of(kind).value_or(std::numeric_limits<double>::infinity());
        if (other < mine) {
          ++rank;
        }
      }
      cmp.rank[i][k] = rank;
    }
  }
  return cmp;
}

void write_series_csv(const std::filesystem::path & path, std::span<const LabeledTrack> sources)
{
  auto out = text::open_output(path);
  out << "frame,series,source,value\n";
  for (const auto & lt : sources) {
    for (const auto & r : smoothness(lt.track)) {
      for (std::size_t i = 0; i < r.step_distance.size(); ++i) {
        out << r.frames[i + 1] << ",step_distance," << lt.label << ','
            << text::fixed9(r.step_distance[i]) << '\n';
      }
      for (std::size_t i = 0; i < r.frames.size(); ++i) {
        out << r.frames[i] << ",speed," << lt.label << ',' << text::fixed9(r.speed[i]) << '\n';
      }
      for (std::size_t i = 0; i < r.frames.size(); ++i) {
        out << r.frames[i] << ",heading," << lt.label << ',' << text::fixed9(r.heading[i]) << '\n';
      }
    }
  }
}

void write_roughness_csv(const std::filesystem::path & path, std::span<const LabeledTrack> sources)
{
  auto out = text::open_output(path);
  out << "object_id,source,series,roughness\n";
  for (const auto & lt : sources) {
    const auto summary = summarize(smoothness(lt.track));
    for (auto kind : kAllSeries) {
      const auto v = summary.of(kind);
      out << lt.track.object_id << ',' << lt.label << ',' << to_string(kind) << ','
          << (v ? text::fixed9(*v) : std::string()) << '\n';
    }
  }
}

void write_comparison_csv(
  const std::filesystem::path & path, std::span<const SourceComparison> comparisons)
{
  auto out = text::open_output(path);
  out << "object_id,series,source,roughness,ratio_to_first,rank\n";
  for (const auto & cmp : comparisons) {
    for (std::size_t k = 0; k < kAllSeries.size(); ++k) {
      for (std::size_t i = 0; i < cmp.sources.size(); ++i) {
        const auto v = cmp.summaries[i].of(kAllSeries[k]);
        const auto ratio = cmp.ratio[i][k];
        out << cmp.object_id << ',' << to_string(kAllSeries[k]) << ',' << cmp.sources[i] << ','
            << (v ? text::fixed9(*v) : std::string()) << ','
            << (ratio ? (std::isinf(*ratio) ? std::string("inf") : text::fixed9(*ratio))
                      : std::string())
            << ',' << cmp.rank[i][k] << '\n';
      }
    }
  }
}

}  // namespace estpred
