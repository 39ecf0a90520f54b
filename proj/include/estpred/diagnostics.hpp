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

#ifndef ESTPRED__DIAGNOSTICS_HPP_
#define ESTPRED__DIAGNOSTICS_HPP_

#include "estpred/track.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace estpred
{

enum class SeriesKind { step_distance, speed, heading };
inline constexpr std::array<SeriesKind, 3> kAllSeries{
  SeriesKind::step_distance, SeriesKind::speed, SeriesKind::heading};
std::string_view to_string(SeriesKind kind);

/// Mean absolute second difference. Empty when fewer than 3 samples.
std::optional<double> roughness(std::span<const double> series);
/// Same, with each first difference wrapped to (-pi, pi] first.
std::optional<double> angular_roughness(std::span<const double> series);

/// Input-quality series of one segment. step_distance[i] is between frames i and i+1.
struct SmoothnessReport
{
  std::vector<int> frames;
  std::vector<double> step_distance;  // [m], N-1 entries
  std::vector<double> speed;          // [m/s], N entries
  std::vector<double> heading;        // [rad], N entries
  std::optional<double> step_roughness;
  std::optional<double> speed_roughness;
  std::optional<double> heading_roughness;

  std::optional<double> roughness_of(SeriesKind kind) const;
};

std::vector<SmoothnessReport> smoothness(const Track & track);

/// Roughness pooled over segments, weighted by their number of second differences.
struct RoughnessSummary
{
  std::optional<double> step_distance;
  std::optional<double> speed;
  std::optional<double> heading;

  std::optional<double> of(SeriesKind kind) const;
};

RoughnessSummary summarize(std::span<const SmoothnessReport> reports);

struct LabeledTrack
{
  std::string label;
  Track track;
};

/**
 * @brief Sources of one object compared over their common frames.
 *
 * reports[i] and summaries[i] belong to sources[i]. ratio[i] is the roughness
 * of source i over that of source 0 (1 when both are equal, including 0/0).
 * rank[i] orders sources from smoothest (1) per series.
 */
struct SourceComparison
{
  int object_id = 0;
  std::vector<std::string> sources;
  std::vector<int> frames;
  std::vector<std::vector<SmoothnessReport>> reports;
  std::vector<RoughnessSummary> summaries;
  std::vector<std::array<std::optional<double>, 3>> ratio;
  std::vector<std::array<int, 3>> rank;
};

/// Throws ContractError for fewer than 2 tracks or mixed object ids, DataError when
/// the frame sets do not intersect.
SourceComparison compare_sources(std::span<const LabeledTrack> tracks);

/// Tidy series CSV: "frame,series,source,value". For step_distance the frame is the later one.
void write_series_csv(
  const std::filesystem::path & path, std::span<const LabeledTrack> sources);
/// "object_id,source,series,roughness" with empty value when undefined.
void write_roughness_csv(
  const std::filesystem::path & path, std::span<const LabeledTrack> sources);
/// "object_id,series,source,roughness,ratio_to_first,rank".
void write_comparison_csv(
  const std::filesystem::path & path, std::span<const SourceComparison> comparisons);

}  // namespace estpred

#endif  // ESTPRED__DIAGNOSTICS_HPP_
