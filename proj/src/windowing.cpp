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

#include "estpred/windowing.hpp"

#include "estpred/error.hpp"
#include "estpred/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <string>

namespace estpred
{

void WindowSpec::validate() const
{
  if (min_history < 1 || max_history < min_history || horizon < 1) {
    throw ConfigError(fmt::format(
      "invalid window: min_history={} max_history={} horizon={} (need 1 <= min <= max, "
      "horizon >= 1)",
      min_history, max_history, horizon));
  }
}

std::vector<bool> eligible(const Track & track, const WindowSpec & spec)
{
  spec.validate();
  std::vector<bool> out;
  out.reserve(track.segments.size());
  for (const auto & seg : track.segments) {
    out.push_back(static_cast<int>(seg.size()) >= spec.min_segment_length());
  }
  return out;
}

std::vector<PredictionInstance> make_instances(const Track & track, const WindowSpec & spec)
{
  spec.validate();
  std::vector<PredictionInstance> out;
  for (const auto & seg : track.segments) {
    const int n = static_cast<int>(seg.size());
    for (int a = spec.min_history; a + spec.horizon <= n - 1; ++a) {
      PredictionInstance inst;
      inst.object_id = track.object_id;
      inst.anchor_frame = seg[a].frame;
      inst.source_tag = track.source_tag;
      const int first = std::max(0, a - spec.max_history);
      inst.history.assign(seg.begin() + first, seg.begin() + a);
      inst.anchor = seg[a];
      inst.future_truth.assign(seg.begin() + a + 1, seg.begin() + a + 1 + spec.horizon);
      out.push_back(std::move(inst));
    }
  }
  return out;
}

std::size_t consecutive_pair_count(std::span<const PredictionInstance> instances)
{
  std::size_t pairs = 0;
  for (std::size_t i = 1; i < instances.size(); ++i) {
    if (
      instances[i].object_id == instances[i - 1].object_id &&
      instances[i].anchor_frame == instances[i - 1].anchor_frame + 1) {
      ++pairs;
    }
  }
  return pairs;
}

void write_instances_csv(
  const std::filesystem::path & path, std::span<const PredictionInstance> instances)
{
  auto out = text::open_output(path);
  out << "object_id,anchor_frame,role,frame,x,y,heading,speed\n";
  const auto row = [&](const PredictionInstance & inst, const char * role, const AgentState2 & s) {
    out << inst.object_id << ',' << inst.anchor_frame << ',' << role << ',' << s.frame << ','
        << text::fixed9(s.x) << ',' << text::fixed9(s.y) << ',' << text::fixed9(s.heading) << ','
        << text::fixed9(s.speed) << '\n';
  };
  for (const auto & inst : instances) {
    for (const auto & s : inst.history) {
      row(inst, "history", s);
    }
    row(inst, "anchor", inst.anchor);
    for (const auto & s : inst.future_truth) {
      row(inst, "truth", s);
    }
  }
}

std::vector<PredictionInstance> read_instances_csv(const std::filesystem::path & path, SourceTag tag)
{
  auto in = text::open_input(path);
  std::vector<PredictionInstance> out;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  bool have_anchor = false;
  const auto finish = [&](std::size_t line) {
    if (!out.empty() && !have_anchor) {
      throw ParseError(path.string(), line, "instance without an anchor row");
    }
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    if (!header_seen) {
      if (line != "object_id,anchor_frame,role,frame,x,y,heading,speed") {
        throw ParseError(path.string(), line_no, "unexpected header");
      }
      header_seen = true;
      continue;
    }
    const auto f = text::split(line, ',');
    if (f.size() != 8) {
      throw ParseError(path.string(), line_no, "expected 8 columns");
    }
    const auto id = text::to_int(f[0]);
    const auto anchor = text::to_int(f[1]);
    const auto frame = text::to_int(f[3]);
    const auto x = text::to_double(f[4]);
    const auto y = text::to_double(f[5]);
    const auto heading = text::to_double(f[6]);
    const auto speed = text::to_double(f[7]);
    if (!id || !anchor || !frame || !x || !y || !heading || !speed) {
      throw ParseError(path.string(), line_no, "malformed number");
    }
    if (out.empty() || out.back().object_id != *id || out.back().anchor_frame != *anchor) {
      finish(line_no);
      PredictionInstance inst;
      inst.object_id = *id;
      inst.anchor_frame = *anchor;
      inst.source_tag = tag;
      out.push_back(std::move(inst));
      have_anchor = false;
    }
    auto & inst = out.back();
    const AgentState2 s{*frame, *x, *y, *heading, *speed};
    const auto role = f[2];
    if (role == "history") {
      if (have_anchor) {
        throw ParseError(path.string(), line_no, "history row after anchor");
      }
      inst.history.push_back(s);
    } else if (role == "anchor") {
      if (have_anchor || s.frame != inst.anchor_frame) {
        throw ParseError(path.string(), line_no, "bad anchor row");
      }
      inst.anchor = s;
      have_anchor = true;
    } else if (role == "truth") {
      if (!have_anchor) {
        throw ParseError(path.string(), line_no, "truth row before anchor");
      }
      inst.future_truth.push_back(s);
    } else {
      throw ParseError(path.string(), line_no, "unknown role '" + std::string(role) + "'");
    }
  }
  finish(line_no);
  return out;
}

}  // namespace estpred
