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

#include "cli.hpp"

#include "estpred/diagnostics.hpp"
#include "estpred/error.hpp"
#include "estpred/geom.hpp"
#include "estpred/ingest.hpp"
#include "estpred/metrics.hpp"
#include "estpred/predictors.hpp"
#include "estpred/smoothing.hpp"
#include "estpred/synth.hpp"
#include "estpred/text.hpp"
#include "estpred/windowing.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace estpred::cli
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

/// Flags shared by every subcommand.
struct GlobalOptions
{
  double rate_hz = 20.0;
  int horizon = 30;
  int min_history = 1;
  int max_history = 6;
  double max_turn_rate = 0.7;
  double max_accel = 4.0;
  std::uint64_t seed = 0;
  std::string out = "out";

  WindowSpec window() const
  {
    WindowSpec spec{min_history, max_history, horizon};
    spec.validate();
    return spec;
  }
  ControlLimits limits() const
  {
    ControlLimits l{max_turn_rate, max_accel};
    l.validate();
    return l;
  }
  FrameClock clock() const { return FrameClock(rate_hz); }

  json to_json() const
  {
    return {
      {"rate_hz", rate_hz},
      {"horizon", horizon},
      {"min_history", min_history},
      {"max_history", max_history},
      {"max_turn_rate", max_turn_rate},
      {"max_accel", max_accel},
      {"seed", seed},
      {"out", out},
    };
  }
};

struct LabeledPath
{
  std::string label;
  fs::path path;
};

LabeledPath parse_labeled_path(const std::string & arg)
{
  const auto eq = arg.find('=');
  if (eq != std::string::npos && eq > 0) {
    return {arg.substr(0, eq), arg.substr(eq + 1)};
  }
  return {fs::path(arg).stem().string(), arg};
}

SourceTag tag_for_label(const std::string & label)
{
  try {
    return parse_source_tag(label);
  } catch (const ConfigError &) {
    return SourceTag::estimated;
  }
}

void require_file(const fs::path & path)
{
  if (!fs::is_regular_file(path)) {
    throw DataError("input file not found: " + path.string());
  }
}

/// Every run records its resolved settings next to its outputs.
void write_manifest(const fs::path & dir, const std::string & command, json body,
                    const GlobalOptions & global)
{
  body["command"] = command;
  body["global"] = global.to_json();
  body["noise_algorithm"] = std::string(NormalSource::kAlgorithm);
  auto out = text::open_output(dir / "manifest.json");
  out << body.dump(2) << '\n';
}

json window_json(const WindowSpec & spec)
{
  return {
    {"min_history", spec.min_history},
    {"max_history", spec.max_history},
    {"horizon", spec.horizon},
    {"min_segment_length", spec.min_segment_length()}};
}

struct SummaryCounts
{
  std::size_t objects = 0;
  std::size_t segments = 0;
  std::size_t frames = 0;
};

SummaryCounts count(const std::vector<Track> & tracks)
{
  SummaryCounts c;
  c.objects = tracks.size();
  for (const auto & t : tracks) {
    c.segments += t.segments.size();
    c.frames += t.state_count();
  }
  return c;
}

// ---------------------------------------------------------------------------
// predictor selection shared by predict and evaluate

struct PredictorChoice
{
  std::string name = "cv";
  std::string command;

  json to_json() const
  {
    json j{{"name", name}};
    if (name == "external") {
      j["command"] = command;
    }
    return j;
  }
};

std::vector<PredictedTrajectory> run_predictor(
  const PredictorChoice & choice, const std::vector<PredictionInstance> & instances,
  const GlobalOptions & global, const fs::path & work_dir)
{
  const auto clock = global.clock();
  std::vector<PredictedTrajectory> out;
  out.reserve(instances.size());
  if (choice.name == "cv") {
    for (const auto & inst : instances) {
      out.push_back(predict_constant_velocity(inst, clock, global.horizon));
    }
  } else if (choice.name == "unicycle") {
    const auto limits = global.limits();
    for (const auto & inst : instances) {
      out.push_back(predict_unicycle(inst, FittedConstant{}, limits, clock, global.horizon));
    }
  } else if (choice.name == "external") {
    if (choice.command.empty()) {
      throw ConfigError("--predictor external needs --command");
    }
    out = run_external_predictor(instances, {choice.command, work_dir}, global.horizon);
  } else {
    throw ConfigError("unknown predictor '" + choice.name + "' (cv, unicycle, external)");
  }
  return out;
}

// ---------------------------------------------------------------------------
// ingest

struct IngestOptions
{
  std::string format;
  std::string input;
  std::string motions;
  std::string camera_poses;
  std::string convention;
  std::string heading;
  std::string types;
  std::string source;
  std::string scale_reference;
  int scale_reference_object = -1;
};

int cmd_ingest(const IngestOptions & opt, const GlobalOptions & global, std::ostream & out,
               std::ostream & err)
{
  const auto clock = global.clock();
  require_file(opt.input);
  std::vector<Track> tracks;
  std::vector<std::string> warnings;
  json manifest{{"format", opt.format}, {"input", opt.input}};

  if (opt.format == "kitti-gt") {
    const auto convention = parse_axis_convention(opt.convention.empty() ? "camera-xz" : opt.convention);
    const auto heading = parse_heading_source(opt.heading.empty() ? "provided" : opt.heading);
    std::set<std::string> whitelist;
    for (auto t : text::split(opt.types, ',')) {
      if (!t.empty()) {
        whitelist.emplace(t);
      }
    }
    const auto records = parse_kitti_tracking_labels(opt.input, whitelist);
    std::map<int, Pose3> cameras;
    if (!opt.camera_poses.empty()) {
      require_file(opt.camera_poses);
      cameras = parse_estimator_tracks(opt.camera_poses, clock).camera_poses;
    } else {
      for (const auto & [id, list] : records) {
        for (const auto & r : list) {
          cameras.emplace(r.frame, Pose3::identity());
        }
      }
    }
    for (const auto & [id, list] : records) {
      tracks.push_back(to_world_track(id, list, cameras, convention, clock, heading));
    }
    const auto tag = opt.source.empty() ? SourceTag::gt : parse_source_tag(opt.source);
    for (auto & t : tracks) {
      t.source_tag = tag;
    }
    manifest["convention"] = std::string(to_string(convention));
    manifest["heading"] = std::string(to_string(heading));
    manifest["types"] = opt.types;
    manifest["camera_poses"] = opt.camera_poses;
  } else if (opt.format == "estimator") {
    const auto convention = parse_axis_convention(opt.convention.empty() ? "world-xy" : opt.convention);
    const auto heading = parse_heading_source(opt.heading.empty() ? "differenced" : opt.heading);
    std::optional<fs::path> motions;
    if (!opt.motions.empty()) {
      require_file(opt.motions);
      motions = opt.motions;
    }
    const auto bundle = parse_estimator_tracks(opt.input, clock, motions);
    warnings = bundle.warnings;
    tracks = bundle_to_tracks(bundle, convention, heading);
    if (motions) {
      out << fmt::format(
        "motion consistency: {} object motions checked, {} inconsistent\n",
        [&] {
          std::size_t n = 0;
          for (const auto & [id, m] : bundle.object_motions) {
            n += m.size();
          }
          return n;
        }(),
        warnings.size());
    }
    const auto tag = opt.source.empty() ? SourceTag::estimated : parse_source_tag(opt.source);
    for (auto & t : tracks) {
      t.source_tag = tag;
    }
    manifest["convention"] = std::string(to_string(convention));
    manifest["heading"] = std::string(to_string(heading));
    manifest["motions"] = opt.motions;
  } else if (opt.format == "canonical") {
    tracks = read_state_csv(opt.input, opt.source.empty() ? SourceTag::estimated : parse_source_tag(opt.source));
  } else {
    throw ConfigError("unknown --format '" + opt.format + "' (kitti-gt, estimator, canonical)");
  }

  if (!opt.scale_reference.empty()) {
    require_file(opt.scale_reference);
    std::vector<double> reference;
    for (const auto & t : read_state_csv(opt.scale_reference, SourceTag::gt)) {
      if (opt.scale_reference_object < 0 || t.object_id == opt.scale_reference_object) {
        for (const auto & s : t.flattened()) {
          reference.push_back(s.speed);
        }
      }
    }
    json scales = json::object();
    for (auto & t : tracks) {
      auto calibrated = calibrate_scale(t, reference);
      scales[std::to_string(t.object_id)] = calibrated.scale;
      t = std::move(calibrated.track);
    }
    manifest["scale_reference"] = opt.scale_reference;
    manifest["scale_reference_object"] = opt.scale_reference_object;
    manifest["scales"] = scales;
  }

  for (const auto & w : warnings) {
    err << "warning: " << w << '\n';
  }
  const fs::path dir = global.out;
  write_state_csv(dir / "states.csv", tracks);
  const auto c = count(tracks);
  manifest["summary"] = {{"objects", c.objects}, {"segments", c.segments}, {"frames", c.frames}};
  manifest["warnings"] = warnings;
  manifest["source"] = tracks.empty() ? std::string() : std::string(to_string(tracks.front().source_tag));
  write_manifest(dir, "ingest", manifest, global);
  out << fmt::format("objects={} segments={} frames={}\n", c.objects, c.segments, c.frames);
  return 0;
}

// ---------------------------------------------------------------------------
// smooth

int cmd_smooth(const std::string & input, const std::string & ekf_config,
               const GlobalOptions & global, std::ostream & out)
{
  require_file(input);
  EkfConfig config;
  if (!ekf_config.empty()) {
    require_file(ekf_config);
    config = EkfConfig::from_file(ekf_config);
  }
  config.validate();
  const auto clock = global.clock();
  std::vector<Track> smoothed;
  for (const auto & t : read_state_csv(input, SourceTag::gt)) {
    smoothed.push_back(ekf_smooth(t, config, clock));
  }
  const fs::path dir = global.out;
  write_state_csv(dir / "states.csv", smoothed);
  write_manifest(
    dir, "smooth", {{"input", input}, {"ekf_config_file", ekf_config}, {"ekf", config.to_key_values()}},
    global);
  const auto c = count(smoothed);
  out << fmt::format("smoothed objects={} segments={} frames={}\n", c.objects, c.segments, c.frames);
  return 0;
}

// ---------------------------------------------------------------------------
// diagnose

int cmd_diagnose(const std::vector<std::string> & inputs, const GlobalOptions & global,
                 std::ostream & out)
{
  std::vector<LabeledPath> sources;
  for (const auto & arg : inputs) {
    sources.push_back(parse_labeled_path(arg));
    require_file(sources.back().path);
  }
  std::map<int, std::vector<LabeledTrack>> by_object;
  std::vector<LabeledTrack> all;
  for (const auto & src : sources) {
    for (auto & t : read_state_csv(src.path, tag_for_label(src.label))) {
      by_object[t.object_id].push_back({src.label, t});
      all.push_back({src.label, std::move(t)});
    }
  }
  const fs::path dir = global.out;
  for (const auto & [id, list] : by_object) {
    write_series_csv(dir / fmt::format("series_obj{}.csv", id), list);
  }
  write_roughness_csv(dir / "roughness.csv", all);

  json manifest{{"inputs", inputs}};
  if (sources.size() >= 2) {
    std::vector<SourceComparison> comparisons;
    for (const auto & [id, list] : by_object) {
      if (list.size() == sources.size()) {
        comparisons.push_back(compare_sources(list));
      }
    }
    if (comparisons.empty()) {
      throw DataError("diagnose: no object is present in every source (empty intersection)");
    }
    write_comparison_csv(dir / "comparison.csv", comparisons);
    manifest["compared_objects"] = comparisons.size();
    out << fmt::format("compared {} objects across {} sources\n", comparisons.size(), sources.size());
  }
  write_manifest(dir, "diagnose", manifest, global);
  out << fmt::format("series written for {} objects\n", by_object.size());
  return 0;
}

// ---------------------------------------------------------------------------
// window

int cmd_window(const std::string & input, const std::string & source,
               const GlobalOptions & global, std::ostream & out)
{
  require_file(input);
  const auto spec = global.window();
  const auto tag = source.empty() ? SourceTag::estimated : parse_source_tag(source);
  std::vector<PredictionInstance> instances;
  std::size_t eligible_segments = 0;
  std::size_t eligible_objects = 0;
  for (const auto & t : read_state_csv(input, tag)) {
    const auto flags = eligible(t, spec);
    const auto n = static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true));
    eligible_segments += n;
    eligible_objects += n > 0 ? 1 : 0;
    auto made = make_instances(t, spec);
    instances.insert(instances.end(), made.begin(), made.end());
  }
  const fs::path dir = global.out;
  write_instances_csv(dir / "instances.csv", instances);
  const auto pairs = consecutive_pair_count(instances);
  write_manifest(
    dir, "window",
    {{"input", input},
     {"window", window_json(spec)},
     {"eligible_objects", eligible_objects},
     {"eligible_segments", eligible_segments},
     {"instances", instances.size()},
     {"consecutive_pairs", pairs}},
    global);
  out << fmt::format(
    "eligible_objects={} eligible_segments={} instances={} consecutive_pairs={}\n",
    eligible_objects, eligible_segments, instances.size(), pairs);
  return 0;
}

// ---------------------------------------------------------------------------
// predict

int cmd_predict(const std::string & instances_path, const PredictorChoice & choice,
                const GlobalOptions & global, std::ostream & out)
{
  require_file(instances_path);
  const auto instances = read_instances_csv(instances_path);
  for (const auto & inst : instances) {
    if (static_cast<int>(inst.future_truth.size()) != global.horizon) {
      throw ContractError(fmt::format(
        "instance (object {}, anchor {}) has {} truth frames but --horizon is {}", inst.object_id,
        inst.anchor_frame, inst.future_truth.size(), global.horizon));
    }
  }
  const fs::path dir = global.out;
  const auto predictions = run_predictor(choice, instances, global, dir / "exchange");
  write_predictions_csv(dir / "predictions.csv", predictions);
  write_manifest(
    dir, "predict", {{"instances", instances_path}, {"predictor", choice.to_json()}}, global);
  out << fmt::format("predictions={}\n", predictions.size());
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOptions
{
  std::vector<std::string> inputs;
  std::string sequence = "seq";
  std::string sequences_dir;
  std::string rpe_reference;
  std::string rpe_estimate;
  int rpe_delta = 1;
  PredictorChoice predictor;
};

struct SequenceResult
{
  std::map<std::string, std::vector<InstanceScore>> by_source;  // source -> scores
};

SequenceResult evaluate_sequence(
  const std::string & sequence, const std::vector<LabeledPath> & sources,
  const std::map<std::string, std::vector<fs::path>> & training, const EvaluateOptions & opt,
  const GlobalOptions & global, const fs::path & dir)
{
  const auto spec = global.window();
  SequenceResult result;
  for (const auto & src : sources) {
    std::vector<PredictionInstance> instances;
    // Truth comes from the same source the predictor sees.
    for (const auto & t : read_state_csv(src.path, tag_for_label(src.label))) {
      auto made = make_instances(t, spec);
      instances.insert(instances.end(), made.begin(), made.end());
    }
    if (instances.empty()) {
      continue;
    }
    PredictorChoice choice = opt.predictor;
    const fs::path work = dir / sequence / ("exchange_" + src.label);
    if (choice.name == "external") {
      auto list = text::open_output(work / "train_list.txt");
      if (const auto it = training.find(src.label); it != training.end()) {
        for (const auto & p : it->second) {
          list << p.string() << '\n';
        }
      }
      std::string cmd = choice.command;
      const std::string key = "{train}";
      for (auto pos = cmd.find(key); pos != std::string::npos; pos = cmd.find(key)) {
        cmd.replace(pos, key.size(), "'" + (work / "train_list.txt").string() + "'");
      }
      choice.command = cmd;
    }
    const auto predictions = run_predictor(choice, instances, global, work);
    result.by_source[src.label] = score_instances(instances, predictions);
  }
  return result;
}

int cmd_evaluate(const EvaluateOptions & opt, const GlobalOptions & global, std::ostream & out)
{
  const auto spec = global.window();
  const fs::path dir = global.out;

  // sequence -> sources
  std::map<std::string, std::vector<LabeledPath>> layout;
  if (!opt.sequences_dir.empty()) {
    if (!fs::is_directory(opt.sequences_dir)) {
      throw DataError("sequence directory not found: " + opt.sequences_dir);
    }
    for (const auto & entry : fs::directory_iterator(opt.sequences_dir)) {
      if (!entry.is_directory()) {
        continue;
      }
      auto & list = layout[entry.path().filename().string()];
      for (const auto & file : fs::directory_iterator(entry.path())) {
        if (file.is_regular_file() && file.path().extension() == ".csv") {
          list.push_back({file.path().stem().string(), file.path()});
        }
      }
      std::sort(list.begin(), list.end(), [](const auto & a, const auto & b) {
        return a.label < b.label;
      });
    }
  } else {
    for (const auto & arg : opt.inputs) {
      layout[opt.sequence].push_back(parse_labeled_path(arg));
    }
  }
  if (layout.empty()) {
    throw ConfigError("evaluate: give --input or --sequences-dir");
  }
  for (const auto & [seq, list] : layout) {
    for (const auto & src : list) {
      require_file(src.path);
    }
  }

  // Leave-one-sequence-out: each held-out sequence sees every other sequence as training data.
  std::map<std::string, std::map<std::string, std::vector<fs::path>>> training;
  for (const auto & [held_out, unused] : layout) {
    for (const auto & [seq, list] : layout) {
      if (seq == held_out) {
        continue;
      }
      for (const auto & src : list) {
        training[held_out][src.label].push_back(src.path);
      }
    }
  }

  std::vector<std::future<SequenceResult>> futures;
  std::vector<std::string> order;
  for (const auto & [seq, list] : layout) {
    order.push_back(seq);
    futures.push_back(std::async(std::launch::async, [&, seq = seq, list = list] {
      return evaluate_sequence(seq, list, training[seq], opt, global, dir);
    }));
  }
  std::map<std::string, std::map<std::string, std::vector<InstanceScore>>> by_source;
  for (std::size_t i = 0; i < futures.size(); ++i) {
    const auto result = futures[i].get();
    for (const auto & [source, scores] : result.by_source) {
      by_source[source][order[i]] = scores;
    }
  }
  if (by_source.empty()) {
    throw DataError(fmt::format(
      "no eligible objects: a segment needs at least min_history + 1 + horizon = {} consecutive "
      "frames ({} history, the current frame, {} horizon)",
      spec.min_segment_length(), spec.min_history, spec.horizon));
  }

  std::map<std::string, AggregateReport> reports;
  for (const auto & [source, scores] : by_source) {
    reports[source] = aggregate(scores);
  }

  if (layout.size() > 1) {
    for (const auto & seq : order) {
      std::map<std::string, AggregateReport> held_out;
      for (const auto & [source, scores] : by_source) {
        if (const auto it = scores.find(seq); it != scores.end()) {
          held_out[source] = aggregate({{seq, it->second}});
          write_instance_scores_csv(
            dir / seq / fmt::format("instance_scores_{}.csv", source), {{seq, it->second}});
        }
      }
      if (!held_out.empty()) {
        write_summary_table_csv(dir / seq / "summary.csv", held_out);
      }
    }
  }
  for (const auto & [source, scores] : by_source) {
    write_instance_scores_csv(dir / fmt::format("instance_scores_{}.csv", source), scores);
  }
  write_summary_table_csv(dir / "summary.csv", reports);
  write_counts_csv(dir / "counts.csv", reports);

  json manifest{
    {"inputs", opt.inputs},
    {"sequence", opt.sequence},
    {"sequences_dir", opt.sequences_dir},
    {"predictor", opt.predictor.to_json()},
    {"window", window_json(spec)},
    {"limits", {{"max_turn_rate", global.max_turn_rate}, {"max_accel", global.max_accel}}}};

  if (!opt.rpe_reference.empty() || !opt.rpe_estimate.empty()) {
    if (opt.rpe_reference.empty() || opt.rpe_estimate.empty()) {
      throw ConfigError("RPE needs both --rpe-reference and --rpe-estimate");
    }
    require_file(opt.rpe_reference);
    require_file(opt.rpe_estimate);
    const auto clock = global.clock();
    const auto ref = parse_estimator_tracks(opt.rpe_reference, clock);
    const auto est = parse_estimator_tracks(opt.rpe_estimate, clock);
    std::map<std::string, RpeScore> rpe_scores;
    if (!ref.camera_poses.empty() && !est.camera_poses.empty()) {
      rpe_scores["camera"] = rpe(ref.camera_poses, est.camera_poses, opt.rpe_delta);
    }
    for (const auto & [id, poses] : ref.object_poses) {
      if (const auto it = est.object_poses.find(id); it != est.object_poses.end()) {
        rpe_scores[fmt::format("object_{}", id)] = rpe(poses, it->second, opt.rpe_delta);
      }
    }
    write_rpe_csv(dir / "rpe.csv", rpe_scores);
    manifest["rpe"] = {
      {"reference", opt.rpe_reference}, {"estimate", opt.rpe_estimate}, {"delta", opt.rpe_delta}};
  }
  write_manifest(dir, "evaluate", manifest, global);

  for (const auto & [source, report] : reports) {
    out << fmt::format(
      "{}: instances={} ADE={:.3f} FDE={:.3f} ace_pairs={} ACE={}\n", source, report.overall.count,
      report.overall.ade, report.overall.fde, report.overall.ace_count,
      report.overall.ace ? fmt::format("{:.3f}", *report.overall.ace) : std::string("-"));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// synth

struct SynthOptions
{
  std::string profile;
  double noise_pos = 0.0;
  double noise_heading = 0.0;
  bool smooth = false;
  std::string ekf_config;
};

int cmd_synth(const SynthOptions & opt, const GlobalOptions & global, std::ostream & out)
{
  require_file(opt.profile);
  auto profile = MotionProfile::from_file(opt.profile);
  const auto clean = generate(profile);
  const fs::path dir = global.out;
  write_state_csv(dir / "clean.csv", std::vector{clean});
  json manifest{
    {"profile", opt.profile},
    {"profile_rate_hz", profile.clock.rate_hz()},
    {"noise", {{"position_std", opt.noise_pos}, {"heading_std", opt.noise_heading}}}};
  if (opt.noise_pos > 0.0 || opt.noise_heading > 0.0) {
    const auto noisy =
      corrupt(clean, {opt.noise_pos, opt.noise_heading, global.seed}, profile.clock);
    write_state_csv(dir / "noisy.csv", std::vector{noisy});
    if (opt.smooth) {
      EkfConfig config;
      if (!opt.ekf_config.empty()) {
        require_file(opt.ekf_config);
        config = EkfConfig::from_file(opt.ekf_config);
      }
      write_state_csv(dir / "smoothed.csv", std::vector{ekf_smooth(noisy, config, profile.clock)});
      manifest["ekf"] = config.to_key_values();
    }
  }
  write_manifest(dir, "synth", manifest, global);
  out << fmt::format("frames={}\n", clean.state_count());
  return 0;
}

}  // namespace

int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Trajectory prediction evaluation from estimated object states", "estpred"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--rate-hz", global.rate_hz, "Frame rate [Hz]")->capture_default_str();
  app.add_option("--horizon", global.horizon, "Prediction horizon [frames]")->capture_default_str();
  app.add_option("--min-history", global.min_history, "Minimum history [frames]")->capture_default_str();
  app.add_option("--max-history", global.max_history, "Maximum history [frames]")->capture_default_str();
  app.add_option("--max-turn-rate", global.max_turn_rate, "Turn-rate limit [rad/s]")->capture_default_str();
  app.add_option("--max-accel", global.max_accel, "Acceleration limit [m/s^2]")->capture_default_str();
  app.add_option("--seed", global.seed, "Seed for every random draw")->capture_default_str();
  app.add_option("--out", global.out, "Output directory")->capture_default_str();

  IngestOptions ingest;
  auto * ingest_cmd = app.add_subcommand("ingest", "Parse labels or estimator output into a canonical state file");
  ingest_cmd->add_option("--format", ingest.format, "kitti-gt | estimator | canonical")->required();
  ingest_cmd->add_option("--input", ingest.input, "Input file")->required();
  ingest_cmd->add_option("--motions", ingest.motions, "Estimator motion file");
  ingest_cmd->add_option("--camera-poses", ingest.camera_poses, "Camera pose file (object id 0 rows)");
  ingest_cmd->add_option("--convention", ingest.convention, "world-xy | camera-xz");
  ingest_cmd->add_option("--heading", ingest.heading, "provided | differenced");
  ingest_cmd->add_option("--types", ingest.types, "Comma-separated KITTI type whitelist");
  ingest_cmd->add_option("--source", ingest.source, "estimated | gt | gt_ekf | synthetic");
  ingest_cmd->add_option("--scale-reference", ingest.scale_reference, "State file with the reference speed profile");
  ingest_cmd->add_option("--scale-reference-object", ingest.scale_reference_object, "Object id inside the reference file");

  std::string smooth_input;
  std::string smooth_config;
  auto * smooth_cmd = app.add_subcommand("smooth", "EKF-smooth a canonical state file");
  smooth_cmd->add_option("--input", smooth_input, "Canonical state file")->required();
  smooth_cmd->add_option("--ekf-config", smooth_config, "key=value EKF configuration");

  std::vector<std::string> diagnose_inputs;
  auto * diagnose_cmd = app.add_subcommand("diagnose", "Smoothness series and roughness per source");
  diagnose_cmd->add_option("--input", diagnose_inputs, "[label=]state file, repeatable")->required();

  std::string window_input;
  std::string window_source;
  auto * window_cmd = app.add_subcommand("window", "Cut prediction instances from a state file");
  window_cmd->add_option("--input", window_input, "Canonical state file")->required();
  window_cmd->add_option("--source", window_source, "Source tag of the input");

  std::string predict_instances;
  PredictorChoice predict_choice;
  auto * predict_cmd = app.add_subcommand("predict", "Run a predictor over an instance file");
  predict_cmd->add_option("--instances", predict_instances, "Instance file")->required();
  predict_cmd->add_option("--predictor", predict_choice.name, "cv | unicycle | external")->capture_default_str();
  predict_cmd->add_option("--command", predict_choice.command, "External command with {instances} and {predictions}");

  EvaluateOptions evaluate;
  auto * evaluate_cmd = app.add_subcommand("evaluate", "Window, predict and score one or more sources");
  evaluate_cmd->add_option("--input", evaluate.inputs, "[label=]state file, repeatable");
  evaluate_cmd->add_option("--sequence", evaluate.sequence, "Sequence name for --input files")->capture_default_str();
  evaluate_cmd->add_option("--sequences-dir", evaluate.sequences_dir, "Directory of <sequence>/<source>.csv");
  evaluate_cmd->add_option("--predictor", evaluate.predictor.name, "cv | unicycle | external")->capture_default_str();
  evaluate_cmd->add_option("--command", evaluate.predictor.command, "External command; {train} lists training files");
  evaluate_cmd->add_option("--rpe-reference", evaluate.rpe_reference, "Reference pose file");
  evaluate_cmd->add_option("--rpe-estimate", evaluate.rpe_estimate, "Estimated pose file");
  evaluate_cmd->add_option("--rpe-delta", evaluate.rpe_delta, "RPE frame interval")->capture_default_str();

  SynthOptions synth;
  auto * synth_cmd = app.add_subcommand("synth", "Generate a synthetic track, optionally noisy and smoothed");
  synth_cmd->add_option("--profile", synth.profile, "Motion profile file")->required();
  synth_cmd->add_option("--noise-pos", synth.noise_pos, "Position noise std [m]");
  synth_cmd->add_option("--noise-heading", synth.noise_heading, "Heading noise std [rad]");
  synth_cmd->add_flag("--smooth", synth.smooth, "Also write the EKF-smoothed noisy track");
  synth_cmd->add_option("--ekf-config", synth.ekf_config, "key=value EKF configuration");

  std::vector<const char *> argv;
  for (const auto & a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError & e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*ingest_cmd) {
      return cmd_ingest(ingest, global, out, err);
    }
    if (*smooth_cmd) {
      return cmd_smooth(smooth_input, smooth_config, global, out);
    }
    if (*diagnose_cmd) {
      return cmd_diagnose(diagnose_inputs, global, out);
    }
    if (*window_cmd) {
      return cmd_window(window_input, window_source, global, out);
    }
    if (*predict_cmd) {
      return cmd_predict(predict_instances, predict_choice, global, out);
    }
    if (*evaluate_cmd) {
      return cmd_evaluate(evaluate, global, out);
    }
    if (*synth_cmd) {
      return cmd_synth(synth, global, out);
    }
  } catch (const Error & e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error & e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace estpred::cli
