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

// Acceptance suite. Prints one PASS/FAIL/SKIP line per criterion and exits
// non-zero when any criterion fails. Every tolerance is a named constant below.

#include "cli.hpp"
#include "estpred/diagnostics.hpp"
#include "estpred/error.hpp"
#include "estpred/geom.hpp"
#include "estpred/ingest.hpp"
#include "estpred/metrics.hpp"
#include "estpred/predictors.hpp"
#include "estpred/smoothing.hpp"
#include "estpred/synth.hpp"
#include "estpred/windowing.hpp"
#include "test_support.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace estpred::acceptance
{
namespace
{

namespace fs = std::filesystem;
using test::uniform;
using Clock = std::chrono::steady_clock;

// Pinned tolerances and budgets.
constexpr double kDisplacementTol = 1e-12;
constexpr double kRpeTol = 1e-9;
constexpr double kChainTol = 1e-9;
constexpr double kZeroNoiseTol = 1e-9;
constexpr double kClampSlack = 1e-9;
constexpr double kRoundTripTol = 1e-9;
constexpr double kMetricBudgetSeconds = 10.0;
constexpr double kNoiseBudgetSeconds = 60.0;
constexpr double kHeadingRoughnessReduction = 0.5;
constexpr int kMetricInstances = 1000;
constexpr int kChains = 1000;
constexpr int kClampInstances = 10000;
constexpr std::size_t kMinNoiseInstances = 200;

constexpr double kPi = std::numbers::pi;
const FrameClock kClock{};

enum class Outcome { pass, fail, skip };

struct Verdict
{
  Outcome outcome;
  std::string detail;
};

Verdict pass(std::string d) { return {Outcome::pass, std::move(d)}; }
Verdict fail(std::string d) { return {Outcome::fail, std::move(d)}; }
Verdict check(bool ok, std::string d) { return {ok ? Outcome::pass : Outcome::fail, std::move(d)}; }

double seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// 1. metric oracle equivalence

Verdict metric_oracles()
{
  const auto start = Clock::now();
  std::mt19937_64 rng(1);
  double worst_disp = 0.0;
  double worst_rpe = 0.0;
  for (int i = 0; i < kMetricInstances; ++i) {
    const int horizon = 30;
    std::vector<Eigen::Vector2d> pred, truth, next;
    for (int t = 0; t < horizon; ++t) {
      pred.emplace_back(uniform(rng, -200, 200), uniform(rng, -200, 200));
      truth.emplace_back(uniform(rng, -200, 200), uniform(rng, -200, 200));
      next.emplace_back(uniform(rng, -200, 200), uniform(rng, -200, 200));
    }
    double sum = 0.0;
    for (int t = 0; t < horizon; ++t) {
      sum += std::hypot(pred[t][0] - truth[t][0], pred[t][1] - truth[t][1]);
    }
    const double ade_ref = sum / horizon;
    const double fde_ref = std::hypot(pred[29][0] - truth[29][0], pred[29][1] - truth[29][1]);
    const double ace_ref = std::hypot(pred[29][0] - next[28][0], pred[29][1] - next[28][1]);
    worst_disp = std::max(
      {worst_disp, std::abs(ade(pred, truth) - ade_ref), std::abs(fde(pred, truth) - fde_ref),
       std::abs(ace({1, i, pred, "x"}, {1, i + 1, next, "x"}) - ace_ref)});

    // RPE over a short random trajectory pair, against 4x4 matrix algebra.
    std::vector<Eigen::Matrix4d> q, p;
    std::map<int, Pose3> qm, pm;
    for (int k = 0; k < 6; ++k) {
      q.push_back(test::random_homogeneous(rng));
      p.push_back(test::random_homogeneous(rng));
      qm.emplace(k, Pose3::from_matrix(q.back()));
      pm.emplace(k, Pose3::from_matrix(p.back()));
    }
    double st = 0.0, sr = 0.0;
    for (int k = 0; k + 1 < 6; ++k) {
      const Eigen::Matrix4d e = test::rigid_inverse(test::rigid_inverse(q[k]) * q[k + 1]) *
                                (test::rigid_inverse(p[k]) * p[k + 1]);
      const double c = std::clamp((e.topLeftCorner<3, 3>().trace() - 1.0) / 2.0, -1.0, 1.0);
      st += e.topRightCorner<3, 1>().squaredNorm();
      sr += std::pow(std::acos(c) * 180.0 / kPi, 2);
    }
    const auto got = rpe(qm, pm, 1);
    worst_rpe = std::max(
      {worst_rpe, std::abs(got.rpe_t_rmse - std::sqrt(st / 5)),
       std::abs(got.rpe_r_rmse - std::sqrt(sr / 5))});
  }
  const double elapsed = seconds_since(start);
  return check(
    worst_disp <= kDisplacementTol && worst_rpe <= kRpeTol && elapsed < kMetricBudgetSeconds,
    fmt::format(
      "{} instances, max |disp - oracle| = {:.3g} (tol {:g}), max |rpe - oracle| = {:.3g} (tol {:g}), "
      "{:.2f} s (budget {:g} s)",
      kMetricInstances, worst_disp, kDisplacementTol, worst_rpe, kRpeTol, elapsed,
      kMetricBudgetSeconds));
}

// ---------------------------------------------------------------------------
// 2. pose recovery consistency

Verdict chain_consistency()
{
  std::mt19937_64 rng(2);
  double worst = 0.0;
  for (int c = 0; c < kChains; ++c) {
    const int length = std::uniform_int_distribution<int>(1, 30)(rng);
    std::vector<Motion3> motions;
    for (int i = 0; i < length; ++i) {
      motions.push_back(Motion3{Pose3::from_matrix(test::random_homogeneous(rng, 2.0))});
    }
    const auto poses = recover_track(motions, Pose3::from_matrix(test::random_homogeneous(rng)));
    if (poses.size() != motions.size() + 1) {
      return fail(fmt::format("chain {}: {} poses for {} motions", c, poses.size(), motions.size()));
    }
    for (std::size_t k = 1; k < poses.size(); ++k) {
      const Eigen::Matrix4d h = poses[k].matrix() * test::rigid_inverse(poses[k - 1].matrix());
      worst = std::max(worst, (h - motions[k - 1].transform.matrix()).cwiseAbs().maxCoeff());
    }
  }
  return check(
    worst <= kChainTol,
    fmt::format("{} chains, max |H_rederived - H| = {:.3g} (tol {:g})", kChains, worst, kChainTol));
}

// ---------------------------------------------------------------------------
// 3. counting law

Verdict counting_law()
{
  const std::vector<int> lengths{31, 32, 40, 100};
  const std::vector<std::size_t> expected{0, 1, 9, 69};
  std::vector<AgentState2> states;
  int frame = 0;
  std::vector<std::size_t> got, pairs;
  for (int n : lengths) {
    const Track one = test::straight_track(1, n, 5.0, 0.0, frame);
    const auto inst = make_instances(one, WindowSpec{});
    got.push_back(inst.size());
    pairs.push_back(consecutive_pair_count(inst));
    for (const auto & s : one.flattened()) {
      states.push_back(s);
    }
    frame += n + 3;
  }
  bool ok = got == expected;
  for (std::size_t i = 0; i < got.size(); ++i) {
    ok = ok && pairs[i] == (got[i] == 0 ? 0 : got[i] - 1);
  }
  // Same law with all four segments in one track.
  const auto all = make_instances(Track::from_states(1, SourceTag::synthetic, states), WindowSpec{});
  ok = ok && all.size() == 79 && consecutive_pair_count(all) == 79 - 3;
  return check(
    ok, fmt::format(
          "lengths {{31,32,40,100}} -> instances {{{}}} pairs {{{}}}; combined track {} instances, {} pairs",
          fmt::join(got, ","), fmt::join(pairs, ","), all.size(), consecutive_pair_count(all)));
}

// ---------------------------------------------------------------------------
// 4. zero-noise sanity

Verdict zero_noise()
{
  std::mt19937_64 rng(4);
  double worst = 0.0;
  std::size_t instances = 0;
  for (int trial = 0; trial < 20; ++trial) {
    MotionProfile profile;
    profile.x = uniform(rng, -100, 100);
    profile.y = uniform(rng, -100, 100);
    profile.heading = uniform(rng, -kPi, kPi);
    profile.speed = uniform(rng, 0.5, 20.0);
    profile.schedule = {{4.0, 0.0, 0.0}};
    const Track track = generate(profile);
    const auto inst = make_instances(track, WindowSpec{});
    std::vector<PredictedTrajectory> preds;
    for (const auto & i : inst) {
      preds.push_back(predict_constant_velocity(i, kClock, 30));
    }
    for (const auto & s : score_instances(inst, preds)) {
      worst = std::max({worst, s.ade, s.fde, s.ace.value_or(0.0)});
    }
    instances += inst.size();
  }
  return check(
    worst <= kZeroNoiseTol,
    fmt::format("{} instances, max(ADE, FDE, ACE) = {:.3g} (tol {:g})", instances, worst, kZeroNoiseTol));
}

// ---------------------------------------------------------------------------
// 5. clamp compliance

Verdict clamp_compliance()
{
  std::mt19937_64 rng(5);
  const ControlLimits limits;
  double worst_turn = 0.0;
  double worst_accel = 0.0;
  for (int n = 0; n < kClampInstances; ++n) {
    PredictionInstance inst;
    inst.object_id = 1;
    const int history = std::uniform_int_distribution<int>(1, 6)(rng);
    double x = 0, y = 0, h = uniform(rng, -kPi, kPi), v = uniform(rng, 0, 30);
    for (int i = 0; i < history; ++i) {
      inst.history.push_back({i, x, y, normalize_angle(h), v});
      x += uniform(rng, -2, 2);
      y += uniform(rng, -2, 2);
      h += uniform(rng, -1.0, 1.0);
      v = std::max(0.0, v + uniform(rng, -3, 3));
    }
    inst.anchor = {history, x, y, normalize_angle(h), v};
    inst.anchor_frame = history;
    std::vector<Control> controls;
    if (n % 2 == 0) {
      controls.assign(30, clamp(fit_constant_controls(inst, kClock), limits));
    } else {
      for (int k = 0; k < 30; ++k) {
        controls.push_back({uniform(rng, -30, 30), uniform(rng, -6, 6)});
      }
    }
    AgentState2 prev = inst.anchor;
    for (const auto & s : rollout_unicycle(inst.anchor, controls, limits, kClock)) {
      worst_turn = std::max(worst_turn, std::abs(normalize_angle(s.heading - prev.heading)) / kClock.dt());
      worst_accel = std::max(worst_accel, std::abs(s.speed - prev.speed) / kClock.dt());
      prev = s;
    }
  }
  return check(
    worst_turn <= limits.max_turn_rate + kClampSlack && worst_accel <= limits.max_accel + kClampSlack,
    fmt::format(
      "{} instances, max |dheading|/dt = {:.12f} rad/s (limit 0.7), max |dspeed|/dt = {:.12f} m/s^2 "
      "(limit 4.0)",
      kClampInstances, worst_turn, worst_accel));
}

// ---------------------------------------------------------------------------
// 6. noise degradation

std::vector<Track> noise_scenes()
{
  std::vector<Track> scenes;
  std::mt19937_64 rng(6);
  for (int id = 1; id <= 4; ++id) {
    MotionProfile p;
    p.object_id = id;
    p.heading = uniform(rng, -kPi, kPi);
    p.speed = uniform(rng, 6.0, 12.0);
    p.schedule = {
      {2.0, uniform(rng, -1, 1), uniform(rng, -0.3, 0.3)},
      {2.0, uniform(rng, -1, 1), uniform(rng, -0.3, 0.3)},
      {2.0, uniform(rng, -1, 1), uniform(rng, -0.3, 0.3)}};
    scenes.push_back(generate(p));
  }
  return scenes;
}

struct MeanScores
{
  double ade = 0.0;
  double fde = 0.0;
  double ace = 0.0;
  std::size_t count = 0;
};

MeanScores score_tracks(const std::vector<Track> & tracks)
{
  std::map<std::string, std::vector<InstanceScore>> by_seq;
  for (const auto & t : tracks) {
    const auto inst = make_instances(t, WindowSpec{});
    std::vector<PredictedTrajectory> preds;
    for (const auto & i : inst) {
      preds.push_back(predict_constant_velocity(i, kClock, 30));
    }
    auto scores = score_instances(inst, preds);
    auto & dst = by_seq["synthetic"];
    dst.insert(dst.end(), scores.begin(), scores.end());
  }
  const auto report = aggregate(by_seq);
  return {report.overall.ade, report.overall.fde, report.overall.ace.value_or(0.0), report.overall.count};
}

Verdict noise_degradation()
{
  const auto start = Clock::now();
  const auto scenes = noise_scenes();
  std::vector<MeanScores> levels;
  const std::vector<double> sigmas{0.0, 0.05, 0.2};
  for (double sigma : sigmas) {
    std::vector<Track> noisy;
    std::uint64_t seed = 600;
    for (const auto & t : scenes) {
      noisy.push_back(corrupt(t, {sigma, 0.0, seed++}, kClock));
    }
    // Truth comes from the same (noisy) source as the predictor input.
    levels.push_back(score_tracks(noisy));
  }
  const double elapsed = seconds_since(start);
  bool ok = elapsed < kNoiseBudgetSeconds;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    ok = ok && levels[i].count >= kMinNoiseInstances;
    if (i > 0) {
      ok = ok && levels[i].ade > levels[i - 1].ade && levels[i].fde > levels[i - 1].fde &&
           levels[i].ace > levels[i - 1].ace;
    }
  }
  std::string detail;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    detail += fmt::format(
      "sigma={:g}: n={} ADE={:.4f} FDE={:.4f} ACE={:.4f}; ", sigmas[i], levels[i].count,
      levels[i].ade, levels[i].fde, levels[i].ace);
  }
  detail += fmt::format("{:.2f} s (budget {:g} s)", elapsed, kNoiseBudgetSeconds);
  return check(ok, detail);
}

// ---------------------------------------------------------------------------
// 7. smoothing benefit

Verdict smoothing_benefit()
{
  const auto scenes = noise_scenes();
  std::vector<Track> raw, smoothed;
  std::uint64_t seed = 700;
  std::vector<SmoothnessReport> raw_reports, smooth_reports;
  for (const auto & t : scenes) {
    raw.push_back(corrupt(t, {0.2, 0.0, seed++}, kClock));
    smoothed.push_back(ekf_smooth(raw.back(), EkfConfig{}, kClock));
    for (const auto & r : smoothness(raw.back())) {
      raw_reports.push_back(r);
    }
    for (const auto & r : smoothness(smoothed.back())) {
      smooth_reports.push_back(r);
    }
  }
  const double raw_rough = summarize(raw_reports).heading.value();
  const double smooth_rough = summarize(smooth_reports).heading.value();
  const double reduction = 1.0 - smooth_rough / raw_rough;
  const auto raw_scores = score_tracks(raw);
  const auto smooth_scores = score_tracks(smoothed);
  return check(
    reduction >= kHeadingRoughnessReduction && smooth_scores.ace < raw_scores.ace,
    fmt::format(
      "heading roughness raw {:.4f} -> smoothed {:.4f} rad ({:.1f}% reduction, need >= {:g}%); "
      "CV ACE raw {:.4f} -> smoothed {:.4f} m",
      raw_rough, smooth_rough, 100 * reduction, 100 * kHeadingRoughnessReduction, raw_scores.ace,
      smooth_scores.ace));
}

// ---------------------------------------------------------------------------
// 8. dataset-dependent eligibility counts

Verdict kitti_sequence_00()
{
  const char * path = std::getenv("ESTPRED_KITTI_LABEL_00");
  if (path == nullptr || !fs::exists(path)) {
    return {Outcome::skip, "set ESTPRED_KITTI_LABEL_00 to the KITTI tracking label file 0000.txt"};
  }
  std::set<std::string> types{"Car", "Van", "Truck", "Pedestrian"};
  if (const char * env = std::getenv("ESTPRED_KITTI_TYPES")) {
    types.clear();
    std::stringstream ss(env);
    for (std::string t; std::getline(ss, t, ',');) {
      types.insert(t);
    }
  }
  const auto records = parse_kitti_tracking_labels(path, types);
  std::map<int, Pose3> cameras;
  for (const auto & [id, list] : records) {
    for (const auto & r : list) {
      cameras.emplace(r.frame, Pose3{});
    }
  }
  std::size_t objects = 0;
  std::size_t instances = 0;
  for (const auto & [id, list] : records) {
    const Track t = to_world_track(id, list, cameras, AxisConvention::camera_xz, kClock);
    const auto inst = make_instances(t, WindowSpec{});
    objects += inst.empty() ? 0 : 1;
    instances += inst.size();
  }
  return check(
    objects == 2 && instances == 144,
    fmt::format(
      "eligible objects {} (expected 2), testing instances {} (expected 144); type filter {{{}}}, "
      "DontCare and id -1 rows dropped, no visibility filter",
      objects, instances, fmt::join(types, ",")));
}

// ---------------------------------------------------------------------------
// 9. round trip and determinism

Verdict round_trip_and_determinism()
{
  test::TempDir dir;
  std::mt19937_64 rng(9);
  double worst = 0.0;

  // Canonical state file.
  std::vector<Track> tracks;
  for (int id = 1; id <= 3; ++id) {
    std::vector<AgentState2> states;
    for (int f = 0; f < 80; ++f) {
      states.push_back(
        {f + (f >= 40 ? 7 : 0), uniform(rng, -1e4, 1e4), uniform(rng, -1e4, 1e4),
         uniform(rng, -kPi, kPi), uniform(rng, 0, 50)});
    }
    tracks.push_back(Track::from_states(id, SourceTag::gt, states));
  }
  write_state_csv(dir / "states.csv", tracks);
  const auto back = read_state_csv(dir / "states.csv", SourceTag::gt);
  bool frames_equal = back.size() == tracks.size();
  for (std::size_t t = 0; frames_equal && t < tracks.size(); ++t) {
    const auto a = tracks[t].flattened();
    const auto b = back[t].flattened();
    frames_equal = a.size() == b.size() && back[t].segments.size() == tracks[t].segments.size();
    for (std::size_t i = 0; frames_equal && i < a.size(); ++i) {
      frames_equal = a[i].frame == b[i].frame;
      worst = std::max(
        {worst, std::abs(a[i].x - b[i].x), std::abs(a[i].y - b[i].y),
         std::abs(a[i].heading - b[i].heading), std::abs(a[i].speed - b[i].speed)});
    }
  }

  // Instance and prediction exchange files.
  std::vector<PredictionInstance> inst;
  for (const auto & t : tracks) {
    const auto made = make_instances(t, WindowSpec{});
    inst.insert(inst.end(), made.begin(), made.end());
  }
  write_instances_csv(dir / "instances.csv", inst);
  const auto inst_back = read_instances_csv(dir / "instances.csv", SourceTag::gt);
  frames_equal = frames_equal && inst_back.size() == inst.size();
  for (std::size_t i = 0; frames_equal && i < inst.size(); ++i) {
    frames_equal = inst_back[i].anchor_frame == inst[i].anchor_frame &&
                   inst_back[i].history.size() == inst[i].history.size();
    for (std::size_t k = 0; frames_equal && k < inst[i].future_truth.size(); ++k) {
      worst = std::max(
        worst, (inst_back[i].future_truth[k].position() - inst[i].future_truth[k].position())
                 .cwiseAbs()
                 .maxCoeff());
    }
  }
  std::vector<PredictedTrajectory> preds;
  for (const auto & i : inst) {
    preds.push_back(predict_unicycle(i, FittedConstant{}, ControlLimits{}, kClock, 30));
  }
  write_predictions_csv(dir / "predictions.csv", preds);
  const auto preds_back = read_predictions_csv(dir / "predictions.csv", inst, 30);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    for (std::size_t k = 0; k < preds[i].points.size(); ++k) {
      worst = std::max(worst, (preds_back[i].points[k] - preds[i].points[k]).cwiseAbs().maxCoeff());
    }
  }

  // Pose file.
  SceneBundle bundle;
  for (int k = 0; k < 30; ++k) {
    bundle.camera_poses.emplace(k, Pose3::from_matrix(test::random_homogeneous(rng, 100.0)));
    bundle.object_poses[5].emplace(k, Pose3::from_matrix(test::random_homogeneous(rng, 100.0)));
  }
  write_pose_file(dir / "poses.txt", bundle);
  const auto bundle_back = parse_estimator_tracks(dir / "poses.txt", kClock);
  for (int k = 0; k < 30; ++k) {
    worst = std::max(
      {worst,
       (bundle_back.camera_poses.at(k).matrix() - bundle.camera_poses.at(k).matrix()).cwiseAbs().maxCoeff(),
       (bundle_back.object_poses.at(5).at(k).matrix() - bundle.object_poses.at(5).at(k).matrix())
         .cwiseAbs()
         .maxCoeff()});
  }

  // Determinism: the same command line (hence the same manifest) run twice.
  std::vector<Track> noisy;
  std::uint64_t seed = 900;
  for (const auto & t : noise_scenes()) {
    noisy.push_back(corrupt(t, {0.1, 0.02, seed++}, kClock));
  }
  write_state_csv(dir / "noisy.csv", noisy);
  const std::vector<std::string> args{
    "estpred", "evaluate", "--input", "estimated=" + (dir / "noisy.csv").string(), "--input",
    "gt=" + (dir / "states.csv").string(), "--predictor", "unicycle", "--seed", "3", "--out",
    (dir / "run").string()};
  std::ostringstream sink;
  std::map<std::string, std::string> first;
  bool identical = cli::run(args, sink, sink) == 0;
  for (const auto & e : fs::directory_iterator(dir / "run")) {
    first[e.path().filename().string()] = test::read_file(e.path());
  }
  fs::remove_all(dir / "run");
  identical = identical && cli::run(args, sink, sink) == 0;
  for (const auto & [name, content] : first) {
    identical = identical && test::read_file(dir / "run" / name) == content;
  }
  identical = identical && first.contains("manifest.json") && first.contains("summary.csv");

  return check(
    worst <= kRoundTripTol && frames_equal && identical,
    fmt::format(
      "state/instance/prediction/pose files: max |round-trip error| = {:.3g} (tol {:g}), frames exact: {}; "
      "{} report files byte-identical across reruns: {}",
      worst, kRoundTripTol, frames_equal ? "yes" : "no", first.size(), identical ? "yes" : "no"));
}

}  // namespace
}  // namespace estpred::acceptance

int main()
{
  using namespace estpred::acceptance;
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
    {"metric oracle equivalence", metric_oracles},
    {"pose recovery consistency", chain_consistency},
    {"instance counting law", counting_law},
    {"zero-noise sanity", zero_noise},
    {"clamp compliance", clamp_compliance},
    {"noise degradation", noise_degradation},
    {"smoothing benefit", smoothing_benefit},
    {"KITTI sequence 00 eligibility", kitti_sequence_00},
    {"round trip and determinism", round_trip_and_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception & e) {
      v = fail(std::string("exception: ") + e.what());
    }
    const char * tag = v.outcome == Outcome::pass ? "PASS" : v.outcome == Outcome::fail ? "FAIL" : "SKIP";
    std::cout << fmt::format("[{}] {}. {}: {}", tag, i + 1, criteria[i].first, v.detail) << std::endl;
    failures += v.outcome == Outcome::fail ? 1 : 0;
  }
  std::cout << fmt::format("{} of {} criteria failed", failures, criteria.size()) << std::endl;
  return failures == 0 ? 0 : 1;
}
