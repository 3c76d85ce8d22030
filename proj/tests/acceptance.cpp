// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset. Exit status is nonzero if any criterion fails.

#include <omp.h>
#include <sys/wait.h>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dartscore/augment.hpp"
#include "dartscore/eval.hpp"
#include "dartscore/io.hpp"
#include "dartscore/scoring.hpp"
#include "dartscore/sim.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace dartscore;
namespace fs = std::filesystem;
using io::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const BoardSpec kSpec = default_board_spec();

fs::path work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "dartscore_acceptance";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DARTSCORE_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string capture(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  pclose(p);
  return out;
}

std::map<std::string, std::string> tree_contents(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = io::read_text(e.path());
  }
  return out;
}

KeypointSet keypoints(const std::array<Point, 4>& cal, const std::vector<Point>& darts) {
  KeypointSet k;
  for (int i = 0; i < 4; ++i) k.cal[i] = cal[i];
  k.darts = darts;
  return k;
}

// ---- 1 -----------------------------------------------------------------------

Outcome noiseless_oracle() {
  const fs::path csv = work_dir() / "c1.csv";
  const auto t0 = std::chrono::steady_clock::now();
  const int rc = run_cli("sweep --threads 1 --scenes 10000 --sigma 0 --p-miss 0 --fp-rate 0 --rho 1.0 "
                         "--seed 20240601 --out " + csv.string());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (rc != 0) return {false, "sweep exited " + std::to_string(rc)};
  const std::string text = io::read_text(csv);
  const std::string want = "\n0,0,0,10000,100,0\n";
  const bool exact = text.find(want) != std::string::npos;
  return {exact && secs < 60.0,
          std::string(exact ? "PCS 100 over 10000 scenes" : "PCS below 100: " + text) +
              fmt(", %.2f s on one thread (limit 60 s)", secs)};
}

// ---- 2 -----------------------------------------------------------------------

Outcome homography_round_trip() {
  Rng rng(2002);
  double worst_reproj = 0, worst_identity = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto src = testutil::random_quad(rng, 1000, 5000);
    const auto dst = testutil::random_quad(rng, 1000, 5000);
    const Homography h = estimate_homography(src, dst);
    for (int i = 0; i < 4; ++i) worst_reproj = std::max(worst_reproj, distance(h.apply(src[i]), dst[i]));
    const auto m = (h * invert(h)).normalized().matrix();
    const auto id = Homography::identity().normalized().matrix();
    for (int i = 0; i < 9; ++i) worst_identity = std::max(worst_identity, std::abs(m[i] - id[i]));
  }
  return {worst_reproj < 1e-6 && worst_identity < 1e-9,
          fmt("max reprojection %.3g px (< 1e-6)", worst_reproj) +
              fmt(", max |H*H^-1 - I| %.3g (< 1e-9)", worst_identity)};
}

// ---- 3 -----------------------------------------------------------------------

Outcome scoring_oracle() {
  const auto radii = oracle::radii_of(kSpec);
  Rng rng(3003);
  SceneConfig cfg;
  long compared = 0, mismatches = 0, excluded = 0;
  while (compared + excluded < 100000) {
    const Scene sc = sample_scene(rng, cfg, kSpec);
    std::vector<Point> board, image;
    for (int i = 0; i < 100; ++i) {
      const Point p{uniform(rng, -1.1, 1.1), uniform(rng, -1.1, 1.1)};
      if (oracle::boundary_distance(p, radii) < 1e-9) {
        ++excluded;
        continue;
      }
      board.push_back(p);
      image.push_back(sc.pose.apply(p));
    }
    const auto r = score_darts(keypoints(sc.cal_image, image), kSpec);
    for (std::size_t i = 0; i < board.size(); ++i) {
      ++compared;
      if (to_string(r.tokens.at(i)) != oracle::token_string(oracle::brute_force_classify(board[i], radii)))
        ++mismatches;
    }
  }
  return {mismatches == 0 && compared > 0,
          std::to_string(compared) + " points compared, " + std::to_string(excluded) +
              " boundary points excluded, " + std::to_string(mismatches) + " disagreements"};
}

// ---- 4 -----------------------------------------------------------------------

Outcome projective_invariance() {
  const auto radii = oracle::radii_of(kSpec);
  Rng rng(4004);
  SceneConfig cfg;
  int darts = 0, skipped = 0, mismatches = 0;
  for (int t = 0; t < 500; ++t) {
    const Scene sc = sample_scene(rng, cfg, kSpec);
    const Homography g = testutil::random_extra_homography(rng);
    std::vector<Point> kept, moved;
    for (std::size_t i = 0; i < sc.darts_image.size(); ++i) {
      if (oracle::boundary_distance(sc.dart_positions_board[i], radii) < 1e-6) {
        ++skipped;
        continue;
      }
      kept.push_back(sc.darts_image[i]);
      moved.push_back(g.apply(sc.darts_image[i]));
    }
    const auto before = score_darts(keypoints(sc.cal_image, kept), kSpec);
    const auto after = score_darts(keypoints(testutil::transform(g, sc.cal_image), moved), kSpec);
    darts += static_cast<int>(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i)
      if (before.tokens.at(i) != after.tokens.at(i)) ++mismatches;
    if (before.calibration_failed || after.calibration_failed) ++mismatches;
  }
  return {mismatches == 0, std::to_string(darts) + " darts over 500 scene/G pairs, " +
                               std::to_string(skipped) + " boundary darts excluded, " +
                               std::to_string(mismatches) + " mismatches"};
}

// ---- 5 -----------------------------------------------------------------------

Outcome rotation_permutation() {
  Rng rng(5005);
  const Scene sc = sample_scene(rng, {}, kSpec);
  const Homography w = board_rotate(calibrate(sc.cal_image, kSpec).h, 18.0, 1);
  const std::array<std::pair<Ring, double>, 3> beds{
      {{Ring::kSingle, (kSpec.r_bull + kSpec.r_treble_inner) / 2},
       {Ring::kDouble, (kSpec.r_double_inner + kSpec.r_double_outer) / 2},
       {Ring::kTreble, (kSpec.r_treble_inner + kSpec.r_treble_outer) / 2}}};
  int passed = 0;
  for (int s = 0; s < 20; ++s) {
    for (const auto& [ring, radius] : beds) {
      const Point dart = sc.pose.apply(radius * direction_cw(18.0 * s));
      const auto before = score_darts(keypoints(sc.cal_image, {dart}), kSpec);
      const auto after = score_darts(keypoints(sc.cal_image, {w.apply(dart)}), kSpec);
      const ScoreToken want = ScoreToken::sector_hit(ring, kSpec.sector_sequence[(s + 1) % 20]);
      if (before.tokens.at(0) == ScoreToken::sector_hit(ring, kSpec.sector_sequence[s]) &&
          after.tokens.at(0) == want)
        ++passed;
    }
  }
  return {passed == 60, std::to_string(passed) + "/60 cases"};
}

// ---- 6 -----------------------------------------------------------------------

Outcome augmentation_identities() {
  Rng rng(6006);
  double worst_disp = 0, worst_angle = 0;
  for (int t = 0; t < 500; ++t) {
    const Scene sc = sample_scene(rng, {}, kSpec);
    const Homography h_cal = calibrate(sc.cal_image, kSpec).h;
    std::array<double, 6> ones;
    ones.fill(1.0);
    const Homography w1 = perspective_warp_with_factors(h_cal, ones);
    for (const Point& p : sc.cal_image) worst_disp = std::max(worst_disp, distance(w1.apply(p), p));
    for (const Point& p : sc.darts_image) worst_disp = std::max(worst_disp, distance(w1.apply(p), p));

    const Homography w0 = perspective_warp_with_factors(h_cal, {});
    std::array<Point, 4> q;
    for (int i = 0; i < 4; ++i) q[i] = w0.apply(sc.cal_image[i]);
    double sxx = 0, sx = 0, syy = 0, sy = 0;
    for (int i = 0; i < 4; ++i) {
      const Point c = kSpec.cal_point_targets[i];
      sxx += c.x * c.x;
      sx += q[i].x * c.x;
      syy += c.y * c.y;
      sy += q[i].y * c.y;
    }
    const double ax = sx / sxx, ay = sy / syy;
    for (int i = 0; i < 4; ++i) {
      const Point u{q[i].x / ax, q[i].y / ay};
      double d = clockwise_angle_deg(u) - kSpec.cal_angles_deg[i];
      d = std::remainder(d, 360.0);
      worst_angle = std::max(worst_angle, std::abs(d));
    }
  }
  return {worst_disp < 1e-6 && worst_angle < 1e-6,
          fmt("factors 1: max displacement %.3g px (< 1e-6)", worst_disp) +
              fmt("; factors 0: max angular error %.3g deg (< 1e-6)", worst_angle)};
}

// ---- 7 -----------------------------------------------------------------------

Outcome calibration_recovery() {
  SceneConfig affine;
  affine.affine_only = true;
  Rng rng(7007);
  double worst = 0;
  for (int t = 0; t < 500; ++t) {
    const Scene sc = sample_scene(rng, affine, kSpec);
    for (int drop = 0; drop < 4; ++drop) {
      KeypointSet k = keypoints(sc.cal_image, {});
      k.cal[drop].reset();
      const auto c = complete_calibration(k);
      worst = c ? std::max(worst, distance(*c->cal[drop], sc.cal_image[drop])) : 1e300;
    }
  }

  std::string pcs_text;
  bool all_100 = true;
  for (int drop = 0; drop < 4; ++drop) {
    SweepConfig cfg;
    cfg.n_scenes = 2500;
    cfg.seed = 7100 + drop;
    cfg.scene.affine_only = true;
    cfg.noise.forced_cal_drop_mask = static_cast<std::uint8_t>(1 << drop);
    const double pcs = run_sweep(cfg, kSpec)[0].pcs;
    all_100 = all_100 && pcs == 100.0;
    pcs_text += (drop ? "," : "") + io::format_double(pcs);
  }

  int nonzero = 0, cases = 0;
  for (int mask = 0; mask < 16; ++mask) {
    if (std::popcount(static_cast<unsigned>(mask)) < 2) continue;
    SweepConfig cfg;
    cfg.seed = 7200 + mask;
    cfg.scene.affine_only = true;
    NoiseModel n;
    n.forced_cal_drop_mask = static_cast<std::uint8_t>(mask);
    for (int i = 0; i < 200; ++i) {
      const Scene sc = sweep_scene(cfg, kSpec, i);
      const auto r = score_detections(sweep_detections(cfg, n, sc, i), kSpec);
      ++cases;
      if (r.total != 0 || !r.calibration_failed) ++nonzero;
    }
  }
  return {worst < 1e-9 && all_100 && nonzero == 0,
          fmt("max completion error %.3g px (< 1e-9)", worst) + "; one-drop PCS per class " +
              pcs_text + "; " + std::to_string(cases) + " multi-drop images, " +
              std::to_string(nonzero) + " with nonzero total"};
}

// ---- 8 -----------------------------------------------------------------------

Outcome nms_equivalence() {
  Rng rng(8008);
  int mismatches = 0, kept = 0, input = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = std::uniform_int_distribution<int>(0, 200)(rng);
    std::vector<KeypointBox> boxes;
    for (int i = 0; i < n; ++i) {
      KeypointBox b;
      b.class_id = std::uniform_int_distribution<int>(0, 4)(rng);
      b.cx = uniform(rng, 0, 300);
      b.cy = uniform(rng, 0, 300);
      b.w = uniform(rng, 5, 40);
      b.h = bernoulli(rng, 0.5) ? b.w : uniform(rng, 5, 40);
      b.confidence = std::uniform_int_distribution<int>(0, 100)(rng) / 100.0;
      boxes.push_back(b);
    }
    const auto got = nms(boxes, 0.3, 0.25);
    const auto want = oracle::brute_force_nms(boxes, 0.3, 0.25);
    if (oracle::canonical(got) != oracle::canonical(want)) ++mismatches;
    kept += static_cast<int>(got.size());
    input += n;
  }
  return {mismatches == 0, "1000 sets (" + std::to_string(input) + " boxes, " + std::to_string(kept) +
                               " kept), " + std::to_string(mismatches) + " mismatching sets"};
}

// ---- 9 -----------------------------------------------------------------------

Outcome pcs_formula() {
  const std::vector<TotalPair> a{{60, 60}, {45, 45}, {26, 26}, {3, 3}};
  const std::vector<TotalPair> b{{60, 60}, {45, 45}, {25, 26}, {3, 3}};
  const bool hand_a = compute_pcs(a) == 100.0;
  const bool hand_b = compute_pcs(b) == 75.0;

  // Labels S20 + S1 = 21 against a single predicted T7 = 21.
  const Homography pose = similarity({.translate = {400, 400}, .scale = 300});
  LabelSample label;
  label.image_id = "compensating";
  for (int i = 0; i < 4; ++i) label.cal[i] = pose.apply(kSpec.cal_point_targets[i]);
  label.darts = {pose.apply(0.4 * direction_cw(0)), pose.apply(0.4 * direction_cw(18))};
  const int t7 = static_cast<int>(std::find(kSpec.sector_sequence.begin(), kSpec.sector_sequence.end(), 7) -
                                  kSpec.sector_sequence.begin());
  KeypointSet pred;
  pred.cal = label.cal;
  pred.darts = {pose.apply(0.61 * direction_cw(18.0 * t7))};
  const auto scored = score_darts(pred, kSpec);
  const auto ev = evaluate_sample(label, pred, scored, kSpec);
  const bool compensating = scored.total == 21 && ev.label_total == 21 && ev.correct &&
                            summarize({ev}).pcs == 100.0;

  const fs::path fixture = FIXTURE_DIR;
  const fs::path out = work_dir() / "c9";
  const int rc = run_cli("evaluate --labels " + (fixture / "labels.jsonl").string() + " --detections " +
                         (fixture / "detections").string() + " --out " + out.string());
  double ours = -1, ref = -1;
  if (rc == 0) ours = json::parse(io::read_text(out / "report.json"))["pcs"].get<double>();
  const std::string ref_out = capture(std::string(PYTHON_EXECUTABLE) + " " + REFERENCE_SCRIPT +
                                      " --labels " + (fixture / "labels.jsonl").string() +
                                      " --detections " + (fixture / "detections").string());
  try {
    ref = std::stod(ref_out);
  } catch (const std::exception&) {
  }
  const bool fixture_ok = rc == 0 && ref >= 0 && std::abs(ours - ref) <= 0.1;
  return {hand_a && hand_b && compensating && fixture_ok,
          std::string("hand cases ") + (hand_a && hand_b && compensating ? "exact" : "WRONG") +
              "; fixture PCS " + io::format_double(ours) + " vs reference " + io::format_double(ref) +
              " (tolerance 0.1)"};
}

// ---- 10 ----------------------------------------------------------------------

Outcome noise_monotonicity() {
  SweepConfig cfg;
  cfg.n_scenes = 10000;
  cfg.seed = 10010;
  cfg.sigma_px = {0, 1, 2, 4, 8};
  cfg.scene.image_size = 800;
  const auto rows = run_sweep(cfg, kSpec);
  std::string detail = "PCS";
  bool ok = true;
  int violations = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    detail += " " + io::format_double(rows[i].pcs);
    if (i == 0) continue;
    const double rise = rows[i].pcs - rows[i - 1].pcs;
    if (rise > 0) {
      ++violations;
      const double ci = 1.96 * std::hypot(rows[i].pcs_stderr, rows[i - 1].pcs_stderr);
      if (rise > ci) ok = false;
    }
  }
  return {ok, detail + " at sigma 0,1,2,4,8; " + std::to_string(violations) +
                  " increases, all within the 95% interval: " + (ok ? "yes" : "no")};
}

// ---- 11 ----------------------------------------------------------------------

Outcome determinism() {
  const fs::path d = work_dir() / "c11";
  fs::create_directories(d);
  std::vector<std::string> failures;
  auto expect = [&](bool cond, const std::string& what) {
    if (!cond) failures.push_back(what);
  };

  const std::string sim = " simulate --scenes 300 --sigma 2 --p-miss 0.1 --fp-rate 0.5 --cal-fp --seed 77 --out ";
  expect(run_cli("--threads 1" + sim + (d / "sim1").string()) == 0, "simulate t1");
  expect(run_cli("--threads 8" + sim + (d / "sim8").string()) == 0, "simulate t8");
  expect(run_cli("--threads 3" + sim + (d / "sim3").string()) == 0, "simulate t3");
  const auto sim1 = tree_contents(d / "sim1");
  expect(sim1.size() == 301, "simulate file count");
  expect(sim1 == tree_contents(d / "sim8"), "simulate 1 vs 8 threads");
  expect(sim1 == tree_contents(d / "sim3"), "simulate 1 vs 3 threads");

  const std::string sweep = " sweep --scenes 1500 --sigma 0,2,4 --p-miss 0,0.1 --fp-rate 0.3 --seed 78 ";
  expect(run_cli("--threads 1" + sweep + "--out " + (d / "s1.csv").string() + " --plot " +
                 (d / "s1.svg").string()) == 0, "sweep t1");
  expect(run_cli("--threads 8" + sweep + "--out " + (d / "s8.csv").string() + " --plot " +
                 (d / "s8.svg").string()) == 0, "sweep t8");
  expect(run_cli("--threads 8" + sweep + "--out " + (d / "s8b.csv").string()) == 0, "sweep t8 again");
  expect(io::read_text(d / "s1.csv") == io::read_text(d / "s8.csv"), "sweep csv 1 vs 8 threads");
  expect(io::read_text(d / "s8.csv") == io::read_text(d / "s8b.csv"), "sweep csv rerun");
  expect(io::read_text(d / "s1.svg") == io::read_text(d / "s8.svg"), "sweep svg 1 vs 8 threads");

  const std::string aug = " augment --labels " + (d / "sim1" / "labels.jsonl").string() +
                          " --ops flip,rot18,smallrot,warp,jitter --probability 0.6 --seed 79 --out ";
  expect(run_cli("--threads 1" + aug + (d / "a1.jsonl").string()) == 0, "augment t1");
  expect(run_cli("--threads 8" + aug + (d / "a8.jsonl").string()) == 0, "augment t8");
  expect(io::read_text(d / "a1.jsonl") == io::read_text(d / "a8.jsonl"), "augment 1 vs 8 threads");

  const std::string score = " score --detections " + (d / "sim1" / "detections").string() + " --out ";
  expect(run_cli("--threads 1" + score + (d / "sc1").string()) == 0, "score t1");
  expect(run_cli("--threads 8" + score + (d / "sc8").string()) == 0, "score t8");
  expect(tree_contents(d / "sc1") == tree_contents(d / "sc8"), "score 1 vs 8 threads");

  SweepConfig cfg;
  cfg.n_scenes = 800;
  cfg.seed = 80;
  cfg.sigma_px = {1, 3};
  cfg.fp_rate = {0, 0.7};
  const auto serial = run_sweep_serial(cfg, kSpec);
  for (int threads : {1, 2, 8}) {
    omp_set_num_threads(threads);
    expect(run_sweep(cfg, kSpec) == serial, "library sweep with " + std::to_string(threads) + " threads");
  }

  std::string detail = "simulate/sweep/augment/score byte-identical across 1, 3 and 8 threads";
  if (!failures.empty()) {
    detail = "differences:";
    for (const auto& f : failures) detail += " [" + f + "]";
  }
  return {failures.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"noiseless oracle", noiseless_oracle},
      {"homography round trip", homography_round_trip},
      {"scoring oracle equivalence", scoring_oracle},
      {"projective invariance", projective_invariance},
      {"rotation permutation", rotation_permutation},
      {"augmentation identities", augmentation_identities},
      {"calibration recovery", calibration_recovery},
      {"NMS equivalence", nms_equivalence},
      {"PCS formula", pcs_formula},
      {"noise monotonicity", noise_monotonicity},
      {"determinism", determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << ". " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
