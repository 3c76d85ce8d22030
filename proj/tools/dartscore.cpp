// dartscore command-line interface.
//
// Exit codes: 0 success, 1 validation failure, 2 usage error.

#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dartscore/augment.hpp"
#include "dartscore/board.hpp"
#include "dartscore/detection.hpp"
#include "dartscore/errors.hpp"
#include "dartscore/eval.hpp"
#include "dartscore/io.hpp"
#include "dartscore/raster.hpp"
#include "dartscore/scoring.hpp"
#include "dartscore/sim.hpp"
#include "dartscore/svg.hpp"

namespace fs = std::filesystem;
using namespace dartscore;
using io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitUsage = 2;

// Thrown for bad flag combinations detected after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config_path;
  std::string board_spec_path;
  int threads = 0;
};

struct Options {
  // shared
  std::string labels, detections, out, out_dir, images, image_out;
  bool lenient = false;
  bool apply_crop = false;
  int input_size = 800;
  double box_fraction = kDefaultBoxFraction;
  double iou = kDefaultIouThreshold;
  double conf = kDefaultConfThreshold;
  int max_darts = kDefaultMaxDarts;
  double match_threshold = kDefaultMatchThreshold;
  // augment
  std::string ops;
  double rho = kDefaultRho;
  double probability = 0.5;
  double overall_probability = 1.0;
  std::uint64_t seed = 0;
  // simulate / sweep
  int scenes = 1000;
  std::vector<double> sigma{0.0}, p_miss{0.0}, fp_rate{0.0};
  std::string plot;
  double scene_rho = 1.0;
  bool affine = false;
  bool cal_fp = false;
  int drop_cal_mask = 0;
};

struct Loaded {
  io::RunConfig config;
  BoardSpec spec;
};

Loaded load_common(const Common& c) {
  Loaded l;
  if (!c.config_path.empty()) l.config = io::load_run_config(c.config_path);
  std::string spec_path = c.board_spec_path;
  if (spec_path.empty() && l.config.board_spec) spec_path = *l.config.board_spec;
  l.spec = spec_path.empty() ? default_board_spec() : io::load_board_spec(spec_path);
  if (c.threads > 0) omp_set_num_threads(c.threads);
  return l;
}

// Fills option values that were not given on the command line from the
// run config.
void merge_config(const io::RunConfig& rc, CLI::App* sub, Options& o) {
  auto unset = [&](const char* name) {
    auto* opt = sub->get_option_no_throw(name);
    return opt == nullptr || opt->count() == 0;
  };
  if (unset("--input-size")) o.input_size = rc.input_size;
  if (unset("--box-fraction")) o.box_fraction = rc.box_fraction;
  if (unset("--iou")) o.iou = rc.iou_threshold;
  if (unset("--conf")) o.conf = rc.conf_threshold;
  if (unset("--max-darts")) o.max_darts = rc.max_darts;
  if (unset("--seed") && rc.seed) o.seed = *rc.seed;
  if (unset("--probability")) o.probability = rc.augment.probability;
  if (unset("--overall-probability")) o.overall_probability = rc.augment.overall_probability;
  if (unset("--sigma")) o.sigma = {rc.noise.sigma_px};
  if (unset("--p-miss")) o.p_miss = {rc.noise.p_miss};
  if (unset("--fp-rate")) o.fp_rate = {rc.noise.fp_rate};
  if (unset("--cal-fp")) o.cal_fp = rc.noise.cal_false_positives;
}

bool seed_given(CLI::App* sub, const io::RunConfig& rc) {
  return sub->get_option("--seed")->count() > 0 || rc.seed.has_value();
}

PostprocessParams postprocess_params(const Options& o) {
  return {o.iou, o.conf, o.max_darts};
}

std::vector<fs::path> detection_inputs(const std::string& path) {
  if (fs::is_directory(path)) return io::list_json_files(path);
  return {fs::path(path)};
}

std::string stem_of(const std::string& image) {
  const std::string s = fs::path(image).stem().string();
  return s.empty() ? image : s;
}

// ---- score -----------------------------------------------------------------

int cmd_score(const Common& c, CLI::App* sub, Options o) {
  const Loaded l = load_common(c);
  merge_config(l.config, sub, o);
  std::vector<DetectionSet> sets;
  int failures = 0;
  for (const auto& path : detection_inputs(o.detections)) {
    try {
      sets.push_back(io::load_detection_set(path));
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      ++failures;
    }
  }
  if (failures > 0 && !o.lenient) return kExitInvalid;

  const auto results = score_batch(sets, l.spec, postprocess_params(o));
  fs::create_directories(o.out);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto j = io::score_result_to_json(sets[i].image_id, results[i]);
    io::write_text_atomic(fs::path(o.out) / (stem_of(sets[i].image_id) + ".json"),
                          j.dump(2) + '\n');
  }
  std::cout << "scored " << sets.size() << " image(s)";
  if (failures) std::cout << ", skipped " << failures << " invalid file(s)";
  std::cout << '\n';
  return kExitOk;
}

// ---- evaluate --------------------------------------------------------------

int cmd_evaluate(const Common& c, CLI::App* sub, Options o) {
  const Loaded l = load_common(c);
  merge_config(l.config, sub, o);
  auto labels = io::read_annotations(o.labels);
  std::map<std::string, DetectionSet> by_image;
  int failures = 0;
  for (const auto& path : detection_inputs(o.detections)) {
    try {
      auto d = io::load_detection_set(path);
      by_image[d.image_id] = std::move(d);
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      ++failures;
    }
  }
  if (failures > 0 && !o.lenient) return kExitInvalid;

  std::vector<std::string> missing;
  for (const auto& r : labels) {
    if (!by_image.count(r.image)) missing.push_back(r.image);
  }
  if (!missing.empty()) {
    std::cerr << "error: MissingDetections: " << missing.size()
              << " labeled image(s) have no detection file:\n";
    for (const auto& m : missing) std::cerr << "  " << m << '\n';
    return kExitInvalid;
  }
  if (labels.empty()) {
    std::cerr << "error: no labeled samples\n";
    return kExitInvalid;
  }

  std::vector<SampleEval> samples(labels.size());
  const auto n = static_cast<std::ptrdiff_t>(labels.size());
  const auto params = postprocess_params(o);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto record = o.apply_crop ? io::apply_crop(labels[i], o.input_size) : labels[i];
    const DetectionSet& d = by_image.at(record.image);
    const KeypointSet kp = postprocess(d, params);
    const ScoreResult pred = score_darts(kp, l.spec);
    samples[i] = evaluate_sample(io::to_label_sample(record), kp, pred, l.spec,
                                 {o.match_threshold});
  }
  const EvalReport report = summarize(std::move(samples));
  fs::create_directories(o.out);
  io::write_text_atomic(fs::path(o.out) / "report.json", io::eval_report_to_json(report).dump(2) + '\n');
  io::write_text_atomic(fs::path(o.out) / "samples.csv", io::eval_samples_csv(report));
  std::cout << "samples " << report.n_samples << "  pcs " << io::format_double(report.pcs) << '\n';
  for (int k = 1; k < kErrorClassCount; ++k) {
    if (report.error_histogram[k]) {
      std::cout << "  " << to_string(static_cast<ErrorClass>(k)) << ' '
                << report.error_histogram[k] << '\n';
    }
  }
  return kExitOk;
}

// ---- augment ---------------------------------------------------------------

int cmd_augment(const Common& c, CLI::App* sub, Options o) {
  const Loaded l = load_common(c);
  merge_config(l.config, sub, o);
  if (!seed_given(sub, l.config)) throw UsageError("augment requires --seed");
  AugmentSpec base;
  if (sub->get_option("--ops")->count() == 0 && !c.config_path.empty()) {
    base.ops = l.config.augment.ops;
  } else {
    base.ops = io::parse_augment_ops(o.ops, o.rho);
  }
  base.probability = o.probability;
  base.overall_probability = o.overall_probability;

  const auto records = io::read_annotations(o.labels);
  std::vector<io::AnnotationRecord> out(records.size());
  int failures = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    KeypointSet kp;
    kp.cal = r.cal;
    const auto completed = complete_calibration(kp);
    if (!completed) {
      std::cerr << "error: " << o.labels << ": record " << i + 1 << " (" << r.image
                << "): fewer than three calibration points\n";
      ++failures;
      out[i] = r;
      continue;
    }
    std::array<Point, 4> cal;
    for (int k = 0; k < 4; ++k) cal[k] = *completed->cal[k];

    AugmentSpec spec = base;
    spec.seed = derive_seed(o.seed, {static_cast<std::uint64_t>(i)});

    AugmentResult res;
    io::AnnotationRecord a = r;
    if (!o.images.empty()) {
      const RasterImage img = read_ppm(fs::path(o.images) / r.image);
      auto aug = apply_augment(spec, img, cal, r.darts, l.spec);
      res = std::move(aug.result);
      const fs::path dir = o.image_out.empty() ? fs::path(o.out).parent_path() : fs::path(o.image_out);
      fs::create_directories(dir.empty() ? fs::path(".") : dir);
      write_ppm((dir.empty() ? fs::path(".") : dir) / fs::path(r.image).filename(), aug.image);
    } else {
      res = apply_augment(spec, cal, r.darts, r.width, r.height, l.spec);
    }

    auto in_bounds = [&](Point p) {
      return p.x >= 0 && p.y >= 0 && p.x <= r.width && p.y <= r.height;
    };
    for (int k = 0; k < 4; ++k) {
      a.cal[k] = r.cal[k] && in_bounds(res.cal_out[k]) ? std::optional<Point>(res.cal_out[k])
                                                       : std::nullopt;
    }
    a.darts.clear();
    for (const Point& d : res.darts_out) {
      if (in_bounds(d)) a.darts.push_back(d);
    }
    if (r.scores) {
      KeypointSet rescored;
      for (int k = 0; k < 4; ++k) rescored.cal[k] = res.cal_out[k];
      rescored.darts = a.darts;
      a.scores = score_darts(rescored, l.spec).tokens;
    }
    out[i] = std::move(a);
  }
  if (failures > 0 && !o.lenient) return kExitInvalid;
  io::write_text_atomic(o.out, io::annotations_to_jsonl(out));
  std::cout << "augmented " << records.size() - failures << " record(s)\n";
  return kExitOk;
}

// ---- simulate / sweep --------------------------------------------------------

SweepConfig sweep_config(const Options& o) {
  SweepConfig s;
  s.sigma_px = o.sigma;
  s.p_miss = o.p_miss;
  s.fp_rate = o.fp_rate;
  s.n_scenes = o.scenes;
  s.seed = o.seed;
  s.scene.image_size = o.input_size;
  s.scene.rho = o.scene_rho;
  s.scene.affine_only = o.affine;
  s.scene.min_dart_separation_px = o.box_fraction * o.input_size;
  s.noise.cal_false_positives = o.cal_fp;
  s.noise.forced_cal_drop_mask = static_cast<std::uint8_t>(o.drop_cal_mask);
  s.box_fraction = o.box_fraction;
  s.postprocess = postprocess_params(o);
  s.match_threshold = o.match_threshold;
  return s;
}

void check_sweep_options(const Options& o) {
  if (o.scenes < 1) throw UsageError("--scenes must be at least 1");
  for (double v : o.sigma) if (v < 0) throw UsageError("--sigma must be non-negative");
  for (double v : o.p_miss) if (v < 0 || v > 1) throw UsageError("--p-miss must be in [0, 1]");
  for (double v : o.fp_rate) if (v < 0) throw UsageError("--fp-rate must be non-negative");
}

int cmd_simulate(const Common& c, CLI::App* sub, Options o) {
  const Loaded l = load_common(c);
  merge_config(l.config, sub, o);
  if (!seed_given(sub, l.config)) throw UsageError("simulate requires --seed");
  check_sweep_options(o);
  const SweepConfig cfg = sweep_config(o);
  NoiseModel noise = cfg.noise;
  noise.sigma_px = o.sigma.front();
  noise.p_miss = o.p_miss.front();
  noise.fp_rate = o.fp_rate.front();

  const fs::path root(o.out);
  fs::create_directories(root / "detections");
  std::vector<io::AnnotationRecord> labels(o.scenes);
  std::vector<std::string> detection_json(o.scenes);
#pragma omp parallel for schedule(dynamic, 32)
  for (int i = 0; i < o.scenes; ++i) {
    const Scene scene = sweep_scene(cfg, l.spec, i);
    DetectionSet d = sweep_detections(cfg, noise, scene, i);
    char name[32];
    std::snprintf(name, sizeof name, "scene_%05d", i);
    d.image_id = std::string(name) + ".png";
    io::AnnotationRecord r;
    r.image = d.image_id;
    r.width = r.height = scene.image_size;
    for (int k = 0; k < 4; ++k) r.cal[k] = scene.cal_image[k];
    r.darts = scene.darts_image;
    r.scores = scene.true_tokens;
    labels[i] = std::move(r);
    detection_json[i] = io::detection_set_to_json(d).dump(2) + '\n';
  }
  for (int i = 0; i < o.scenes; ++i) {
    io::write_text_atomic(root / "detections" / (stem_of(labels[i].image) + ".json"),
                          detection_json[i]);
  }
  io::write_text_atomic(root / "labels.jsonl", io::annotations_to_jsonl(labels));
  std::cout << "wrote " << o.scenes << " scene(s) to " << root.string() << '\n';
  return kExitOk;
}

int cmd_sweep(const Common& c, CLI::App* sub, Options o) {
  const Loaded l = load_common(c);
  merge_config(l.config, sub, o);
  if (!seed_given(sub, l.config)) throw UsageError("sweep requires --seed");
  check_sweep_options(o);
  const auto rows = run_sweep(sweep_config(o), l.spec);
  const std::string csv = io::sweep_csv(rows);
  if (o.out.empty() || o.out == "-") {
    std::cout << csv;
  } else {
    io::write_text_atomic(o.out, csv);
  }
  if (!o.plot.empty()) io::write_text_atomic(o.plot, svg::sweep_chart(rows));
  if (!o.out.empty() && o.out != "-") {
    for (const auto& r : rows) {
      std::cout << "sigma " << io::format_double(r.sigma_px) << "  p_miss "
                << io::format_double(r.p_miss) << "  fp " << io::format_double(r.fp_rate)
                << "  pcs " << io::format_double(r.pcs) << '\n';
    }
  }
  return kExitOk;
}

// ---- export-labels ------------------------------------------------------------

int cmd_export(const Common& c, CLI::App* sub, Options o) {
  const Loaded l = load_common(c);
  merge_config(l.config, sub, o);
  const auto records = io::read_annotations(o.labels);
  fs::create_directories(o.out);
  for (const auto& raw : records) {
    const auto r = o.apply_crop ? io::apply_crop(raw, o.input_size) : raw;
    std::vector<ClassedPoint> pts;
    for (int k = 0; k < 4; ++k) {
      if (r.cal[k]) pts.push_back({*r.cal[k], k});
    }
    for (const Point& d : r.darts) pts.push_back({d, kDartClass});
    const auto boxes = keypoints_to_boxes(pts, o.box_fraction, o.input_size);
    io::write_text_atomic(fs::path(o.out) / (stem_of(r.image) + ".txt"),
                          io::export_label_lines(boxes, o.input_size));
  }
  std::cout << "exported " << records.size() << " label file(s)\n";
  return kExitOk;
}

// ---- render -------------------------------------------------------------------

svg::Overlay overlay_from(const std::string& title, int w, int h, const KeypointSet& kp,
                          const ScoreResult& scored,
                          const std::optional<std::vector<ScoreToken>>& tokens) {
  svg::Overlay ov;
  ov.title = title;
  ov.width = w;
  ov.height = h;
  ov.calibration = scored.calibration;
  const auto completed = complete_calibration(kp);
  const KeypointSet& shown = completed ? *completed : kp;
  for (int k = 0; k < 4; ++k) {
    if (shown.cal[k]) {
      ov.cal_points.push_back({*shown.cal[k], "c" + std::to_string(k), shown.cal_recovered[k]});
    }
  }
  for (std::size_t i = 0; i < kp.darts.size(); ++i) {
    std::string label = "?";
    if (tokens && i < tokens->size()) {
      label = to_string((*tokens)[i]);
    } else if (i < scored.tokens.size()) {
      label = to_string(scored.tokens[i]);
    }
    ov.darts.push_back({kp.darts[i], label, false});
  }
  return ov;
}

int cmd_render(const Common& c, CLI::App* sub, Options o) {
  const Loaded l = load_common(c);
  merge_config(l.config, sub, o);
  if (o.labels.empty() == o.detections.empty()) {
    throw UsageError("render needs exactly one of --labels or --detections");
  }
  fs::create_directories(o.out_dir);
  int n = 0;
  if (!o.labels.empty()) {
    for (const auto& r : io::read_annotations(o.labels)) {
      KeypointSet kp;
      kp.cal = r.cal;
      kp.darts = r.darts;
      const ScoreResult scored = score_darts(kp, l.spec);
      const auto ov = overlay_from(r.image, r.width, r.height, kp, scored, r.scores);
      io::write_text_atomic(fs::path(o.out_dir) / (stem_of(r.image) + ".svg"),
                            svg::render_overlay(ov, l.spec));
      ++n;
    }
  } else {
    for (const auto& path : detection_inputs(o.detections)) {
      const DetectionSet d = io::load_detection_set(path);
      const KeypointSet kp = postprocess(d, postprocess_params(o));
      const ScoreResult scored = score_darts(kp, l.spec);
      const auto ov = overlay_from(d.image_id, d.input_size, d.input_size, kp, scored, std::nullopt);
      io::write_text_atomic(fs::path(o.out_dir) / (stem_of(d.image_id) + ".svg"),
                            svg::render_overlay(ov, l.spec));
      ++n;
    }
  }
  std::cout << "rendered " << n << " overlay(s)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dart scoring geometry, augmentation and evaluation tools"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  Options o;
  app.add_option("--config", common.config_path, "Run-config JSON file")->check(CLI::ExistingFile);
  app.add_option("--board-spec", common.board_spec_path, "Board-spec JSON file")
      ->check(CLI::ExistingFile);
  app.add_option("--threads", common.threads, "Worker threads (0 = OpenMP default)")
      ->check(CLI::NonNegativeNumber);

  auto add_post = [&](CLI::App* s) {
    s->add_option("--iou", o.iou, "NMS IoU threshold")->check(CLI::Range(0.0, 1.0));
    s->add_option("--conf", o.conf, "Confidence threshold")->check(CLI::Range(0.0, 1.0));
    s->add_option("--max-darts", o.max_darts, "Dart cap per image")->check(CLI::NonNegativeNumber);
  };

  auto* score = app.add_subcommand("score", "Score detection files");
  score->add_option("--detections", o.detections, "Detection JSON file or directory")->required();
  score->add_option("--out", o.out, "Output directory")->required();
  score->add_flag("--lenient", o.lenient, "Skip invalid files instead of failing");
  add_post(score);

  auto* evaluate = app.add_subcommand("evaluate", "Compute PCS and error analysis");
  evaluate->add_option("--labels", o.labels, "Annotation JSONL")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--detections", o.detections, "Detection directory")->required();
  evaluate->add_option("--out", o.out, "Output directory")->required();
  evaluate->add_flag("--lenient", o.lenient, "Skip invalid detection files");
  evaluate->add_flag("--apply-crop", o.apply_crop, "Map label keypoints into the input crop");
  evaluate->add_option("--input-size", o.input_size, "Detector input size")->check(CLI::PositiveNumber);
  evaluate->add_option("--match-threshold", o.match_threshold, "Dart match radius (board units)")
      ->check(CLI::PositiveNumber);
  add_post(evaluate);

  auto* augment = app.add_subcommand("augment", "Augment annotations (and PPM images)");
  augment->add_option("--labels", o.labels, "Annotation JSONL")->required()->check(CLI::ExistingFile);
  augment->add_option("--images", o.images, "Directory of PPM images")->check(CLI::ExistingDirectory);
  augment->add_option("--image-out", o.image_out, "Directory for warped images");
  augment->add_option("--ops", o.ops, "Comma-separated ops: flip,fliph,flipv,rot18,rot36,smallrot,warp,jitter");
  augment->add_option("--rho", o.rho, "Perspective warp strength")->check(CLI::NonNegativeNumber);
  augment->add_option("--probability", o.probability, "Per-op probability")->check(CLI::Range(0.0, 1.0));
  augment->add_option("--overall-probability", o.overall_probability, "Whole-pipeline probability")
      ->check(CLI::Range(0.0, 1.0));
  augment->add_option("--seed", o.seed, "Random seed");
  augment->add_option("--out", o.out, "Output JSONL")->required();
  augment->add_flag("--lenient", o.lenient, "Pass through records that cannot be calibrated");

  auto add_sim = [&](CLI::App* s) {
    s->add_option("--scenes", o.scenes, "Number of scenes");
    s->add_option("--seed", o.seed, "Random seed");
    s->add_option("--input-size", o.input_size, "Image size")->check(CLI::PositiveNumber);
    s->add_option("--box-fraction", o.box_fraction, "Keypoint box side / image size")
        ->check(CLI::Range(1e-6, 1.0));
    s->add_option("--rho", o.scene_rho, "Pose perspective strength")->check(CLI::NonNegativeNumber);
    s->add_flag("--affine", o.affine, "Affine poses only");
    s->add_flag("--cal-fp", o.cal_fp, "Spurious boxes may be calibration classes");
    s->add_option("--drop-cal", o.drop_cal_mask, "Bitmask of calibration classes to drop")
        ->check(CLI::Range(0, 15));
    s->add_option("--match-threshold", o.match_threshold, "Dart match radius (board units)")
        ->check(CLI::PositiveNumber);
    add_post(s);
  };
  auto* simulate = app.add_subcommand("simulate", "Write synthetic labels and detections");
  add_sim(simulate);
  simulate->add_option("--sigma", o.sigma, "Localization noise (px)")->expected(1);
  simulate->add_option("--p-miss", o.p_miss, "Keypoint miss probability")->expected(1);
  simulate->add_option("--fp-rate", o.fp_rate, "Expected spurious boxes per image")->expected(1);
  simulate->add_option("--out", o.out, "Output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "Monte Carlo robustness sweep");
  add_sim(sweep);
  sweep->add_option("--sigma", o.sigma, "Localization noise grid (px)")->delimiter(',');
  sweep->add_option("--p-miss", o.p_miss, "Miss probability grid")->delimiter(',');
  sweep->add_option("--fp-rate", o.fp_rate, "Spurious box rate grid")->delimiter(',');
  sweep->add_option("--out", o.out, "Output CSV ('-' for stdout)");
  sweep->add_option("--plot", o.plot, "Output SVG chart");

  auto* export_labels = app.add_subcommand("export-labels", "Write detector training labels");
  export_labels->add_option("--labels", o.labels, "Annotation JSONL")->required()->check(CLI::ExistingFile);
  export_labels->add_option("--input-size", o.input_size, "Detector input size")->check(CLI::PositiveNumber);
  export_labels->add_option("--box-fraction", o.box_fraction, "Keypoint box side / input size")
      ->check(CLI::Range(1e-6, 1.0));
  export_labels->add_flag("--apply-crop", o.apply_crop, "Crop and rescale using bbox");
  export_labels->add_option("--out", o.out, "Output directory")->required();

  auto* render = app.add_subcommand("render", "Draw SVG overlays");
  render->add_option("--labels", o.labels, "Annotation JSONL")->check(CLI::ExistingFile);
  render->add_option("--detections", o.detections, "Detection JSON file or directory");
  render->add_option("--out-dir", o.out_dir, "Output directory")->required();
  add_post(render);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*score) return cmd_score(common, score, o);
    if (*evaluate) return cmd_evaluate(common, evaluate, o);
    if (*augment) return cmd_augment(common, augment, o);
    if (*simulate) return cmd_simulate(common, simulate, o);
    if (*sweep) return cmd_sweep(common, sweep, o);
    if (*export_labels) return cmd_export(common, export_labels, o);
    if (*render) return cmd_render(common, render, o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitUsage;
}
