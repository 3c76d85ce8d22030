#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dartscore/augment.hpp"
#include "dartscore/board.hpp"
#include "dartscore/detection.hpp"
#include "dartscore/eval.hpp"
#include "dartscore/scoring.hpp"
#include "dartscore/sim.hpp"

namespace dartscore::io {

using nlohmann::json;

// ---- board spec ----------------------------------------------------------

// Flat object: r_double_bull_mm ... r_double_outer_mm, sector_sequence,
// cal_angles_deg. Missing keys fall back to the defaults.
BoardSpec board_spec_from_json(const json& j, const std::string& where = "board spec");
json board_spec_to_json(const BoardSpec& spec);
BoardSpec load_board_spec(const std::filesystem::path& path);

// ---- detections ----------------------------------------------------------

DetectionSet detection_set_from_json(const json& j, const std::string& where);
json detection_set_to_json(const DetectionSet& d);
DetectionSet load_detection_set(const std::filesystem::path& path);
// Every *.json file in `dir`, sorted by file name.
std::vector<std::filesystem::path> list_json_files(const std::filesystem::path& dir);

// "class cx cy w h" with geometry normalized by input_size.
std::string export_label_lines(const std::vector<KeypointBox>& boxes, int input_size);
std::vector<KeypointBox> parse_label_lines(const std::string& text, int input_size,
                                           const std::string& where);

// ---- annotations ---------------------------------------------------------

struct CropBox {
  double x = 0.0;
  double y = 0.0;
  double side = 0.0;
  friend bool operator==(const CropBox&, const CropBox&) = default;
};

struct AnnotationRecord {
  std::string image;
  int width = 0;
  int height = 0;
  std::optional<CropBox> bbox;
  std::array<std::optional<Point>, 4> cal{};
  std::vector<Point> darts;
  std::optional<std::vector<ScoreToken>> scores;

  friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;
};

AnnotationRecord annotation_from_json(const json& j, const std::string& where);
json annotation_to_json(const AnnotationRecord& r);
// JSON Lines; blank lines are skipped. Diagnostics carry file:line.
std::vector<AnnotationRecord> read_annotations(const std::filesystem::path& path);
std::string annotations_to_jsonl(const std::vector<AnnotationRecord>& records);

// Maps keypoints into the input_size x input_size crop described by bbox.
// Records without bbox are only rescaled when their size differs.
AnnotationRecord apply_crop(const AnnotationRecord& r, int input_size);

LabelSample to_label_sample(const AnnotationRecord& r);

// ---- scores / reports ----------------------------------------------------

json score_result_to_json(const std::string& image, const ScoreResult& r);

json eval_report_to_json(const EvalReport& report);
std::string eval_samples_csv(const EvalReport& report);

std::string sweep_csv(const std::vector<SweepRow>& rows);

// Shortest round-trip decimal representation.
std::string format_double(double v);

// ---- run config ----------------------------------------------------------

struct RunConfig {
  std::optional<std::string> board_spec;
  int input_size = 800;
  double box_fraction = kDefaultBoxFraction;
  double iou_threshold = kDefaultIouThreshold;
  double conf_threshold = kDefaultConfThreshold;
  int max_darts = kDefaultMaxDarts;
  AugmentSpec augment;
  NoiseModel noise;
  std::optional<std::uint64_t> seed;
};

RunConfig run_config_from_json(const json& j, const std::string& where = "run config");
RunConfig load_run_config(const std::filesystem::path& path);

// Comma-separated op names: flip, fliph, flipv, rot18, rot36, smallrot, warp,
// jitter. Empty string yields no ops.
std::vector<AugmentOp> parse_augment_ops(const std::string& text, double rho);

// ---- files ---------------------------------------------------------------

std::string read_text(const std::filesystem::path& path);
// Writes through a temporary file in the same directory, then renames.
void write_text_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace dartscore::io
