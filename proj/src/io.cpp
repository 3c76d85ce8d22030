#include "dartscore/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "dartscore/errors.hpp"

namespace dartscore::io {

namespace fs = std::filesystem;

namespace {

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where, "expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where, std::string("missing field '") + key + "'");
  return *it;
}

double as_number(const json& v, const std::string& where, const char* key) {
  if (!v.is_number()) throw ParseError(where, std::string("field '") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError(where, std::string("field '") + key + "' must be finite");
  return d;
}

int as_int(const json& v, const std::string& where, const char* key) {
  if (!v.is_number_integer()) {
    throw ParseError(where, std::string("field '") + key + "' must be an integer");
  }
  return v.get<int>();
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  auto it = j.find(key);
  return it == j.end() ? fallback : as_number(*it, where, key);
}

Point as_point(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ParseError(where, "expected an [x, y] pair");
  }
  const Point p{v[0].get<double>(), v[1].get<double>()};
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw ParseError(where, "non-finite coordinate");
  return p;
}

json point_json(Point p) { return json::array({p.x, p.y}); }

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

// ---- board spec ----------------------------------------------------------

BoardSpec board_spec_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where, "expected a JSON object");
  BoardDimensions d;
  d.r_double_bull_mm = number_or(j, "r_double_bull_mm", d.r_double_bull_mm, where);
  d.r_bull_mm = number_or(j, "r_bull_mm", d.r_bull_mm, where);
  d.r_treble_inner_mm = number_or(j, "r_treble_inner_mm", d.r_treble_inner_mm, where);
  d.r_treble_outer_mm = number_or(j, "r_treble_outer_mm", d.r_treble_outer_mm, where);
  d.r_double_inner_mm = number_or(j, "r_double_inner_mm", d.r_double_inner_mm, where);
  d.r_double_outer_mm = number_or(j, "r_double_outer_mm", d.r_double_outer_mm, where);
  if (auto it = j.find("sector_sequence"); it != j.end()) {
    if (!it->is_array() || it->size() != kSectors) {
      throw ParseError(where, "sector_sequence must list 20 integers");
    }
    for (int i = 0; i < kSectors; ++i) d.sector_sequence[i] = as_int((*it)[i], where, "sector_sequence");
  }
  if (auto it = j.find("cal_angles_deg"); it != j.end()) {
    if (!it->is_array() || it->size() != 4) throw ParseError(where, "cal_angles_deg must list 4 angles");
    for (int i = 0; i < 4; ++i) d.cal_angles_deg[i] = as_number((*it)[i], where, "cal_angles_deg");
  }
  try {
    return make_board_spec(d);
  } catch (const std::invalid_argument& e) {
    throw ParseError(where, e.what());
  }
}

json board_spec_to_json(const BoardSpec& s) {
  const double k = s.outer_radius_mm;
  return json{{"r_double_bull_mm", s.r_double_bull * k},
              {"r_bull_mm", s.r_bull * k},
              {"r_treble_inner_mm", s.r_treble_inner * k},
              {"r_treble_outer_mm", s.r_treble_outer * k},
              {"r_double_inner_mm", s.r_double_inner * k},
              {"r_double_outer_mm", k},
              {"sector_sequence", s.sector_sequence},
              {"cal_angles_deg", s.cal_angles_deg}};
}

BoardSpec load_board_spec(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), e.what());
  }
  return board_spec_from_json(j, path.string());
}

// ---- detections ----------------------------------------------------------

DetectionSet detection_set_from_json(const json& j, const std::string& where) {
  DetectionSet d;
  const json& image = require(j, "image", where);
  if (!image.is_string()) throw ParseError(where, "field 'image' must be a string");
  d.image_id = image.get<std::string>();
  d.input_size = as_int(require(j, "input_size", where), where, "input_size");
  const json& boxes = require(j, "boxes", where);
  if (!boxes.is_array()) throw ParseError(where, "field 'boxes' must be an array");
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const std::string w = where + ": boxes[" + std::to_string(i) + "]";
    const json& b = boxes[i];
    KeypointBox kb;
    kb.class_id = as_int(require(b, "class", w), w, "class");
    kb.cx = as_number(require(b, "cx", w), w, "cx");
    kb.cy = as_number(require(b, "cy", w), w, "cy");
    kb.w = as_number(require(b, "w", w), w, "w");
    kb.h = as_number(require(b, "h", w), w, "h");
    kb.confidence = as_number(require(b, "conf", w), w, "conf");
    d.boxes.push_back(kb);
  }
  try {
    validate(d);
  } catch (const std::invalid_argument& e) {
    throw ParseError(where, e.what());
  }
  return d;
}

json detection_set_to_json(const DetectionSet& d) {
  json boxes = json::array();
  for (const auto& b : d.boxes) {
    boxes.push_back(json{{"class", b.class_id}, {"cx", b.cx}, {"cy", b.cy},
                         {"w", b.w}, {"h", b.h}, {"conf", b.confidence}});
  }
  return json{{"image", d.image_id}, {"input_size", d.input_size}, {"boxes", boxes}};
}

DetectionSet load_detection_set(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), e.what());
  }
  return detection_set_from_json(j, path.string());
}

std::vector<fs::path> list_json_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ParseError(dir.string(), "not a directory");
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string export_label_lines(const std::vector<KeypointBox>& boxes, int input_size) {
  std::string out;
  const double s = input_size;
  for (const auto& b : boxes) {
    out += std::to_string(b.class_id) + ' ' + format_double(b.cx / s) + ' ' +
           format_double(b.cy / s) + ' ' + format_double(b.w / s) + ' ' +
           format_double(b.h / s) + '\n';
  }
  return out;
}

std::vector<KeypointBox> parse_label_lines(const std::string& text, int input_size,
                                           const std::string& where) {
  std::vector<KeypointBox> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    KeypointBox b;
    double cx, cy, w, h;
    if (!(ls >> b.class_id >> cx >> cy >> w >> h)) {
      throw ParseError(where + ":" + std::to_string(lineno), "expected 'class cx cy w h'");
    }
    b.cx = cx * input_size;
    b.cy = cy * input_size;
    b.w = w * input_size;
    b.h = h * input_size;
    try {
      validate(b);
    } catch (const std::invalid_argument& e) {
      throw ParseError(where + ":" + std::to_string(lineno), e.what());
    }
    out.push_back(b);
  }
  return out;
}

// ---- annotations ---------------------------------------------------------

AnnotationRecord annotation_from_json(const json& j, const std::string& where) {
  AnnotationRecord r;
  const json& image = require(j, "image", where);
  if (!image.is_string()) throw ParseError(where, "field 'image' must be a string");
  r.image = image.get<std::string>();
  r.width = as_int(require(j, "width", where), where, "width");
  r.height = as_int(require(j, "height", where), where, "height");
  if (r.width <= 0 || r.height <= 0) throw ParseError(where, "image size must be positive");

  if (auto it = j.find("bbox"); it != j.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != 3) throw ParseError(where, "bbox must be [x, y, side]");
    r.bbox = CropBox{as_number((*it)[0], where, "bbox"), as_number((*it)[1], where, "bbox"),
                     as_number((*it)[2], where, "bbox")};
    if (!(r.bbox->side > 0)) throw ParseError(where, "bbox side must be positive");
  }
  const json& cal = require(j, "cal", where);
  if (!cal.is_array() || cal.size() != 4) throw ParseError(where, "cal must list 4 entries");
  for (int i = 0; i < 4; ++i) {
    if (!cal[i].is_null()) r.cal[i] = as_point(cal[i], where + ": cal[" + std::to_string(i) + "]");
  }
  const json& darts = require(j, "darts", where);
  if (!darts.is_array()) throw ParseError(where, "darts must be an array");
  if (darts.size() > static_cast<std::size_t>(kDefaultMaxDarts)) {
    throw ParseError(where, "at most 3 darts per record");
  }
  for (std::size_t i = 0; i < darts.size(); ++i) {
    r.darts.push_back(as_point(darts[i], where + ": darts[" + std::to_string(i) + "]"));
  }
  if (auto it = j.find("scores"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw ParseError(where, "scores must be an array");
    std::vector<ScoreToken> tokens;
    for (const auto& s : *it) {
      if (!s.is_string()) throw ParseError(where, "score tokens must be strings");
      auto t = parse_token(s.get<std::string>());
      if (!t) throw ParseError(where, "invalid score token '" + s.get<std::string>() + "'");
      tokens.push_back(*t);
    }
    if (tokens.size() != r.darts.size()) {
      throw ParseError(where, "scores length must equal darts length");
    }
    r.scores = std::move(tokens);
  }

  auto check_bounds = [&](Point p, const std::string& field) {
    if (p.x < 0 || p.y < 0 || p.x > r.width || p.y > r.height) {
      throw ParseError(where, field + " lies outside the image");
    }
  };
  for (int i = 0; i < 4; ++i) {
    if (r.cal[i]) check_bounds(*r.cal[i], "cal[" + std::to_string(i) + "]");
  }
  for (std::size_t i = 0; i < r.darts.size(); ++i) {
    check_bounds(r.darts[i], "darts[" + std::to_string(i) + "]");
  }
  return r;
}

json annotation_to_json(const AnnotationRecord& r) {
  json cal = json::array();
  for (const auto& c : r.cal) cal.push_back(c ? point_json(*c) : json(nullptr));
  json darts = json::array();
  for (const auto& d : r.darts) darts.push_back(point_json(d));
  json j{{"image", r.image}, {"width", r.width}, {"height", r.height}};
  if (r.bbox) j["bbox"] = json::array({r.bbox->x, r.bbox->y, r.bbox->side});
  j["cal"] = cal;
  j["darts"] = darts;
  if (r.scores) {
    json s = json::array();
    for (const auto& t : *r.scores) s.push_back(to_string(t));
    j["scores"] = s;
  }
  return j;
}

std::vector<AnnotationRecord> read_annotations(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open");
  std::vector<AnnotationRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(where, e.what());
    }
    out.push_back(annotation_from_json(j, where));
  }
  return out;
}

std::string annotations_to_jsonl(const std::vector<AnnotationRecord>& records) {
  std::string out;
  for (const auto& r : records) out += annotation_to_json(r).dump() + '\n';
  return out;
}

AnnotationRecord apply_crop(const AnnotationRecord& r, int input_size) {
  AnnotationRecord out = r;
  double ox = 0, oy = 0, sx = 1, sy = 1;
  if (r.bbox) {
    ox = r.bbox->x;
    oy = r.bbox->y;
    sx = sy = input_size / r.bbox->side;
  } else {
    sx = static_cast<double>(input_size) / r.width;
    sy = static_cast<double>(input_size) / r.height;
  }
  auto map = [&](Point p) { return Point{(p.x - ox) * sx, (p.y - oy) * sy}; };
  for (auto& c : out.cal) {
    if (c) c = map(*c);
  }
  for (auto& d : out.darts) d = map(d);
  out.width = out.height = input_size;
  out.bbox.reset();
  return out;
}

LabelSample to_label_sample(const AnnotationRecord& r) {
  LabelSample s;
  s.image_id = r.image;
  s.cal = r.cal;
  s.darts = r.darts;
  s.tokens = r.scores;
  return s;
}

// ---- scores / reports ----------------------------------------------------

json score_result_to_json(const std::string& image, const ScoreResult& r) {
  json tokens = json::array();
  for (const auto& t : r.tokens) tokens.push_back(to_string(t));
  return json{{"image", image},
              {"tokens", tokens},
              {"total", r.total},
              {"calibration_failed", r.calibration_failed}};
}

json eval_report_to_json(const EvalReport& report) {
  json hist = json::object();
  for (int i = 1; i < kErrorClassCount; ++i) {
    hist[to_string(static_cast<ErrorClass>(i))] = report.error_histogram[i];
  }
  json samples = json::array();
  for (const auto& s : report.samples) {
    samples.push_back(json{{"image", s.image_id},
                           {"predicted_total", s.predicted_total},
                           {"label_total", s.label_total},
                           {"correct", s.correct},
                           {"error_class", to_string(s.error_class)}});
  }
  return json{{"n_samples", report.n_samples},
              {"pcs", report.pcs},
              {"error_histogram", hist},
              {"dart_localization",
               {{"n_matched", report.n_matched_darts},
                {"mean_px", report.mean_localization_error_px},
                {"median_px", report.median_localization_error_px}}},
              {"samples", samples}};
}

std::string eval_samples_csv(const EvalReport& report) {
  std::string out = "image,predicted_total,label_total,correct,error_class,n_pred,n_label,n_matched\n";
  for (const auto& s : report.samples) {
    out += s.image_id + ',' + std::to_string(s.predicted_total) + ',' +
           std::to_string(s.label_total) + ',' + (s.correct ? "1" : "0") + ',' +
           to_string(s.error_class) + ',' + std::to_string(s.n_pred) + ',' +
           std::to_string(s.n_label) + ',' + std::to_string(s.n_matched) + '\n';
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "sigma_px,p_miss,fp_rate,n_scenes,pcs,mean_loc_err_px\n";
  for (const auto& r : rows) {
    out += format_double(r.sigma_px) + ',' + format_double(r.p_miss) + ',' +
           format_double(r.fp_rate) + ',' + std::to_string(r.n_scenes) + ',' +
           format_double(r.pcs) + ',' + format_double(r.mean_loc_err_px) + '\n';
  }
  return out;
}

// ---- run config ----------------------------------------------------------

std::vector<AugmentOp> parse_augment_ops(const std::string& text, double rho) {
  std::vector<AugmentOp> ops;
  std::istringstream in(text);
  std::string name;
  while (std::getline(in, name, ',')) {
    name.erase(0, name.find_first_not_of(" \t"));
    name.erase(name.find_last_not_of(" \t") + 1);
    if (name.empty()) continue;
    if (name == "flip") {
      ops.emplace_back(FlipOp{});
    } else if (name == "fliph") {
      ops.emplace_back(FlipOp{true, false});
    } else if (name == "flipv") {
      ops.emplace_back(FlipOp{false, true});
    } else if (name == "rot18") {
      ops.emplace_back(BoardRotateOp{18.0, std::nullopt});
    } else if (name == "rot36") {
      ops.emplace_back(BoardRotateOp{36.0, std::nullopt});
    } else if (name == "smallrot") {
      ops.emplace_back(SmallRotateOp{});
    } else if (name == "warp") {
      ops.emplace_back(WarpOp{rho, std::nullopt});
    } else if (name == "jitter") {
      ops.emplace_back(JitterOp{});
    } else {
      throw std::invalid_argument("unknown augmentation op '" + name + "'");
    }
  }
  return ops;
}

RunConfig run_config_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where, "expected a JSON object");
  RunConfig c;
  if (auto it = j.find("board_spec"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw ParseError(where, "board_spec must be a path string");
    c.board_spec = it->get<std::string>();
  }
  if (auto it = j.find("input_size"); it != j.end()) c.input_size = as_int(*it, where, "input_size");
  c.box_fraction = number_or(j, "box_fraction", c.box_fraction, where);
  c.iou_threshold = number_or(j, "iou_threshold", c.iou_threshold, where);
  c.conf_threshold = number_or(j, "conf_threshold", c.conf_threshold, where);
  if (auto it = j.find("max_darts"); it != j.end()) c.max_darts = as_int(*it, where, "max_darts");
  if (auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned()) throw ParseError(where, "seed must be a non-negative integer");
    c.seed = it->get<std::uint64_t>();
  }
  if (auto it = j.find("augment"); it != j.end()) {
    const std::string w = where + ": augment";
    const double rho = number_or(*it, "rho", kDefaultRho, w);
    c.augment.probability = number_or(*it, "probability", c.augment.probability, w);
    c.augment.overall_probability =
        number_or(*it, "overall_probability", c.augment.overall_probability, w);
    if (auto ops = it->find("ops"); ops != it->end()) {
      if (!ops->is_string()) throw ParseError(w, "ops must be a comma-separated string");
      try {
        c.augment.ops = parse_augment_ops(ops->get<std::string>(), rho);
      } catch (const std::invalid_argument& e) {
        throw ParseError(w, e.what());
      }
    }
    if (!(rho >= 0)) throw ParseError(w, "rho must be non-negative");
    if (!(c.augment.probability >= 0 && c.augment.probability <= 1 &&
          c.augment.overall_probability >= 0 && c.augment.overall_probability <= 1)) {
      throw ParseError(w, "probabilities must be in [0, 1]");
    }
  }
  if (auto it = j.find("noise"); it != j.end()) {
    const std::string w = where + ": noise";
    c.noise.sigma_px = number_or(*it, "sigma_px", 0.0, w);
    c.noise.p_miss = number_or(*it, "p_miss", 0.0, w);
    c.noise.fp_rate = number_or(*it, "fp_rate", 0.0, w);
    if (auto f = it->find("cal_false_positives"); f != it->end()) {
      if (!f->is_boolean()) throw ParseError(w, "cal_false_positives must be a boolean");
      c.noise.cal_false_positives = f->get<bool>();
    }
    if (!(c.noise.sigma_px >= 0 && c.noise.p_miss >= 0 && c.noise.p_miss <= 1 &&
          c.noise.fp_rate >= 0)) {
      throw ParseError(w, "noise parameters out of range");
    }
  }
  if (c.input_size <= 0) throw ParseError(where, "input_size must be positive");
  if (!(c.box_fraction > 0 && c.box_fraction <= 1)) throw ParseError(where, "box_fraction must be in (0, 1]");
  if (!(c.iou_threshold >= 0 && c.iou_threshold <= 1 && c.conf_threshold >= 0 &&
        c.conf_threshold <= 1)) {
    throw ParseError(where, "thresholds must be in [0, 1]");
  }
  if (c.max_darts < 0) throw ParseError(where, "max_darts must be non-negative");
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), e.what());
  }
  return run_config_from_json(j, path.string());
}

// ---- files ---------------------------------------------------------------

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), "cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_atomic(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace dartscore::io
