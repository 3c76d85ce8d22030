#include "dartscore/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "dartscore/errors.hpp"

namespace dartscore::svg {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string header(int w, int h) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(w) + "\" height=\"" + std::to_string(h) + "\" viewBox=\"0 0 " +
         std::to_string(w) + ' ' + std::to_string(h) + "\">\n";
}

// Projects a board-plane polyline into the image; points beyond the horizon
// split the line.
std::vector<std::vector<Point>> project(const Homography& board_to_image,
                                        const std::vector<Point>& pts) {
  std::vector<std::vector<Point>> runs(1);
  for (const Point& p : pts) {
    try {
      runs.back().push_back(board_to_image.apply(p));
    } catch (const PointAtInfinity&) {
      if (!runs.back().empty()) runs.emplace_back();
    }
  }
  return runs;
}

void polyline(std::ostringstream& out, const std::vector<Point>& pts, const std::string& attrs) {
  if (pts.size() < 2) return;
  out << "  <polyline " << attrs << " fill=\"none\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out << (i ? " " : "") << num(pts[i].x) << ',' << num(pts[i].y);
  }
  out << "\"/>\n";
}

}  // namespace

std::string escape_xml(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render_overlay(const Overlay& o, const BoardSpec& spec) {
  std::ostringstream out;
  out << header(o.width, o.height);
  out << "  <title>" << escape_xml(o.title) << "</title>\n";
  out << "  <rect x=\"0\" y=\"0\" width=\"" << o.width << "\" height=\"" << o.height
      << "\" fill=\"#202020\"/>\n";

  if (o.calibration) {
    const BoardCalibration& c = *o.calibration;
    const Homography to_image = invert(c.h);
    const std::array<double, 6> radii{spec.r_double_bull,  spec.r_bull,
                                      spec.r_treble_inner, spec.r_treble_outer,
                                      spec.r_double_inner, spec.r_double_outer};
    for (std::size_t k = 0; k < radii.size(); ++k) {
      std::vector<Point> ring;
      for (int i = 0; i <= o.outline_samples; ++i) {
        const double theta = 360.0 * i / o.outline_samples;
        ring.push_back(c.center + (c.radius * radii[k]) * direction_cw(theta));
      }
      const bool outer = k + 1 == radii.size();
      for (const auto& run : project(to_image, ring)) {
        polyline(out, run,
                 std::string(outer ? "id=\"outline\" " : "") +
                     "stroke=\"#e0e0e0\" stroke-width=\"" + (outer ? "2" : "1") + "\"");
      }
    }
    for (int s = 0; s < kSectors; ++s) {
      const Point dir = direction_cw(s * kSectorWidthDeg - kSectorWidthDeg / 2);
      const std::vector<Point> wire{c.center + (c.radius * spec.r_bull) * dir,
                                    c.center + c.radius * dir};
      for (const auto& run : project(to_image, wire)) {
        polyline(out, run, "stroke=\"#a0a0a0\" stroke-width=\"1\"");
      }
      try {
        const Point label_at =
            to_image.apply(c.center + (1.12 * c.radius) * direction_cw(s * kSectorWidthDeg));
        out << "  <text x=\"" << num(label_at.x) << "\" y=\"" << num(label_at.y)
            << "\" fill=\"#ffffff\" font-size=\"14\" text-anchor=\"middle\" "
               "dominant-baseline=\"middle\">"
            << spec.sector_sequence[s] << "</text>\n";
      } catch (const PointAtInfinity&) {
      }
    }
  }

  for (const auto& cp : o.cal_points) {
    if (cp.recovered) {
      const double r = 7;
      out << "  <polygon class=\"cal recovered\" points=\"" << num(cp.p.x) << ','
          << num(cp.p.y - r) << ' ' << num(cp.p.x + r) << ',' << num(cp.p.y) << ' '
          << num(cp.p.x) << ',' << num(cp.p.y + r) << ' ' << num(cp.p.x - r) << ','
          << num(cp.p.y) << "\" fill=\"none\" stroke=\"#ffd700\" stroke-width=\"2\" "
          << "stroke-dasharray=\"3,2\"/>\n";
    } else {
      out << "  <circle class=\"cal\" cx=\"" << num(cp.p.x) << "\" cy=\"" << num(cp.p.y)
          << "\" r=\"5\" fill=\"#ffd700\"/>\n";
    }
    out << "  <text x=\"" << num(cp.p.x + 8) << "\" y=\"" << num(cp.p.y - 8)
        << "\" fill=\"#ffd700\" font-size=\"12\">" << escape_xml(cp.label) << "</text>\n";
  }
  for (const auto& d : o.darts) {
    out << "  <circle class=\"dart\" cx=\"" << num(d.p.x) << "\" cy=\"" << num(d.p.y)
        << "\" r=\"5\" fill=\"#c040ff\"/>\n";
    out << "  <text x=\"" << num(d.p.x + 8) << "\" y=\"" << num(d.p.y + 4)
        << "\" fill=\"#c040ff\" font-size=\"16\" font-weight=\"bold\">" << escape_xml(d.label)
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string sweep_chart(const std::vector<SweepRow>& rows) {
  const int w = 640, h = 420;
  const double left = 60, right = 20, top = 30, bottom = 50;
  std::ostringstream out;
  out << header(w, h);
  out << "  <rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"#ffffff\"/>\n";

  // Pick the parameter that varies; sigma wins ties.
  auto spread = [&](auto field) {
    if (rows.empty()) return 0.0;
    auto [lo, hi] = std::minmax_element(rows.begin(), rows.end(), [&](const auto& a, const auto& b) {
      return field(a) < field(b);
    });
    return field(*hi) - field(*lo);
  };
  auto sigma = [](const SweepRow& r) { return r.sigma_px; };
  auto pmiss = [](const SweepRow& r) { return r.p_miss; };
  auto fp = [](const SweepRow& r) { return r.fp_rate; };
  std::string xlabel = "sigma_px";
  std::function<double(const SweepRow&)> xf = sigma;
  if (spread(sigma) == 0.0 && spread(pmiss) > 0.0) {
    xlabel = "p_miss";
    xf = pmiss;
  } else if (spread(sigma) == 0.0 && spread(pmiss) == 0.0 && spread(fp) > 0.0) {
    xlabel = "fp_rate";
    xf = fp;
  }
  double xmin = 0, xmax = 1;
  if (!rows.empty()) {
    xmin = xmax = xf(rows.front());
    for (const auto& r : rows) {
      xmin = std::min(xmin, xf(r));
      xmax = std::max(xmax, xf(r));
    }
    if (xmax == xmin) xmax = xmin + 1;
  }
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (w - left - right); };
  auto py = [&](double pcs) { return top + (100.0 - pcs) / 100.0 * (h - top - bottom); };

  out << "  <line x1=\"" << left << "\" y1=\"" << h - bottom << "\" x2=\"" << w - right
      << "\" y2=\"" << h - bottom << "\" stroke=\"#000000\"/>\n";
  out << "  <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << h - bottom << "\" stroke=\"#000000\"/>\n";
  for (int t = 0; t <= 100; t += 20) {
    out << "  <text x=\"" << left - 8 << "\" y=\"" << num(py(t) + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << t << "</text>\n";
  }
  out << "  <text x=\"" << w / 2 << "\" y=\"" << h - 12
      << "\" font-size=\"13\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  out << "  <text x=\"16\" y=\"" << h / 2 << "\" font-size=\"13\" text-anchor=\"middle\" "
      << "transform=\"rotate(-90 16 " << h / 2 << ")\">PCS (%)</text>\n";

  std::vector<Point> line;
  for (const auto& r : rows) {
    const double x = px(xf(r));
    line.push_back({x, py(r.pcs)});
    const double e = 1.96 * r.pcs_stderr;
    out << "  <line x1=\"" << num(x) << "\" y1=\"" << num(py(std::min(100.0, r.pcs + e)))
        << "\" x2=\"" << num(x) << "\" y2=\"" << num(py(std::max(0.0, r.pcs - e)))
        << "\" stroke=\"#808080\"/>\n";
    out << "  <circle cx=\"" << num(x) << "\" cy=\"" << num(py(r.pcs))
        << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
    out << "  <text x=\"" << num(x) << "\" y=\"" << h - bottom + 16
        << "\" font-size=\"11\" text-anchor=\"middle\">" << num(xf(r)) << "</text>\n";
  }
  polyline(out, line, "stroke=\"#1f77b4\" stroke-width=\"2\"");
  out << "</svg>\n";
  return out.str();
}

}  // namespace dartscore::svg
