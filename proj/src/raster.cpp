#include "dartscore/raster.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <string>

#include "dartscore/errors.hpp"

namespace dartscore {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  while (in) {
    const int c = in.get();
    if (c == EOF) break;
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
      if (!tok.empty()) break;
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

void warp_row(const RasterImage& src, const Homography& inv, RasterImage& out, int y) {
  const auto& m = inv.matrix();
  const double max_x = src.width - 1;
  const double max_y = src.height - 1;
  for (int x = 0; x < out.width; ++x) {
    std::uint8_t* dst = out.pixel(x, y);
    const double lambda = m[6] * x + m[7] * y + m[8];
    if (!(std::abs(lambda) > tol::kHomogeneousEps)) continue;
    const double sx = (m[0] * x + m[1] * y + m[2]) / lambda;
    const double sy = (m[3] * x + m[4] * y + m[5]) / lambda;
    if (!(sx >= 0 && sy >= 0 && sx <= max_x && sy <= max_y)) continue;
    const int x0 = static_cast<int>(sx);
    const int y0 = static_cast<int>(sy);
    const int x1 = x0 + 1 < src.width ? x0 + 1 : x0;
    const int y1 = y0 + 1 < src.height ? y0 + 1 : y0;
    const double fx = sx - x0;
    const double fy = sy - y0;
    const std::uint8_t* p00 = src.pixel(x0, y0);
    const std::uint8_t* p10 = src.pixel(x1, y0);
    const std::uint8_t* p01 = src.pixel(x0, y1);
    const std::uint8_t* p11 = src.pixel(x1, y1);
    for (int c = 0; c < 3; ++c) {
      const double top = p00[c] + fx * (p10[c] - p00[c]);
      const double bottom = p01[c] + fx * (p11[c] - p01[c]);
      const double v = top + fy * (bottom - top);
      dst[c] = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
    }
  }
}

}  // namespace

RasterImage read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), "cannot open");
  if (next_token(in) != "P6") throw ParseError(path.string(), "not a binary PPM (P6)");
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(next_token(in));
    h = std::stoi(next_token(in));
    maxval = std::stoi(next_token(in));
  } catch (const std::exception&) {
    throw ParseError(path.string(), "malformed PPM header");
  }
  if (w <= 0 || h <= 0 || maxval != 255) {
    throw ParseError(path.string(), "unsupported PPM dimensions or maxval");
  }
  RasterImage img(w, h);
  in.read(reinterpret_cast<char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.rgb.size())) {
    throw ParseError(path.string(), "truncated pixel data");
  }
  return img;
}

void write_ppm(const std::filesystem::path& path, const RasterImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.rgb.data()),
            static_cast<std::streamsize>(img.rgb.size()));
}

RasterImage warp_raster(const RasterImage& src, const Homography& h, int out_width,
                        int out_height) {
  const Homography inv = invert(h);
  RasterImage out(out_width, out_height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < out_height; ++y) warp_row(src, inv, out, y);
  return out;
}

RasterImage warp_raster_serial(const RasterImage& src, const Homography& h, int out_width,
                               int out_height) {
  const Homography inv = invert(h);
  RasterImage out(out_width, out_height);
  for (int y = 0; y < out_height; ++y) warp_row(src, inv, out, y);
  return out;
}

}  // namespace dartscore
