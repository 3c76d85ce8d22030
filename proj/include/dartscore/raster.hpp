#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "dartscore/geometry.hpp"

namespace dartscore {

// 8-bit interleaved RGB.
struct RasterImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  RasterImage() = default;
  RasterImage(int w, int h) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, 0) {}

  std::uint8_t* pixel(int x, int y) { return &rgb[(static_cast<std::size_t>(y) * width + x) * 3]; }
  const std::uint8_t* pixel(int x, int y) const {
    return &rgb[(static_cast<std::size_t>(y) * width + x) * 3];
  }
  friend bool operator==(const RasterImage&, const RasterImage&) = default;
};

// Binary PPM (P6, maxval 255). Throws ParseError.
RasterImage read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const RasterImage& image);

// Inverse-mapped bilinear warp: out(p) = src(h^-1(p)); samples falling outside
// the source are black. `h` maps source pixel coordinates to output pixel
// coordinates; pixel centers sit at integer coordinates.
RasterImage warp_raster(const RasterImage& src, const Homography& h, int out_width,
                        int out_height);

// Single-threaded reference of warp_raster; outputs must match bit for bit.
RasterImage warp_raster_serial(const RasterImage& src, const Homography& h, int out_width,
                               int out_height);

}  // namespace dartscore
