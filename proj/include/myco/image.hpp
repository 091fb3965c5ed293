#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace myco {

// 8-bit RGB raster, row-major. Alpha in source files is dropped on load.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // 3 bytes per pixel, y * width + x

  std::uint8_t r(int x, int y) const { return pixels[3 * (static_cast<size_t>(y) * width + x) + 0]; }
  std::uint8_t g(int x, int y) const { return pixels[3 * (static_cast<size_t>(y) * width + x) + 1]; }
  std::uint8_t b(int x, int y) const { return pixels[3 * (static_cast<size_t>(y) * width + x) + 2]; }
  void set(int x, int y, std::uint8_t rr, std::uint8_t gg, std::uint8_t bb) {
    size_t i = 3 * (static_cast<size_t>(y) * width + x);
    pixels[i] = rr;
    pixels[i + 1] = gg;
    pixels[i + 2] = bb;
  }
};

RgbImage make_image(int width, int height, std::uint8_t r = 0, std::uint8_t g = 0,
                    std::uint8_t b = 0);

// Channel test deciding which pixels count as network material:
// a pixel passes when r > r_min, g > g_min and b < b_max (all strict).
struct ThresholdRule {
  int r_min = 170;
  int g_min = 170;
  int b_max = 200;
};

// Boolean raster used between thresholding and grid projection.
// Rows correspond to image y, columns to image x.
struct BoolMask {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> cells;  // 1 = set

  bool at(int r, int c) const { return cells[static_cast<size_t>(r) * cols + c] != 0; }
  void set(int r, int c, bool v) { cells[static_cast<size_t>(r) * cols + c] = v ? 1 : 0; }
  size_t count() const;
};

BoolMask make_mask(int rows, int cols, bool value = false);

// Decodes PNG (8-bit RGB/RGBA, other depths converted) or binary PPM (P6).
// The format is sniffed from the file's magic bytes, not its name.
RgbImage load_image(const std::string& path);

BoolMask threshold_to_mask(const RgbImage& img, const ThresholdRule& rule);

// Morphological dilation over the 8-neighborhood; iterations = 0 is identity.
BoolMask dilate(const BoolMask& mask, int iterations);

BoolMask transpose(const BoolMask& mask);

}  // namespace myco
