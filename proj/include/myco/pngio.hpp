#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "myco/image.hpp"

namespace myco {

RgbImage read_png(const std::string& path);

void write_png_rgb(const std::string& path, const RgbImage& img);

// 8-bit grayscale, row-major, rows*cols bytes.
void write_png_gray(const std::string& path, const std::vector<std::uint8_t>& gray, int width,
                    int height);

}  // namespace myco
