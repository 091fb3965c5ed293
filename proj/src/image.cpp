#include "myco/image.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>

#include "myco/errors.hpp"
#include "myco/pngio.hpp"

namespace myco {

RgbImage make_image(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  RgbImage img;
  img.width = width;
  img.height = height;
  img.pixels.resize(static_cast<size_t>(width) * height * 3);
  for (size_t i = 0; i < img.pixels.size(); i += 3) {
    img.pixels[i] = r;
    img.pixels[i + 1] = g;
    img.pixels[i + 2] = b;
  }
  return img;
}

size_t BoolMask::count() const {
  return static_cast<size_t>(std::count(cells.begin(), cells.end(), std::uint8_t{1}));
}

BoolMask make_mask(int rows, int cols, bool value) {
  BoolMask m;
  m.rows = rows;
  m.cols = cols;
  m.cells.assign(static_cast<size_t>(rows) * cols, value ? 1 : 0);
  return m;
}

namespace {

// Reads one whitespace-delimited token, skipping `#` comments (PPM allows
// comments anywhere between header fields).
std::string next_ppm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

RgbImage read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string magic = next_ppm_token(in);
  if (magic != "P6") throw ParseError(path + ": unsupported PPM magic '" + magic + "'");
  long width = 0, height = 0, maxval = 0;
  try {
    width = std::stol(next_ppm_token(in));
    height = std::stol(next_ppm_token(in));
    maxval = std::stol(next_ppm_token(in));
  } catch (const std::exception&) {
    throw ParseError(path + ": malformed PPM header");
  }
  if (width <= 0 || height <= 0) throw ParseError(path + ": bad PPM dimensions");
  if (maxval != 255) throw ParseError(path + ": only maxval 255 PPM supported");
  RgbImage img;
  img.width = static_cast<int>(width);
  img.height = static_cast<int>(height);
  img.pixels.resize(static_cast<size_t>(width) * height * 3);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
    throw ParseError(path + ": truncated PPM pixel data");
  return img;
}

}  // namespace

RgbImage load_image(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw IoError("cannot open " + path);
  unsigned char sig[8] = {0};
  probe.read(reinterpret_cast<char*>(sig), 8);
  std::streamsize got = probe.gcount();
  probe.close();
  static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
  if (got >= 8 && std::equal(sig, sig + 8, png_sig)) return read_png(path);
  if (got >= 2 && sig[0] == 'P' && sig[1] == '6') return read_ppm(path);
  throw ParseError(path + ": unrecognised image format (expected PNG or binary PPM)");
}

BoolMask threshold_to_mask(const RgbImage& img, const ThresholdRule& rule) {
  BoolMask m = make_mask(img.height, img.width);
  const std::uint8_t* p = img.pixels.data();
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x, p += 3) {
      bool hit = p[0] > rule.r_min && p[1] > rule.g_min && p[2] < rule.b_max;
      if (hit) m.cells[static_cast<size_t>(y) * img.width + x] = 1;
    }
  }
  return m;
}

BoolMask dilate(const BoolMask& mask, int iterations) {
  BoolMask cur = mask;
  for (int it = 0; it < iterations; ++it) {
    BoolMask next = cur;
    for (int r = 0; r < cur.rows; ++r) {
      for (int c = 0; c < cur.cols; ++c) {
        if (cur.at(r, c)) continue;
        bool any = false;
        for (int dr = -1; dr <= 1 && !any; ++dr) {
          for (int dc = -1; dc <= 1 && !any; ++dc) {
            if (dr == 0 && dc == 0) continue;
            int rr = r + dr, cc = c + dc;
            if (rr < 0 || rr >= cur.rows || cc < 0 || cc >= cur.cols) continue;
            any = cur.at(rr, cc);
          }
        }
        if (any) next.set(r, c, true);
      }
    }
    cur = std::move(next);
  }
  return cur;
}

BoolMask transpose(const BoolMask& mask) {
  BoolMask t = make_mask(mask.cols, mask.rows);
  for (int r = 0; r < mask.rows; ++r)
    for (int c = 0; c < mask.cols; ++c)
      if (mask.at(r, c)) t.set(c, r, true);
  return t;
}

}  // namespace myco
