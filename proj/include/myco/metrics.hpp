#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "myco/fhn.hpp"
#include "myco/grid.hpp"
#include "myco/image.hpp"

namespace myco {

// Number of conductive nodes with u strictly above `threshold`.
long long activity(const FieldState& state, double threshold = 0.1);

// Per-node count of iterations during which u exceeded the threshold.
struct CoverageMap {
  int rows = 0, cols = 0;
  std::vector<long long> raw;      // per node, row-major
  std::vector<double> normalized;  // filled by coverage_finalize
  long long max_raw = 0;           // filled by coverage_finalize
  long long iterations_accumulated = 0;
};

CoverageMap make_coverage(const ConductiveGrid& grid);

// Full-grid accumulation pass (reference semantics; call every iteration).
void coverage_accumulate(CoverageMap& map, const FieldState& state, double threshold = 0.1);

// Equivalent fast path: only `active` nodes can be non-resting, every other
// conductive node holds u = 0 exactly, so for threshold >= 0 scanning the
// active set gives identical counts. Requires threshold >= 0.
void coverage_accumulate_active(CoverageMap& map, const FieldState& state,
                                std::span<const std::int32_t> active, double threshold = 0.1);

// normalized = raw / max(raw); all-zero map stays all-zero.
void coverage_finalize(CoverageMap& map);

// Fixed snapshot palette (documented so image tests are byte-stable).
inline constexpr std::uint8_t kSnapshotBackground[3] = {0, 0, 0};
inline constexpr std::uint8_t kSnapshotMask[3] = {64, 64, 64};
inline constexpr std::uint8_t kSnapshotExcited[3] = {255, 255, 255};

// One pixel per node: background / conductive / excited (u > threshold).
RgbImage render_snapshot(const FieldState& state, double display_threshold = 0.04);

// 8-bit grayscale, value = round(255 * normalized); rows*cols bytes.
std::vector<std::uint8_t> render_coverage(const CoverageMap& map);

// CSV helpers ("iteration,count" and "row,col,raw,normalized" for nonzero
// rows respectively).
std::string activity_csv(const std::vector<long long>& iterations,
                         const std::vector<long long>& counts);
std::string coverage_csv(const CoverageMap& map);

}  // namespace myco
