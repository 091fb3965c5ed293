#include "myco/metrics.hpp"

#include <cmath>
#include <sstream>

#include "myco/errors.hpp"
#include "myco/util.hpp"

namespace myco {

long long activity(const FieldState& state, double threshold) {
  const ConductiveGrid& g = *state.grid;
  long long count = 0;
  for (size_t n = 0; n < g.node_count(); ++n)
    if (g.mask[n] && state.u[n] > threshold) ++count;
  return count;
}

CoverageMap make_coverage(const ConductiveGrid& grid) {
  CoverageMap map;
  map.rows = grid.rows;
  map.cols = grid.cols;
  map.raw.assign(grid.node_count(), 0);
  return map;
}

void coverage_accumulate(CoverageMap& map, const FieldState& state, double threshold) {
  const ConductiveGrid& g = *state.grid;
  if (map.rows != g.rows || map.cols != g.cols)
    throw ValidationError({"coverage map dims do not match grid"});
  for (size_t n = 0; n < g.node_count(); ++n)
    if (g.mask[n] && state.u[n] > threshold) ++map.raw[n];
  ++map.iterations_accumulated;
}

void coverage_accumulate_active(CoverageMap& map, const FieldState& state,
                                std::span<const std::int32_t> active, double threshold) {
  const ConductiveGrid& g = *state.grid;
  if (map.rows != g.rows || map.cols != g.cols)
    throw ValidationError({"coverage map dims do not match grid"});
  if (threshold < 0)
    throw ValidationError({"coverage_accumulate_active requires threshold >= 0"});
  for (std::int32_t n : active)
    if (state.u[n] > threshold) ++map.raw[n];
  ++map.iterations_accumulated;
}

void coverage_finalize(CoverageMap& map) {
  map.max_raw = 0;
  for (long long r : map.raw) map.max_raw = std::max(map.max_raw, r);
  map.normalized.assign(map.raw.size(), 0.0);
  if (map.max_raw == 0) return;
  const double inv = 1.0 / static_cast<double>(map.max_raw);
  for (size_t n = 0; n < map.raw.size(); ++n)
    map.normalized[n] = static_cast<double>(map.raw[n]) * inv;
}

RgbImage render_snapshot(const FieldState& state, double display_threshold) {
  const ConductiveGrid& g = *state.grid;
  RgbImage img = make_image(g.cols, g.rows, kSnapshotBackground[0], kSnapshotBackground[1],
                            kSnapshotBackground[2]);
  for (int r = 0; r < g.rows; ++r) {
    for (int c = 0; c < g.cols; ++c) {
      if (!g.conductive(r, c)) continue;
      const bool excited = state.u_at(r, c) > display_threshold;
      const std::uint8_t* p = excited ? kSnapshotExcited : kSnapshotMask;
      img.set(c, r, p[0], p[1], p[2]);
    }
  }
  return img;
}

std::vector<std::uint8_t> render_coverage(const CoverageMap& map) {
  if (map.normalized.size() != map.raw.size())
    throw ValidationError({"render_coverage requires a finalized map"});
  std::vector<std::uint8_t> gray(map.raw.size());
  for (size_t n = 0; n < gray.size(); ++n)
    gray[n] = static_cast<std::uint8_t>(std::lround(255.0 * map.normalized[n]));
  return gray;
}

std::string activity_csv(const std::vector<long long>& iterations,
                         const std::vector<long long>& counts) {
  std::ostringstream out;
  out << "iteration,count\n";
  for (size_t i = 0; i < iterations.size(); ++i)
    out << iterations[i] << "," << counts[i] << "\n";
  return out.str();
}

std::string coverage_csv(const CoverageMap& map) {
  std::ostringstream out;
  out << "row,col,raw,normalized\n";
  for (int r = 0; r < map.rows; ++r) {
    for (int c = 0; c < map.cols; ++c) {
      const size_t n = static_cast<size_t>(r) * map.cols + c;
      if (map.raw[n] == 0) continue;
      out << r << "," << c << "," << map.raw[n] << ","
          << format_double(map.normalized.empty() ? 0.0 : map.normalized[n]) << "\n";
    }
  }
  return out.str();
}

}  // namespace myco
