// myco-datagen — regenerates the repository's bundled sample data.
//
// No scanned specimen ships with the repository; the bundle is a procedural
// reconstruction of a colonised-insole-style network with realistic
// statistics: two lacy mycelium-like patches (a large ellipse and a small
// disc) on a 364x985 lattice, 16 electrodes, and three stimulation scenarios.
// Everything is derived from one seed with a portable RNG (splitmix64), so
// the emitted bytes are identical on every platform.
//
// Outputs (into --out, default data/):
//   network.png          1000x960 template image; ingest reproduces the mask
//   electrodes.txt       16-electrode layout
//   scenarios.txt        stimulation pairs 01 / 10 / 11
//   experiment.cfg       full-size experiment recipe
//   small.grid           100x100 fully conductive lattice (MYCOGRID1)
//   small_electrodes.txt / small_scenarios.txt / small.cfg   CI profile
//   logger_fixture.csv   synthetic 90-minute 1 Hz voltage log

#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "myco/config.hpp"
#include "myco/electrodes.hpp"
#include "myco/experiment.hpp"
#include "myco/fhn.hpp"
#include "myco/grid.hpp"
#include "myco/image.hpp"
#include "myco/pngio.hpp"
#include "myco/util.hpp"

namespace fs = std::filesystem;
using namespace myco;

namespace {

// splitmix64: tiny, seedable, and identical everywhere (unlike the standard
// library's distributions, whose output is implementation-defined).
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
  int randint(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }
};

constexpr int kRows = 364, kCols = 985;   // lattice used by the bundled configs
constexpr int kImgW = 1000, kImgH = 960;  // template image dimensions

struct Design {
  std::vector<std::uint8_t> mask;  // row-major node mask
  std::vector<std::pair<std::string, std::pair<int, int>>> electrodes;

  bool get(int r, int c) const { return mask[static_cast<size_t>(r) * kCols + c] != 0; }
  void set(int r, int c, bool v) { mask[static_cast<size_t>(r) * kCols + c] = v ? 1 : 0; }
};

struct Ellipse {
  double cr, cc, ar, ac;
  bool contains(int r, int c) const {
    const double x = (r - cr) / ar, y = (c - cc) / ac;
    return x * x + y * y <= 1.0;
  }
};

// Bresenham segment thickened to 2x2 blocks (hyphal strand two nodes wide).
void draw_strand(Design& d, int r0, int c0, int r1, int c1) {
  const int dr = std::abs(r1 - r0), dc = std::abs(c1 - c0);
  const int sr = r1 >= r0 ? 1 : -1, sc = c1 >= c0 ? 1 : -1;
  double err = (dr > dc ? dr : -dc) / 2.0;
  int r = r0, c = c0;
  for (;;) {
    for (int rr = r; rr <= r + 1; ++rr)
      for (int cc = c; cc <= c + 1; ++cc)
        if (rr >= 0 && rr < kRows && cc >= 0 && cc < kCols) d.set(rr, cc, true);
    if (r == r1 && c == c1) break;
    const double e2 = err;
    if (e2 > -dr) {
      err -= dc;
      r += sr;
    }
    if (e2 < dc) {
      err += dr;
      c += sc;
    }
  }
}

// Lace: junctions on a jittered lattice inside `region`, connected to their
// right/down neighbors with probability p_edge (diagonals with p_diag).
void lace(Design& d, SplitMix64& rng, const Ellipse& region, int spacing = 9, int jitter = 3,
          double p_edge = 0.82, double p_diag = 0.15) {
  const int gi_count = (kRows + spacing - 1) / spacing;
  const int gj_count = (kCols + spacing - 1) / spacing;
  std::vector<std::optional<std::pair<int, int>>> juncs(
      static_cast<size_t>(gi_count) * gj_count);
  auto at = [&](int gi, int gj) -> std::optional<std::pair<int, int>>& {
    return juncs[static_cast<size_t>(gi) * gj_count + gj];
  };
  for (int gi = 0; gi < gi_count; ++gi)
    for (int gj = 0; gj < gj_count; ++gj) {
      const int r = gi * spacing + rng.randint(-jitter, jitter);
      const int c = gj * spacing + rng.randint(-jitter, jitter);
      if (r >= 0 && r < kRows && c >= 0 && c < kCols && region.contains(r, c))
        at(gi, gj) = std::make_pair(r, c);
    }
  for (int gi = 0; gi < gi_count; ++gi)
    for (int gj = 0; gj < gj_count; ++gj) {
      if (!at(gi, gj)) continue;
      const auto [r, c] = *at(gi, gj);
      const std::pair<int, int> straight[2] = {{gi, gj + 1}, {gi + 1, gj}};
      for (const auto& [ni, nj] : straight)
        if (ni < gi_count && nj < gj_count && at(ni, nj) && rng.uniform() < p_edge)
          draw_strand(d, r, c, at(ni, nj)->first, at(ni, nj)->second);
      if (gi + 1 < gi_count && gj + 1 < gj_count && at(gi + 1, gj + 1) &&
          rng.uniform() < p_diag) {
        draw_strand(d, r, c, at(gi + 1, gj + 1)->first, at(gi + 1, gj + 1)->second);
      }
    }
}

Design build_design(std::uint64_t seed) {
  Design d;
  d.mask.assign(static_cast<size_t>(kRows) * kCols, 0);
  SplitMix64 rng(seed);

  const Ellipse patch_a{182, 320, 110, 135};  // large "toe" patch, holds E1
  const Ellipse patch_b{182, 540, 45, 45};    // small "heel" patch, holds E2
  lace(d, rng, patch_a);
  lace(d, rng, patch_b);

  // Electrode sites: centers of both patches plus inset arcs forming a
  // boundary-following sensing ring around the colonised region.
  d.electrodes.emplace_back("E1", std::make_pair(182, 320));
  d.electrodes.emplace_back("E2", std::make_pair(182, 540));
  const char* arc_names[11] = {"E3",  "E4",  "E5",  "E6",  "E7",  "E8",
                               "E12", "E13", "E14", "E15", "E16"};
  // Arc radii chosen so the wave started at E1 reaches every arc electrode
  // well inside the default 60K-step run (front speed ~0.002 nodes/step,
  // times a detour factor for the lace paths).
  for (int k = 0; k < 11; ++k) {
    const double t = -2.6 + 5.2 * k / 10.0;
    const int r = static_cast<int>(std::lround(patch_a.cr + 50 * std::sin(t)));
    const int c = static_cast<int>(std::lround(patch_a.cc + 56 * std::cos(t)));
    d.electrodes.emplace_back(arc_names[k], std::make_pair(r, c));
  }
  const double angles_b[3] = {1.57, 3.67, 5.76};
  const char* names_b[3] = {"E9", "E10", "E11"};
  for (int k = 0; k < 3; ++k) {
    const int r = static_cast<int>(std::lround(patch_b.cr + 30 * std::sin(angles_b[k])));
    const int c = static_cast<int>(std::lround(patch_b.cc + 30 * std::cos(angles_b[k])));
    d.electrodes.emplace_back(names_b[k], std::make_pair(r, c));
  }

  // Each electrode sits in a cleared moat crossed by one horizontal strand,
  // so its stimulus ignites a narrow channel instead of an open 2D region
  // (a ~10-node kick is subcritical on an open lattice).
  for (const auto& [id, pos] : d.electrodes) {
    const auto [er, ec] = pos;
    for (int r = std::max(0, er - 6); r <= std::min(kRows - 1, er + 6); ++r)
      for (int c = std::max(0, ec - 6); c <= std::min(kCols - 1, ec + 6); ++c)
        if ((r - er) * (r - er) + (c - ec) * (c - ec) <= 36) d.set(r, c, false);
    for (int dc = -7; dc <= 7; ++dc) {
      const int c = ec + dc;
      if (c < 0 || c >= kCols) continue;
      for (int r = std::max(0, er - 1); r <= std::min(kRows - 1, er + 1); ++r) d.set(r, c, true);
    }
    // Width-2 feeder both ways until it touches existing lace (<= 30 nodes).
    for (int sgn : {-1, 1}) {
      int c = ec + sgn * 8;
      for (int steps = 0; c >= 0 && c < kCols && steps < 30; ++steps, c += sgn) {
        bool touch = false;
        for (int r = std::max(0, er - 2); r <= std::min(kRows - 1, er + 2); ++r)
          touch = touch || d.get(r, c);
        d.set(er, c, true);
        if (er + 1 < kRows) d.set(er + 1, c, true);
        if (touch) break;
      }
    }
  }
  return d;
}

// Paints pixel (x, y) by its containing node, so thresholding the image and
// projecting back to 364x985 recovers the design (dilation only thickens).
RgbImage render_image(const Design& d) {
  RgbImage img = make_image(kImgW, kImgH, 40, 40, 60);
  for (int y = 0; y < kImgH; ++y) {
    const int r = y * kRows / kImgH;
    for (int x = 0; x < kImgW; ++x) {
      const int c = x * kCols / kImgW;
      if (d.get(r, c)) img.set(x, y, 230, 230, 120);
    }
  }
  return img;
}

size_t component_size(const ConductiveGrid& grid, const ComponentInfo& info, int r, int c) {
  const int label = info.labels[static_cast<size_t>(r) * grid.cols + c];
  return label < 0 ? 0 : info.sizes[label];
}

std::string electrodes_text(const Design& d) {
  std::ostringstream out;
  out << "# Electrode layout (reconstructed): id, row, col on the 364x985 grid.\n";
  for (const auto& [id, pos] : d.electrodes)
    out << id << " " << pos.first << " " << pos.second << "\n";
  return out.str();
}

std::string scenarios_text(double radius) {
  std::ostringstream out;
  out << "# Stimulation scenarios: name, targets, amplitude, radius, at_iteration.\n"
      << "# Names encode the (E1, E2) input pair of the gate-mining protocol.\n"
      << "01 E2 1.0 " << format_double(radius) << " 0\n"
      << "10 E1 1.0 " << format_double(radius) << " 0\n"
      << "11 E1,E2 1.0 " << format_double(radius) << " 0\n";
  return out.str();
}

std::string experiment_cfg() {
  return
      "# Full-size experiment: the three-scenario study on the bundled network.\n"
      "\n"
      "[grid]\n"
      "image = network.png\n"
      "r_min = 170\n"
      "g_min = 170\n"
      "b_max = 200\n"
      "dilate = 1\n"
      "rows = 364\n"
      "cols = 985\n"
      "transpose = auto\n"
      "\n"
      "[model]\n"
      "c2 = 0.05\n"
      "\n"
      "[run]\n"
      "steps = 60000\n"
      "cadence = 100\n"
      "workers = 1\n"
      "output = out\n"
      "\n"
      "[electrodes]\n"
      "layout = electrodes.txt\n"
      "radius = 2.0\n"
      "\n"
      "[stimuli]\n"
      "scenarios = scenarios.txt\n"
      "\n"
      "[analysis]\n"
      "prominence = 0.03\n"
      "window = 200\n"
      "gap = 1000\n"
      "activity_threshold = 0.1\n"
      "display_threshold = 0.04\n"
      "coverage = true\n";
}

std::string small_cfg() {
  return
      "# CI profile: 100x100 fully conductive lattice, 5K steps.\n"
      "\n"
      "[grid]\n"
      "file = small.grid\n"
      "\n"
      "[model]\n"
      "c2 = 0.05\n"
      "\n"
      "[run]\n"
      "steps = 5000\n"
      "cadence = 100\n"
      "workers = 1\n"
      "output = out-small\n"
      "\n"
      "[electrodes]\n"
      "layout = small_electrodes.txt\n"
      "radius = 2.0\n"
      "\n"
      "[stimuli]\n"
      "scenarios = small_scenarios.txt\n"
      "\n"
      "[analysis]\n"
      "prominence = 0.03\n"
      "window = 200\n"
      "gap = 1000\n"
      "coverage = true\n";
}

// 90-minute 1 Hz log, four channels, spikes as 3-sample triangles of height
// 0.08 (prominence 0.08 over the flat baseline). Counts per 30-minute window
// follow the weight-response table the analysis examples discuss.
std::string logger_fixture() {
  const std::vector<std::pair<std::string, std::array<int, 3>>> plan = {
      {"Ch1-2", {2, 10, 1}},
      {"Ch3-4", {2, 6, 0}},
      {"Ch7-8", {0, 8, 3}},
      {"Ch9-10", {0, 7, 2}},
  };
  constexpr int kSamples = 5400;
  std::vector<std::vector<double>> values(plan.size(), std::vector<double>(kSamples, 0.0));
  for (size_t ch = 0; ch < plan.size(); ++ch) {
    for (int w = 0; w < 3; ++w) {
      const int w0 = w * 1800, w1 = w0 + 1800;
      const int count = plan[ch].second[w];
      for (int i = 0; i < count; ++i) {
        int t = w0 + (i + 1) * 1800 / (count + 1) + static_cast<int>(ch) * 7;
        t = std::min(std::max(t, w0 + 2), w1 - 3);
        values[ch][t - 1] = 0.04;
        values[ch][t] = 0.08;
        values[ch][t + 1] = 0.04;
      }
    }
  }
  std::ostringstream out;
  out << "time_s";
  for (const auto& [label, counts] : plan) out << "," << label;
  out << "\n";
  for (int t = 0; t < kSamples; ++t) {
    out << t;
    for (size_t ch = 0; ch < plan.size(); ++ch) out << "," << format_double(values[ch][t]);
    out << "\n";
  }
  return out.str();
}

// Re-ingests the freshly written image and checks the invariants the
// experiment depends on; returns a human-readable report.
std::string self_check(const fs::path& dir, const Design& d) {
  IngestSpec spec;
  spec.image = (dir / "network.png").string();
  IngestReport report = run_ingest(spec);
  const ConductiveGrid& grid = report.grid;

  std::ostringstream out;
  out << "ingest check: " << grid.conductive_count() << " conductive nodes\n";

  ComponentInfo info = connected_components(grid);
  const auto [e1r, e1c] = d.electrodes[0].second;
  const auto [e2r, e2c] = d.electrodes[1].second;
  if (!grid.conductive(e1r, e1c) || !grid.conductive(e2r, e2c))
    throw std::runtime_error("electrode centers must be conductive after ingest");
  const int label1 = info.labels[static_cast<size_t>(e1r) * grid.cols + e1c];
  const int label2 = info.labels[static_cast<size_t>(e2r) * grid.cols + e2c];
  if (label1 == label2)
    throw std::runtime_error("E1/E2 patches merged during ingest; regenerate with another seed");
  const size_t comp1 = component_size(grid, info, e1r, e1c);
  const size_t comp2 = component_size(grid, info, e2r, e2c);
  out << "components: E1 patch " << comp1 << " nodes, E2 patch " << comp2
      << " nodes, disjoint\n";
  if (comp2 >= comp1) throw std::runtime_error("E2 patch unexpectedly dominates E1 patch");

  std::vector<LayoutEntry> layout;
  for (const auto& [id, pos] : d.electrodes) layout.push_back({id, pos.first, pos.second});
  std::vector<std::string> warnings;
  auto electrodes = place_electrodes(layout, grid, 2.0, &warnings);
  for (const auto& w : warnings) out << "warning: " << w << "\n";
  for (const auto& e : electrodes)
    if (e.id == "E1" || e.id == "E2") out << e.id << " footprint: " << e.footprint.size() << "\n";

  FieldState state = init_state(grid);
  StimulusScenario probe{"probe", {"E1"}, 1.0, 2.0, 0};
  const size_t kicked = apply_stimulus(state, probe, electrodes);
  out << "E1 stimulus perturbs " << kicked << " nodes\n";
  if (kicked < 8 || kicked > 12)
    throw std::runtime_error("E1 stimulus outside the 8..12 node design target");
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"myco-datagen — regenerate the bundled sample data"};
  std::string out_dir = "data";
  std::uint64_t seed = 42;
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--seed", seed, "Design RNG seed");
  CLI11_PARSE(app, argc, argv);

  try {
    const fs::path dir(out_dir);
    fs::create_directories(dir);

    Design d = build_design(seed);
    size_t nodes = 0;
    for (auto m : d.mask) nodes += m;
    std::cout << "design mask: " << nodes << " conductive nodes\n";

    write_png_rgb((dir / "network.png").string(), render_image(d));
    write_text_file((dir / "electrodes.txt").string(), electrodes_text(d));
    write_text_file((dir / "scenarios.txt").string(), scenarios_text(2.0));
    write_text_file((dir / "experiment.cfg").string(), experiment_cfg());

    ConductiveGrid small = make_grid(100, 100, true);
    small.provenance = "synthetic 100x100 full lattice";
    save_grid((dir / "small.grid").string(), small);
    write_text_file((dir / "small_electrodes.txt").string(),
                    "# CI profile electrodes.\nE1 50 30\nE2 50 70\n");
    write_text_file((dir / "small_scenarios.txt").string(),
                    "# CI profile scenarios; radius 10 discs are supercritical "
                    "on an open lattice.\n"
                    "01 E2 1.0 10.0 0\n10 E1 1.0 10.0 0\n11 E1,E2 1.0 10.0 0\n");
    write_text_file((dir / "small.cfg").string(), small_cfg());
    write_text_file((dir / "logger_fixture.csv").string(), logger_fixture());

    std::cout << self_check(dir, d);
    std::cout << "wrote " << out_dir << "/\n";
  } catch (const std::exception& e) {
    std::cerr << "datagen failed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
