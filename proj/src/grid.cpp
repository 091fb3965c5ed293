#include "myco/grid.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "myco/errors.hpp"
#include "myco/util.hpp"

namespace myco {

size_t ConductiveGrid::conductive_count() const {
  return static_cast<size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

ConductiveGrid make_grid(int rows, int cols, bool conductive) {
  ConductiveGrid g;
  g.rows = rows;
  g.cols = cols;
  g.mask.assign(static_cast<size_t>(rows) * cols, conductive ? 1 : 0);
  return g;
}

ConductiveGrid grid_from_mask(const BoolMask& mask, std::string provenance) {
  ConductiveGrid g;
  g.rows = mask.rows;
  g.cols = mask.cols;
  g.mask = mask.cells;
  g.provenance = std::move(provenance);
  return g;
}

ConductiveGrid project_to_grid(const BoolMask& mask, int target_rows, int target_cols) {
  ConductiveGrid g = make_grid(target_rows, target_cols);
  const long H = mask.rows, W = mask.cols;
  const long R = target_rows, C = target_cols;
  for (long i = 0; i < R; ++i) {
    long r0 = (i * H) / R;
    long r1 = ((i + 1) * H + R - 1) / R;  // ceil
    for (long j = 0; j < C; ++j) {
      long c0 = (j * W) / C;
      long c1 = ((j + 1) * W + C - 1) / C;
      bool any = false;
      for (long r = r0; r < r1 && !any; ++r)
        for (long c = c0; c < c1 && !any; ++c) any = mask.at(static_cast<int>(r), static_cast<int>(c));
      if (any) g.mask[static_cast<size_t>(i) * C + j] = 1;
    }
  }
  return g;
}

ComponentInfo connected_components(const ConductiveGrid& grid) {
  ComponentInfo info;
  info.labels.assign(grid.node_count(), -1);
  std::deque<size_t> queue;
  for (size_t start = 0; start < grid.node_count(); ++start) {
    if (!grid.mask[start] || info.labels[start] != -1) continue;
    int label = static_cast<int>(info.sizes.size());
    info.sizes.push_back(0);
    info.labels[start] = label;
    queue.push_back(start);
    while (!queue.empty()) {
      size_t n = queue.front();
      queue.pop_front();
      ++info.sizes[label];
      int r = static_cast<int>(n / grid.cols);
      int c = static_cast<int>(n % grid.cols);
      const int dr[4] = {-1, 1, 0, 0};
      const int dc[4] = {0, 0, -1, 1};
      for (int k = 0; k < 4; ++k) {
        int rr = r + dr[k], cc = c + dc[k];
        if (!grid.in_bounds(rr, cc)) continue;
        size_t m = static_cast<size_t>(rr) * grid.cols + cc;
        if (grid.mask[m] && info.labels[m] == -1) {
          info.labels[m] = label;
          queue.push_back(m);
        }
      }
    }
  }
  return info;
}

// Layout (all text, LF line endings):
//   MYCOGRID1
//   rows <R>
//   cols <C>
//   provenance <free text to end of line, may be empty>
//   runs <K>
//   <K whitespace-separated run lengths>
// Runs alternate non-conductive, conductive, non-conductive, ... over the
// row-major flattened mask and must sum to rows*cols. The first run may be 0
// (grid starting with a conductive node).
void save_grid(const std::string& path, const ConductiveGrid& grid) {
  std::vector<size_t> runs;
  std::uint8_t want = 0;  // first run counts non-conductive cells
  size_t n = grid.node_count();
  size_t i = 0;
  while (i < n) {
    size_t len = 0;
    while (i < n && grid.mask[i] == want) {
      ++len;
      ++i;
    }
    runs.push_back(len);
    want ^= 1;
  }
  if (runs.empty()) runs.push_back(0);

  std::ostringstream out;
  out << "MYCOGRID1\n";
  out << "rows " << grid.rows << "\n";
  out << "cols " << grid.cols << "\n";
  out << "provenance " << grid.provenance << "\n";
  out << "runs " << runs.size() << "\n";
  for (size_t k = 0; k < runs.size(); ++k) {
    out << runs[k];
    out << ((k + 1) % 16 == 0 || k + 1 == runs.size() ? '\n' : ' ');
  }
  write_text_file(path, out.str());
}

ConductiveGrid load_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  auto need_line = [&](const char* what) {
    if (!std::getline(in, line)) throw ParseError(path + ": truncated header (missing " + what + ")");
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };
  need_line("magic");
  if (line != "MYCOGRID1") throw ParseError(path + ": bad magic '" + line + "'");
  need_line("rows");
  if (line.rfind("rows ", 0) != 0) throw ParseError(path + ": expected 'rows'");
  long rows = require_long(line.substr(5), path + ": rows");
  need_line("cols");
  if (line.rfind("cols ", 0) != 0) throw ParseError(path + ": expected 'cols'");
  long cols = require_long(line.substr(5), path + ": cols");
  need_line("provenance");
  if (line.rfind("provenance", 0) != 0) throw ParseError(path + ": expected 'provenance'");
  std::string provenance = line.size() > 11 ? line.substr(11) : std::string();
  need_line("runs");
  if (line.rfind("runs ", 0) != 0) throw ParseError(path + ": expected 'runs'");
  long run_count = require_long(line.substr(5), path + ": runs");
  if (rows <= 0 || cols <= 0) throw ParseError(path + ": non-positive dimensions");
  if (run_count < 0) throw ParseError(path + ": negative run count");

  ConductiveGrid g = make_grid(static_cast<int>(rows), static_cast<int>(cols));
  g.provenance = provenance;
  size_t total = 0;
  std::uint8_t value = 0;
  for (long k = 0; k < run_count; ++k) {
    long len = 0;
    if (!(in >> len) || len < 0) throw ParseError(path + ": bad run length at index " + std::to_string(k));
    if (total + static_cast<size_t>(len) > g.node_count())
      throw ParseError(path + ": runs exceed rows*cols");
    std::fill(g.mask.begin() + total, g.mask.begin() + total + len, value);
    total += static_cast<size_t>(len);
    value ^= 1;
  }
  if (total != g.node_count()) throw ParseError(path + ": runs sum to " + std::to_string(total) +
                                                ", expected " + std::to_string(g.node_count()));
  return g;
}

void save_grid_pgm(const std::string& path, const ConductiveGrid& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "P5\n" << grid.cols << " " << grid.rows << "\n255\n";
  std::vector<std::uint8_t> row(grid.cols);
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) row[c] = grid.conductive(r, c) ? 255 : 0;
    out.write(reinterpret_cast<const char*>(row.data()), grid.cols);
  }
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace myco
