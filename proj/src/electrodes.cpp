#include "myco/electrodes.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "myco/errors.hpp"
#include "myco/util.hpp"

namespace myco {

namespace {

// Conductive nodes within strict Euclidean distance `radius` of (row, col),
// ascending flat order. Shared by sensing footprints and stimulus discs.
std::vector<std::int32_t> disc_nodes(const ConductiveGrid& grid, int row, int col, double radius) {
  std::vector<std::int32_t> nodes;
  const int reach = static_cast<int>(radius) + 1;
  const double r2 = radius * radius;
  for (int dr = -reach; dr <= reach; ++dr) {
    for (int dc = -reach; dc <= reach; ++dc) {
      if (dr * dr + dc * dc >= r2) continue;  // strict: |y - x| < radius
      int r = row + dr, c = col + dc;
      if (!grid.in_bounds(r, c) || !grid.conductive(r, c)) continue;
      nodes.push_back(r * grid.cols + c);
    }
  }
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

std::vector<std::string> split_nonempty_lines(const std::string& text) {
  std::vector<std::string> lines = split(text, '\n');
  for (auto& l : lines) {
    if (auto hash = l.find('#'); hash != std::string::npos) l.erase(hash);
    l = trim(l);
  }
  return lines;
}

}  // namespace

std::vector<LayoutEntry> parse_electrode_layout(const std::string& text,
                                                const std::string& source) {
  std::vector<LayoutEntry> entries;
  auto lines = split_nonempty_lines(text);
  for (size_t ln = 0; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    std::istringstream row(lines[ln]);
    LayoutEntry e;
    std::string rtok, ctok, extra;
    if (!(row >> e.id >> rtok >> ctok) || (row >> extra))
      throw ParseError(source + ":" + std::to_string(ln + 1) +
                       ": expected '<id> <row> <col>', got '" + lines[ln] + "'");
    e.row = static_cast<int>(require_long(rtok, source + ":" + std::to_string(ln + 1) + ": row"));
    e.col = static_cast<int>(require_long(ctok, source + ":" + std::to_string(ln + 1) + ": col"));
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<LayoutEntry> load_electrode_layout(const std::string& path) {
  return parse_electrode_layout(read_text_file(path), path);
}

std::vector<Electrode> place_electrodes(const std::vector<LayoutEntry>& layout,
                                        const ConductiveGrid& grid, double radius,
                                        std::vector<std::string>* warnings) {
  std::vector<std::string> issues;
  std::set<std::string> seen;
  for (const auto& e : layout) {
    if (!seen.insert(e.id).second) issues.push_back("duplicate electrode id " + e.id);
    if (!grid.in_bounds(e.row, e.col))
      issues.push_back("electrode " + e.id + " at (" + std::to_string(e.row) + "," +
                       std::to_string(e.col) + ") is outside the " + std::to_string(grid.rows) +
                       "x" + std::to_string(grid.cols) + " grid");
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));

  std::vector<Electrode> electrodes;
  electrodes.reserve(layout.size());
  for (const auto& e : layout) {
    Electrode el;
    el.id = e.id;
    el.row = e.row;
    el.col = e.col;
    el.radius = radius;
    el.footprint = disc_nodes(grid, e.row, e.col, radius);
    if (el.footprint.empty() && warnings)
      warnings->push_back("electrode " + el.id + " has no conductive node in its footprint");
    electrodes.push_back(std::move(el));
  }
  return electrodes;
}

std::vector<StimulusScenario> parse_scenarios(const std::string& text, const std::string& source) {
  std::vector<StimulusScenario> scenarios;
  auto lines = split_nonempty_lines(text);
  for (size_t ln = 0; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    std::istringstream row(lines[ln]);
    std::string name, targets, ampl, rad, at;
    row >> name >> targets >> ampl >> rad >> at;
    const std::string where = source + ":" + std::to_string(ln + 1);
    if (targets.empty()) throw ParseError(where + ": expected '<name> <targets> ...'");
    StimulusScenario s;
    s.name = name;
    for (auto& t : split(targets, ',')) {
      std::string id = trim(t);
      if (!id.empty()) s.targets.push_back(id);
    }
    if (s.targets.empty()) throw ParseError(where + ": no stimulation targets");
    if (!ampl.empty()) s.amplitude = require_double(ampl, where + ": amplitude");
    if (!rad.empty()) s.footprint_radius = require_double(rad, where + ": radius");
    if (!at.empty()) s.at_iteration = require_long(at, where + ": at_iteration");
    scenarios.push_back(std::move(s));
  }
  return scenarios;
}

std::vector<StimulusScenario> load_scenarios(const std::string& path) {
  return parse_scenarios(read_text_file(path), path);
}

size_t apply_stimulus(FieldState& state, const StimulusScenario& scenario,
                      const std::vector<Electrode>& electrodes) {
  const ConductiveGrid& grid = *state.grid;
  std::set<std::int32_t> touched;
  for (const auto& target : scenario.targets) {
    auto it = std::find_if(electrodes.begin(), electrodes.end(),
                           [&](const Electrode& e) { return e.id == target; });
    if (it == electrodes.end())
      throw ValidationError({"scenario '" + scenario.name + "': unknown target electrode " + target});
    for (std::int32_t n : disc_nodes(grid, it->row, it->col, scenario.footprint_radius))
      touched.insert(n);
  }
  for (std::int32_t n : touched) state.u[n] = scenario.amplitude;
  return touched.size();
}

double read_potential(const FieldState& state, const Electrode& electrode) {
  double sum = 0.0;
  for (std::int32_t n : electrode.footprint) sum += state.u[n] - state.v[n];
  return sum;
}

bool natural_id_less(const std::string& a, const std::string& b) {
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    bool da = std::isdigit(static_cast<unsigned char>(a[i]));
    bool db = std::isdigit(static_cast<unsigned char>(b[j]));
    if (da && db) {
      size_t i2 = i, j2 = j;
      while (i2 < a.size() && std::isdigit(static_cast<unsigned char>(a[i2]))) ++i2;
      while (j2 < b.size() && std::isdigit(static_cast<unsigned char>(b[j2]))) ++j2;
      // Compare numeric runs by value (longer run of significant digits wins).
      std::string_view na(a.data() + i, i2 - i), nb(b.data() + j, j2 - j);
      std::string_view sa = na.substr(std::min(na.find_first_not_of('0'), na.size()));
      std::string_view sb = nb.substr(std::min(nb.find_first_not_of('0'), nb.size()));
      if (sa.size() != sb.size()) return sa.size() < sb.size();
      if (sa != sb) return sa < sb;
      i = i2;
      j = j2;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return a.size() - i < b.size() - j;
}

TraceRecorder::TraceRecorder(std::vector<Electrode> electrodes, long long cadence)
    : electrodes_(std::move(electrodes)), cadence_(cadence) {
  std::sort(electrodes_.begin(), electrodes_.end(),
            [](const Electrode& x, const Electrode& y) { return natural_id_less(x.id, y.id); });
  samples_.resize(electrodes_.size());
}

void TraceRecorder::sample(const FieldState& state) {
  iterations_.push_back(state.iteration);
  for (size_t k = 0; k < electrodes_.size(); ++k)
    samples_[k].push_back(read_potential(state, electrodes_[k]));
}

std::string TraceRecorder::to_csv() const {
  std::ostringstream out;
  out << "iteration";
  for (const auto& e : electrodes_) out << "," << e.id;
  out << "\n";
  for (size_t s = 0; s < iterations_.size(); ++s) {
    out << iterations_[s];
    for (size_t k = 0; k < electrodes_.size(); ++k) out << "," << format_double(samples_[k][s]);
    out << "\n";
  }
  return out.str();
}

TraceTable load_traces_csv(const std::string& path) {
  std::string text = read_text_file(path);
  auto lines = split(text, '\n');
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ParseError(path + ": empty trace file");
  auto header = split(lines[0], ',');
  if (header.size() < 2 || trim(header[0]) != "iteration")
    throw ParseError(path + ": expected header 'iteration,<electrode>,...'");
  TraceTable table;
  for (size_t c = 1; c < header.size(); ++c) table.ids.push_back(trim(header[c]));
  table.potentials.resize(table.ids.size());
  for (size_t ln = 1; ln < lines.size(); ++ln) {
    if (trim(lines[ln]).empty()) continue;
    auto cells = split(lines[ln], ',');
    if (cells.size() != header.size())
      throw ParseError(path + ":" + std::to_string(ln + 1) + ": expected " +
                       std::to_string(header.size()) + " columns, got " +
                       std::to_string(cells.size()));
    const std::string where = path + ":" + std::to_string(ln + 1);
    table.iterations.push_back(require_long(cells[0], where + ": iteration"));
    for (size_t c = 1; c < cells.size(); ++c)
      table.potentials[c - 1].push_back(
          require_double(cells[c], where + " column " + std::to_string(c + 1)));
  }
  return table;
}

}  // namespace myco
