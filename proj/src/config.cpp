#include "myco/config.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <set>

#include "myco/errors.hpp"
#include "myco/util.hpp"

namespace fs = std::filesystem;

namespace myco {

namespace {

struct RawConfig {
  // section -> key -> (value, line number); insertion order preserved for
  // error reporting via the separate `order` list.
  std::map<std::string, std::map<std::string, std::pair<std::string, size_t>>> sections;
};

RawConfig parse_ini(const std::string& text, const std::string& source,
                    std::vector<std::string>& issues) {
  RawConfig raw;
  std::string section;
  auto lines = split(text, '\n');
  for (size_t ln = 0; ln < lines.size(); ++ln) {
    std::string line = lines[ln];
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(ln + 1);
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        issues.push_back(where + ": malformed section header '" + line + "'");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      raw.sections[section];
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back(where + ": expected 'key = value', got '" + line + "'");
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      issues.push_back(where + ": empty key");
      continue;
    }
    auto& sec = raw.sections[section];
    if (sec.count(key))
      issues.push_back(where + ": duplicate key '" + section + "." + key + "'");
    else
      sec[key] = {value, ln + 1};
  }
  return raw;
}

// Tracks which keys were consumed so leftovers can be reported as unknown.
class KeyReader {
 public:
  KeyReader(RawConfig& raw, std::vector<std::string>& issues, std::string source)
      : raw_(raw), issues_(issues), source_(std::move(source)) {}

  bool has(const std::string& section, const std::string& key) {
    auto s = raw_.sections.find(section);
    if (s == raw_.sections.end()) return false;
    return s->second.count(key) != 0;
  }

  std::string take(const std::string& section, const std::string& key) {
    consumed_.insert(section + "." + key);
    return raw_.sections.at(section).at(key).first;
  }

  void string_field(const std::string& section, const std::string& key, std::string& out) {
    if (has(section, key)) out = take(section, key);
  }

  void double_field(const std::string& section, const std::string& key, double& out) {
    if (!has(section, key)) return;
    std::string v = take(section, key);
    if (!parse_double(v, out))
      issues_.push_back(source_ + ": " + section + "." + key + " must be a number, got '" + v + "'");
  }

  void int_field(const std::string& section, const std::string& key, long long& out) {
    if (!has(section, key)) return;
    std::string v = take(section, key);
    if (!parse_long(v, out))
      issues_.push_back(source_ + ": " + section + "." + key + " must be an integer, got '" + v +
                        "'");
  }

  void bool_field(const std::string& section, const std::string& key, bool& out) {
    if (!has(section, key)) return;
    std::string v = take(section, key);
    if (v == "1" || v == "true" || v == "on" || v == "yes") out = true;
    else if (v == "0" || v == "false" || v == "off" || v == "no") out = false;
    else
      issues_.push_back(source_ + ": " + section + "." + key + " must be a boolean, got '" + v +
                        "'");
  }

  void report_unknown() {
    for (const auto& [section, keys] : raw_.sections)
      for (const auto& [key, value] : keys)
        if (!consumed_.count(section + "." + key))
          issues_.push_back(source_ + ":" + std::to_string(value.second) + ": unknown key '" +
                            (section.empty() ? key : section + "." + key) + "'");
  }

 private:
  RawConfig& raw_;
  std::vector<std::string>& issues_;
  std::string source_;
  std::set<std::string> consumed_;
};

std::string resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty()) return path;
  fs::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (fs::path(base_dir) / p).lexically_normal().string();
}

}  // namespace

ExperimentConfig validate_config_text(const std::string& text, const std::string& source,
                                      const std::string& base_dir) {
  std::vector<std::string> issues;
  RawConfig raw = parse_ini(text, source, issues);
  KeyReader keys(raw, issues, source);
  ExperimentConfig cfg;
  cfg.config_path = source;

  keys.string_field("grid", "file", cfg.grid_file);
  keys.string_field("grid", "image", cfg.ingest.image);
  long long tmp;
  auto int_into = [&](const char* section, const char* key, auto& field, long long lo,
                      long long hi) {
    tmp = field;
    keys.int_field(section, key, tmp);
    if (tmp < lo || tmp > hi)
      issues.push_back(source + ": " + section + "." + key + " must be in [" +
                       std::to_string(lo) + ", " + std::to_string(hi) + "]");
    else
      field = static_cast<std::remove_reference_t<decltype(field)>>(tmp);
  };
  int_into("grid", "r_min", cfg.ingest.rule.r_min, 0, 255);
  int_into("grid", "g_min", cfg.ingest.rule.g_min, 0, 255);
  int_into("grid", "b_max", cfg.ingest.rule.b_max, 0, 255);
  int_into("grid", "dilate", cfg.ingest.dilate, 0, 64);
  int_into("grid", "rows", cfg.ingest.rows, 1, 1 << 20);
  int_into("grid", "cols", cfg.ingest.cols, 1, 1 << 20);
  keys.string_field("grid", "transpose", cfg.ingest.transpose);

  keys.double_field("model", "D_u", cfg.params.D_u);
  keys.double_field("model", "a", cfg.params.a);
  keys.double_field("model", "b", cfg.params.b);
  keys.double_field("model", "c1", cfg.params.c1);
  keys.double_field("model", "c2", cfg.params.c2);
  keys.double_field("model", "I", cfg.params.I);
  keys.double_field("model", "dt", cfg.params.dt);
  keys.double_field("model", "dx", cfg.params.dx);

  keys.int_field("run", "steps", cfg.steps);
  keys.int_field("run", "cadence", cfg.cadence);
  long long workers = cfg.workers;
  keys.int_field("run", "workers", workers);
  keys.string_field("run", "output", cfg.output_dir);
  long long seed = 0;
  keys.int_field("run", "seed", seed);
  cfg.seed = static_cast<unsigned long long>(seed);

  keys.string_field("electrodes", "layout", cfg.electrode_layout);
  keys.double_field("electrodes", "radius", cfg.electrode_radius);

  keys.string_field("stimuli", "scenarios", cfg.scenario_file);

  keys.double_field("analysis", "prominence", cfg.analysis.prominence);
  keys.double_field("analysis", "window", cfg.analysis.simultaneity_window);
  keys.double_field("analysis", "gap", cfg.analysis.separation_gap);
  keys.double_field("analysis", "activity_threshold", cfg.analysis.activity_threshold);
  keys.double_field("analysis", "display_threshold", cfg.analysis.display_threshold);
  keys.bool_field("analysis", "frames", cfg.analysis.frames);
  keys.bool_field("analysis", "coverage", cfg.analysis.coverage);

  keys.report_unknown();

  // Range and consistency checks (all collected, none throws on its own).
  if (cfg.grid_file.empty() && cfg.ingest.image.empty())
    issues.push_back(source + ": one of grid.file or grid.image is required");
  if (!cfg.grid_file.empty() && !cfg.ingest.image.empty())
    issues.push_back(source + ": grid.file and grid.image are mutually exclusive");
  if (cfg.ingest.transpose != "auto" && cfg.ingest.transpose != "on" &&
      cfg.ingest.transpose != "off")
    issues.push_back(source + ": grid.transpose must be auto, on or off");
  if (cfg.steps <= 0) issues.push_back(source + ": run.steps must be positive");
  if (cfg.cadence < 1) issues.push_back(source + ": run.cadence must be >= 1");
  if (workers < 1 || workers > 256)
    issues.push_back(source + ": run.workers must be in [1, 256]");
  else
    cfg.workers = static_cast<int>(workers);
  if (!(cfg.electrode_radius > 0)) issues.push_back(source + ": electrodes.radius must be positive");
  if (!(cfg.analysis.prominence >= 0)) issues.push_back(source + ": analysis.prominence must be >= 0");
  if (!(cfg.analysis.simultaneity_window > 0))
    issues.push_back(source + ": analysis.window must be positive");
  if (!(cfg.analysis.separation_gap >= 0)) issues.push_back(source + ": analysis.gap must be >= 0");

  try {
    cfg.params.validate();
  } catch (const ValidationError& e) {
    for (const auto& issue : e.issues()) issues.push_back(source + ": model: " + issue);
  }

  // Resolve input paths against the config directory, then require existence.
  cfg.grid_file = resolve(base_dir, cfg.grid_file);
  cfg.ingest.image = resolve(base_dir, cfg.ingest.image);
  cfg.electrode_layout = resolve(base_dir, cfg.electrode_layout);
  cfg.scenario_file = resolve(base_dir, cfg.scenario_file);
  for (const std::string* p : {&cfg.grid_file, &cfg.ingest.image, &cfg.electrode_layout,
                               &cfg.scenario_file}) {
    if (!p->empty() && !fs::exists(*p))
      issues.push_back(source + ": referenced file does not exist: " + *p);
  }

  if (!issues.empty()) throw ValidationError(std::move(issues));
  return cfg;
}

ExperimentConfig validate_config(const std::string& path) {
  std::string text = read_text_file(path);
  std::string base = fs::path(path).parent_path().string();
  ExperimentConfig cfg = validate_config_text(text, path, base);
  cfg.config_path = path;
  return cfg;
}

}  // namespace myco
