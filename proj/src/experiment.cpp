#include "myco/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>

#include "myco/electrodes.hpp"
#include "myco/errors.hpp"
#include "myco/fhn.hpp"
#include "myco/gates.hpp"
#include "myco/metrics.hpp"
#include "myco/pngio.hpp"
#include "myco/spikes.hpp"
#include "myco/util.hpp"
#include "myco/version.hpp"

namespace fs = std::filesystem;

namespace myco {

IngestReport run_ingest(const IngestSpec& spec) {
  IngestReport report;
  RgbImage img = load_image(spec.image);
  BoolMask mask = threshold_to_mask(img, spec.rule);
  report.threshold_pixels = mask.count();
  mask = dilate(mask, spec.dilate);
  report.dilated_pixels = mask.count();

  bool do_transpose = spec.transpose == "on";
  if (spec.transpose == "auto") {
    const bool src_landscape = mask.cols > mask.rows;
    const bool dst_landscape = spec.cols > spec.rows;
    do_transpose = src_landscape != dst_landscape;
  }
  if (do_transpose) mask = transpose(mask);
  report.transposed = do_transpose;

  report.grid = project_to_grid(mask, spec.rows, spec.cols);
  std::ostringstream prov;
  prov << fs::path(spec.image).filename().string() << " r>" << spec.rule.r_min << " g>"
       << spec.rule.g_min << " b<" << spec.rule.b_max << " dilate=" << spec.dilate
       << (do_transpose ? " transposed" : "") << " project=" << spec.rows << "x" << spec.cols;
  report.grid.provenance = prov.str();
  report.conductive_nodes = report.grid.conductive_count();
  return report;
}

std::string manifest_to_text(const RunManifest& m) {
  std::ostringstream out;
  out << "MYCOMANIFEST1\n";
  out << "version " << m.tool_version << "\n";
  out << "config_hash " << to_hex(m.config_hash) << "\n";
  out << "status " << m.status << "\n";
  if (!m.error.empty()) out << "error " << m.error << "\n";
  for (const auto& t : m.timings) out << "timing " << t.stage << " " << format_double(t.ms) << "\n";
  for (const auto& a : m.artifacts)
    out << "artifact " << to_hex(a.checksum) << " " << a.bytes << " " << a.relpath << "\n";
  return out.str();
}

RunManifest load_manifest(const std::string& path) {
  RunManifest m;
  auto lines = split(read_text_file(path), '\n');
  if (lines.empty() || trim(lines[0]) != "MYCOMANIFEST1")
    throw ParseError(path + ": bad manifest magic");
  for (size_t ln = 1; ln < lines.size(); ++ln) {
    std::string line = trim(lines[ln]);
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(ln + 1);
    auto space = line.find(' ');
    const std::string kind = line.substr(0, space);
    const std::string rest = space == std::string::npos ? "" : line.substr(space + 1);
    if (kind == "version") m.tool_version = rest;
    else if (kind == "config_hash") m.config_hash = std::stoull(rest, nullptr, 16);
    else if (kind == "status") m.status = rest;
    else if (kind == "error") m.error = rest;
    else if (kind == "timing") {
      auto sp = rest.rfind(' ');
      if (sp == std::string::npos) throw ParseError(where + ": malformed timing line");
      m.timings.push_back({rest.substr(0, sp), require_double(rest.substr(sp + 1), where)});
    } else if (kind == "artifact") {
      auto s1 = rest.find(' ');
      auto s2 = rest.find(' ', s1 == std::string::npos ? std::string::npos : s1 + 1);
      if (s1 == std::string::npos || s2 == std::string::npos)
        throw ParseError(where + ": malformed artifact line");
      ManifestEntry e;
      e.checksum = std::stoull(rest.substr(0, s1), nullptr, 16);
      e.bytes = static_cast<std::uint64_t>(require_long(rest.substr(s1 + 1, s2 - s1 - 1), where));
      e.relpath = rest.substr(s2 + 1);
      m.artifacts.push_back(std::move(e));
    } else {
      throw ParseError(where + ": unknown manifest line kind '" + kind + "'");
    }
  }
  return m;
}

namespace {

class ExperimentRun {
 public:
  ExperimentRun(const ExperimentConfig& cfg, const LogFn& log) : cfg_(cfg), log_(log) {
    manifest_.tool_version = kToolVersion;
    manifest_.status = "incomplete";
  }

  RunManifest execute() {
    try {
      stage("config", [&] {
        manifest_.config_hash =
            fs::exists(cfg_.config_path) ? fnv1a64_file(cfg_.config_path) : 0;
        fs::create_directories(cfg_.output_dir);
      });
      stage("grid", [&] { prepare_grid(); });
      stage("electrodes", [&] { prepare_electrodes(); });
      for (const auto& scenario : scenarios_)
        stage("scenario:" + scenario.name, [&] { run_scenario(scenario); });
      if (want_gates()) stage("gates", [&] { mine_gates(); });
      manifest_.status = "complete";
      write_manifest();
    } catch (const std::exception& e) {
      std::string what = e.what();
      for (char& c : what)
        if (c == '\n') c = ';';
      manifest_.error = pending_stage_.empty() ? what : ("stage " + pending_stage_ + ": " + what);
      try {
        write_manifest();
      } catch (...) {
        // The original failure is more useful than a secondary manifest error.
      }
      throw;
    }
    return manifest_;
  }

 private:
  template <typename Fn>
  void stage(const std::string& name, Fn&& fn) {
    pending_stage_ = name;
    say("stage " + name);
    auto t0 = std::chrono::steady_clock::now();
    fn();
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    manifest_.timings.push_back({name, ms});
    pending_stage_.clear();
  }

  void say(const std::string& msg) {
    if (log_) log_(msg);
  }

  void prepare_grid() {
    if (!cfg_.grid_file.empty()) {
      grid_ = load_grid(cfg_.grid_file);
    } else {
      IngestReport report = run_ingest(cfg_.ingest);
      say("ingest: " + std::to_string(report.threshold_pixels) + " px after threshold, " +
          std::to_string(report.dilated_pixels) + " px after dilation, " +
          std::to_string(report.conductive_nodes) + " conductive nodes" +
          (report.transposed ? " (transposed)" : ""));
      grid_ = std::move(report.grid);
    }
    if (grid_.conductive_count() == 0) throw ValidationError({"grid has no conductive nodes"});
  }

  void prepare_electrodes() {
    if (!cfg_.electrode_layout.empty()) {
      std::vector<std::string> warnings;
      electrodes_ = place_electrodes(load_electrode_layout(cfg_.electrode_layout), grid_,
                                     cfg_.electrode_radius, &warnings);
      for (const auto& w : warnings) say("warning: " + w);
    }
    if (!cfg_.scenario_file.empty()) {
      scenarios_ = load_scenarios(cfg_.scenario_file);
      std::set<std::string> names;
      for (const auto& s : scenarios_) {
        if (!names.insert(s.name).second)
          throw ValidationError({"duplicate scenario name '" + s.name + "'"});
        if (s.at_iteration < 0 || s.at_iteration >= cfg_.steps)
          throw ValidationError({"scenario '" + s.name + "' stimulates at iteration " +
                                 std::to_string(s.at_iteration) + ", outside [0, " +
                                 std::to_string(cfg_.steps) + ")"});
      }
    } else {
      StimulusScenario rest;
      rest.name = "rest";
      scenarios_ = {rest};  // unstimulated reference run; targets stay empty
    }
  }

  void run_scenario(const StimulusScenario& scenario) {
    const fs::path dir = fs::path(cfg_.output_dir) / scenario.name;
    fs::create_directories(dir);

    FhnEngine engine(grid_, cfg_.params, cfg_.workers);
    if (scenario.at_iteration == 0 && !scenario.targets.empty()) {
      const size_t n = apply_stimulus(engine.mutable_state(), scenario, electrodes_);
      say("scenario " + scenario.name + ": perturbed " + std::to_string(n) + " nodes");
    }

    TraceRecorder recorder(electrodes_, cfg_.cadence);
    std::vector<long long> act_iters;
    std::vector<long long> act_counts;
    CoverageMap coverage = make_coverage(grid_);

    RunHooks hooks;
    hooks.observe_every = cfg_.cadence;
    if (!electrodes_.empty())
      hooks.observers.push_back([&](const FieldState& s) { recorder.sample(s); });
    hooks.observers.push_back([&](const FieldState& s) {
      act_iters.push_back(s.iteration);
      act_counts.push_back(activity(s, cfg_.analysis.activity_threshold));
    });
    if (cfg_.analysis.frames) {
      hooks.observers.push_back([&, dir](const FieldState& s) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%09lld.png", static_cast<long long>(s.iteration));
        const fs::path frames = dir / "frames";
        fs::create_directories(frames);
        RgbImage img = render_snapshot(s, cfg_.analysis.display_threshold);
        write_png_rgb((frames / name).string(), img);
        record_artifact(frames / name);
      });
    }
    if (cfg_.analysis.coverage) {
      hooks.every_step = [&](const FieldState& s, std::span<const std::int32_t> active) {
        coverage_accumulate_active(coverage, s, active, cfg_.analysis.activity_threshold);
      };
    }

    if (scenario.at_iteration > 0) {
      engine.run(scenario.at_iteration, hooks);
      if (!scenario.targets.empty()) {
        const size_t n = apply_stimulus(engine.mutable_state(), scenario, electrodes_);
        say("scenario " + scenario.name + ": perturbed " + std::to_string(n) + " nodes at iteration " +
            std::to_string(scenario.at_iteration));
      }
      engine.run(cfg_.steps - scenario.at_iteration, hooks);
    } else {
      engine.run(cfg_.steps, hooks);
    }

    if (!electrodes_.empty()) {
      write_artifact(dir / "traces.csv", recorder.to_csv());
      traces_.emplace_back(scenario.name, std::move(recorder));
    }
    write_artifact(dir / "activity.csv", activity_csv(act_iters, act_counts));
    if (cfg_.analysis.coverage) {
      coverage_finalize(coverage);
      write_artifact(dir / "coverage.csv", coverage_csv(coverage));
      write_png_gray((dir / "coverage.png").string(), render_coverage(coverage), coverage.cols,
                     coverage.rows);
      record_artifact(dir / "coverage.png");
    }
  }

  bool want_gates() const {
    if (electrodes_.empty()) return false;
    std::set<std::string> names;
    for (const auto& [name, recorder] : traces_) names.insert(name);
    return names.count(kScenario01) && names.count(kScenario10) && names.count(kScenario11);
  }

  void mine_gates() {
    const TraceRecorder* by_name[3] = {nullptr, nullptr, nullptr};
    const std::string keys[3] = {kScenario01, kScenario10, kScenario11};
    for (const auto& [name, recorder] : traces_)
      for (int k = 0; k < 3; ++k)
        if (name == keys[k]) by_name[k] = &recorder;

    std::vector<ScenarioSpikes> all;
    const auto& electrodes = by_name[0]->electrodes();
    for (size_t e = 0; e < electrodes.size(); ++e) {
      ScenarioSpikes spikes;
      spikes.electrode = electrodes[e].id;
      for (int k = 0; k < 3; ++k) {
        const TraceRecorder& rec = *by_name[k];
        std::vector<double> iters;
        if (rec.samples()[e].size() >= 3) {  // shorter traces cannot hold a peak
          SpikeTrain train = detect_spikes(rec.samples()[e], cfg_.analysis.prominence,
                                           spikes.electrode + "/" + keys[k]);
          for (double idx : train.times)
            iters.push_back(static_cast<double>(rec.iterations()[static_cast<size_t>(idx)]));
        }
        spikes.times[keys[k]] = std::move(iters);
      }
      all.push_back(std::move(spikes));
    }

    GateCensus census =
        gate_census(all, cfg_.analysis.simultaneity_window, cfg_.analysis.separation_gap);
    const fs::path dir = fs::path(cfg_.output_dir) / "gates";
    fs::create_directories(dir);
    write_artifact(dir / "events.csv", gate_events_csv(census));
    write_artifact(dir / "census.csv", gate_census_csv(census));
    write_artifact(dir / "summary.txt", gate_summary(census));
    say("gates: " + std::to_string(census.events.size()) + " events");
  }

  void write_artifact(const fs::path& path, const std::string& content) {
    write_text_file(path.string(), content);
    record_artifact(path);
  }

  void record_artifact(const fs::path& path) {
    ManifestEntry entry;
    entry.relpath = fs::path(path).lexically_relative(cfg_.output_dir).generic_string();
    entry.checksum = fnv1a64_file(path.string());
    entry.bytes = static_cast<std::uint64_t>(fs::file_size(path));
    manifest_.artifacts.push_back(std::move(entry));
  }

  void write_manifest() {
    const fs::path path = fs::path(cfg_.output_dir) / "manifest.txt";
    write_text_file(path.string(), manifest_to_text(manifest_));
  }

  const ExperimentConfig& cfg_;
  const LogFn& log_;
  RunManifest manifest_;
  std::string pending_stage_;
  ConductiveGrid grid_;
  std::vector<Electrode> electrodes_;
  std::vector<StimulusScenario> scenarios_;
  std::vector<std::pair<std::string, TraceRecorder>> traces_;
};

}  // namespace

RunManifest run_experiment(const ExperimentConfig& config, const LogFn& log) {
  ExperimentRun run(config, log);
  return run.execute();
}

}  // namespace myco
