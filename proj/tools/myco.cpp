// myco — excitable-medium simulation and analysis toolkit.
//
// Subcommands: ingest, simulate, analyze, gates, run, version.
// Exit codes: 0 success, 2 validation/parse failure, 3 integration
// divergence, 4 I/O failure (1 for anything unexpected).

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "myco/config.hpp"
#include "myco/electrodes.hpp"
#include "myco/errors.hpp"
#include "myco/experiment.hpp"
#include "myco/fhn.hpp"
#include "myco/gates.hpp"
#include "myco/grid.hpp"
#include "myco/metrics.hpp"
#include "myco/pngio.hpp"
#include "myco/spikes.hpp"
#include "myco/util.hpp"
#include "myco/version.hpp"

namespace fs = std::filesystem;
using namespace myco;

namespace {

struct IngestArgs {
  std::string image, out, pgm;
  int r_min = 170, g_min = 170, b_max = 200;
  int dilate_iters = 1;
  int rows = 364, cols = 985;
  std::string transpose = "auto";
};

void cmd_ingest(const IngestArgs& args) {
  IngestSpec spec;
  spec.image = args.image;
  spec.rule = {args.r_min, args.g_min, args.b_max};
  spec.dilate = args.dilate_iters;
  spec.rows = args.rows;
  spec.cols = args.cols;
  spec.transpose = args.transpose;
  IngestReport report = run_ingest(spec);
  std::cout << "threshold: " << report.threshold_pixels << " pixels\n";
  std::cout << "dilate x" << spec.dilate << ": " << report.dilated_pixels << " pixels\n";
  if (report.transposed) std::cout << "transposed source mask\n";
  std::cout << "projected: " << report.conductive_nodes << " conductive nodes on " << spec.rows
            << "x" << spec.cols << "\n";
  save_grid(args.out, report.grid);
  std::cout << "wrote " << args.out << "\n";
  if (!args.pgm.empty()) {
    save_grid_pgm(args.pgm, report.grid);
    std::cout << "wrote " << args.pgm << "\n";
  }
}

struct SimulateArgs {
  std::string grid, out = "out";
  long long steps = 60000;
  long long cadence = 100;
  long long frames_every = 0;
  int workers = 1;
  FhnParams params;
  std::string electrodes, scenarios, scenario, state_out;
  double radius = 2.0;
  double activity_threshold = 0.1, display_threshold = 0.04;
  bool no_coverage = false;
};

void cmd_simulate(const SimulateArgs& args) {
  args.params.validate();
  if (args.steps <= 0) throw ValidationError({"--steps must be positive"});
  if (args.cadence < 1) throw ValidationError({"--cadence must be >= 1"});

  ConductiveGrid grid = load_grid(args.grid);
  std::vector<Electrode> electrodes;
  if (!args.electrodes.empty()) {
    std::vector<std::string> warnings;
    electrodes = place_electrodes(load_electrode_layout(args.electrodes), grid, args.radius,
                                  &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  }

  FhnEngine engine(grid, args.params, args.workers);
  if (!args.scenarios.empty()) {
    auto scenarios = load_scenarios(args.scenarios);
    const StimulusScenario* chosen = nullptr;
    if (!args.scenario.empty()) {
      for (const auto& s : scenarios)
        if (s.name == args.scenario) chosen = &s;
      if (!chosen)
        throw ValidationError({"scenario '" + args.scenario + "' not found in " + args.scenarios});
    } else if (scenarios.size() == 1) {
      chosen = &scenarios.front();
    } else {
      throw ValidationError({"--scenario is required when the scenario file lists several"});
    }
    if (chosen->at_iteration != 0)
      throw ValidationError({"simulate only supports at_iteration 0; use `run` for staged stimuli"});
    const size_t n = apply_stimulus(engine.mutable_state(), *chosen, electrodes);
    std::cout << "scenario " << chosen->name << ": perturbed " << n << " nodes\n";
  }

  fs::create_directories(args.out);
  TraceRecorder recorder(electrodes, args.cadence);
  std::vector<long long> act_iters, act_counts;
  CoverageMap coverage = make_coverage(grid);

  RunHooks hooks;
  hooks.observe_every = args.cadence;
  if (!electrodes.empty())
    hooks.observers.push_back([&](const FieldState& s) { recorder.sample(s); });
  hooks.observers.push_back([&](const FieldState& s) {
    act_iters.push_back(s.iteration);
    act_counts.push_back(activity(s, args.activity_threshold));
  });
  if (args.frames_every > 0) {
    const fs::path frames = fs::path(args.out) / "frames";
    fs::create_directories(frames);
    hooks.observers.push_back([&, frames](const FieldState& s) {
      if (s.iteration % args.frames_every != 0) return;
      char name[32];
      std::snprintf(name, sizeof name, "frame_%09lld.png", static_cast<long long>(s.iteration));
      write_png_rgb((frames / name).string(), render_snapshot(s, args.display_threshold));
    });
  }
  if (!args.no_coverage) {
    hooks.every_step = [&](const FieldState& s, std::span<const std::int32_t> active) {
      coverage_accumulate_active(coverage, s, active, args.activity_threshold);
    };
  }

  engine.run(args.steps, hooks);

  if (!electrodes.empty()) write_text_file((fs::path(args.out) / "traces.csv").string(), recorder.to_csv());
  write_text_file((fs::path(args.out) / "activity.csv").string(), activity_csv(act_iters, act_counts));
  if (!args.no_coverage) {
    coverage_finalize(coverage);
    write_text_file((fs::path(args.out) / "coverage.csv").string(), coverage_csv(coverage));
    write_png_gray((fs::path(args.out) / "coverage.png").string(), render_coverage(coverage),
                   coverage.cols, coverage.rows);
  }
  if (!args.state_out.empty()) save_state(args.state_out, engine.state());
  std::cout << "ran " << args.steps << " steps; final activity "
            << activity(engine.state(), args.activity_threshold) << "\n";
}

struct AnalyzeArgs {
  std::string input, out = "analysis";
  double prominence = 0.03;
  double bin_width = 60.0;
  std::string windows = "before=0:1800,during=1800:3600,after=3600:5400";
  double amp_min = -std::numeric_limits<double>::infinity();
  double amp_max = std::numeric_limits<double>::infinity();
  long long median_window = 0;  // 0 = no baseline removal
};

std::vector<double> remove_median_baseline(const std::vector<double>& xs, long long window) {
  // Moving-median subtraction for drifting experimental traces.
  std::vector<double> out(xs.size());
  const long long half = window / 2;
  std::vector<double> buf;
  for (size_t i = 0; i < xs.size(); ++i) {
    const size_t lo = i > static_cast<size_t>(half) ? i - half : 0;
    const size_t hi = std::min(xs.size(), i + static_cast<size_t>(half) + 1);
    buf.assign(xs.begin() + lo, xs.begin() + hi);
    auto mid = buf.begin() + buf.size() / 2;
    std::nth_element(buf.begin(), mid, buf.end());
    double median = *mid;
    if (buf.size() % 2 == 0) {
      auto lower = std::max_element(buf.begin(), mid);
      median = (median + *lower) / 2.0;
    }
    out[i] = xs[i] - median;
  }
  return out;
}

void cmd_analyze(const AnalyzeArgs& args) {
  if (args.amp_min > args.amp_max) throw ValidationError({"--amp-min exceeds --amp-max"});
  auto windows = parse_windows(args.windows);
  auto logs = load_logger_csv(args.input);
  fs::create_directories(args.out);

  std::vector<std::pair<std::string, Histogram>> histograms;
  std::ostringstream window_csv;
  window_csv << "channel";
  for (const auto& w : windows) window_csv << "," << w.label;
  window_csv << "\n";

  for (const auto& log : logs) {
    std::vector<double> values = log.values;
    if (args.median_window > 0) values = remove_median_baseline(values, args.median_window);
    SpikeTrain train = detect_spikes(values, args.prominence, log.label);
    // Map sample indices to the file's time column and apply the band filter.
    SpikeTrain mapped;
    mapped.source = train.source;
    for (size_t k = 0; k < train.size(); ++k) {
      const double amp = train.amplitudes[k];
      if (amp < args.amp_min || amp > args.amp_max) continue;
      mapped.times.push_back(log.times[static_cast<size_t>(train.times[k])]);
      mapped.amplitudes.push_back(amp);
      mapped.prominences.push_back(train.prominences[k]);
    }

    std::string safe = log.label;
    for (char& c : safe)
      if (c == '/' || c == ' ') c = '_';
    write_text_file((fs::path(args.out) / ("spikes_" + safe + ".csv")).string(),
                    spikes_csv(mapped));

    histograms.emplace_back(log.label, isi_histogram(inter_spike_intervals(mapped), args.bin_width));

    WindowReport report = count_in_windows(mapped, windows);
    window_csv << log.label;
    for (long long c : report.counts) window_csv << "," << c;
    window_csv << "\n";
    std::cout << log.label << ": " << mapped.size() << " spikes\n";
  }

  write_text_file((fs::path(args.out) / "isi_histogram.csv").string(), histogram_csv(histograms));
  write_text_file((fs::path(args.out) / "windows.csv").string(), window_csv.str());
  std::cout << "wrote " << args.out << "/{spikes_*.csv,isi_histogram.csv,windows.csv}\n";
}

struct GatesArgs {
  std::string run01, run10, run11, out = "gates";
  double window = 200, gap = 1000, prominence = 0.03;
};

void cmd_gates(const GatesArgs& args) {
  const std::string keys[3] = {kScenario01, kScenario10, kScenario11};
  const std::string paths[3] = {args.run01, args.run10, args.run11};
  TraceTable tables[3];
  for (int k = 0; k < 3; ++k) tables[k] = load_traces_csv(paths[k]);
  for (int k = 1; k < 3; ++k)
    if (tables[k].ids != tables[0].ids)
      throw ValidationError({"trace files do not share the same electrode column set: " +
                             paths[0] + " vs " + paths[k]});

  std::vector<ScenarioSpikes> all;
  for (size_t e = 0; e < tables[0].ids.size(); ++e) {
    ScenarioSpikes spikes;
    spikes.electrode = tables[0].ids[e];
    for (int k = 0; k < 3; ++k) {
      std::vector<double> iters;
      if (tables[k].potentials[e].size() >= 3) {
        SpikeTrain train =
            detect_spikes(tables[k].potentials[e], args.prominence, spikes.electrode);
        for (double idx : train.times)
          iters.push_back(static_cast<double>(tables[k].iterations[static_cast<size_t>(idx)]));
      }
      spikes.times[keys[k]] = std::move(iters);
    }
    all.push_back(std::move(spikes));
  }

  GateCensus census = gate_census(all, args.window, args.gap);
  fs::create_directories(args.out);
  write_text_file((fs::path(args.out) / "events.csv").string(), gate_events_csv(census));
  write_text_file((fs::path(args.out) / "census.csv").string(), gate_census_csv(census));
  write_text_file((fs::path(args.out) / "summary.txt").string(), gate_summary(census));
  std::cout << gate_summary(census);
}

struct RunArgs {
  std::string config, output;
  int workers = 0;  // 0 = take from config
};

void cmd_run(const RunArgs& args) {
  ExperimentConfig cfg = validate_config(args.config);
  if (!args.output.empty()) {
    cfg.output_dir = args.output;
  } else if (const char* env = std::getenv("MYCO_OUTPUT_DIR"); env && *env) {
    cfg.output_dir = env;
  }
  if (args.workers > 0) cfg.workers = args.workers;
  RunManifest manifest =
      run_experiment(cfg, [](const std::string& msg) { std::cerr << msg << "\n"; });
  std::cout << "run complete: " << manifest.artifacts.size() << " artifacts in " << cfg.output_dir
            << " (manifest.txt written)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kToolName) + " — excitable-medium simulator and analysis toolkit"};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* cmd_i = app.add_subcommand("ingest", "Convert a network image into a conductive grid");
  cmd_i->add_option("--image", ingest.image, "Source PNG or binary PPM")->required();
  cmd_i->add_option("--r-min", ingest.r_min, "Red channel threshold (exclusive)");
  cmd_i->add_option("--g-min", ingest.g_min, "Green channel threshold (exclusive)");
  cmd_i->add_option("--b-max", ingest.b_max, "Blue channel ceiling (exclusive)");
  cmd_i->add_option("--dilate", ingest.dilate_iters, "Dilation iterations");
  cmd_i->add_option("--rows", ingest.rows, "Target grid rows");
  cmd_i->add_option("--cols", ingest.cols, "Target grid columns");
  cmd_i->add_option("--transpose", ingest.transpose, "auto|on|off")
      ->check(CLI::IsMember({"auto", "on", "off"}));
  cmd_i->add_option("--out", ingest.out, "Output grid file")->required();
  cmd_i->add_option("--pgm", ingest.pgm, "Also write a P5 grey-map for inspection");

  SimulateArgs sim;
  auto* cmd_s = app.add_subcommand("simulate", "Integrate the model on a grid");
  cmd_s->add_option("--grid", sim.grid, "Grid file (MYCOGRID1)")->required();
  cmd_s->add_option("--steps", sim.steps, "Number of Euler steps");
  cmd_s->add_option("--cadence", sim.cadence, "Observer cadence in steps");
  cmd_s->add_option("--frames-every", sim.frames_every, "Write snapshot PNGs every N steps (0=off)");
  cmd_s->add_option("--workers", sim.workers, "Worker threads");
  cmd_s->add_option("--Du", sim.params.D_u, "Conductance D_u");
  cmd_s->add_option("--a", sim.params.a, "Excitation threshold a");
  cmd_s->add_option("--b", sim.params.b, "Recovery rate b");
  cmd_s->add_option("--c1", sim.params.c1, "Cubic coefficient c1");
  cmd_s->add_option("--c2", sim.params.c2, "Coupling coefficient c2");
  cmd_s->add_option("--I", sim.params.I, "External current I");
  cmd_s->add_option("--dt", sim.params.dt, "Time step");
  cmd_s->add_option("--dx", sim.params.dx, "Grid spacing");
  cmd_s->add_option("--electrodes", sim.electrodes, "Electrode layout file");
  cmd_s->add_option("--radius", sim.radius, "Electrode sensing radius");
  cmd_s->add_option("--scenarios", sim.scenarios, "Scenario file");
  cmd_s->add_option("--scenario", sim.scenario, "Scenario name to apply");
  cmd_s->add_option("--state-out", sim.state_out, "Write final state (MYCOSTATE1)");
  cmd_s->add_option("--activity-threshold", sim.activity_threshold, "Activity/coverage threshold");
  cmd_s->add_option("--display-threshold", sim.display_threshold, "Snapshot display threshold");
  cmd_s->add_flag("--no-coverage", sim.no_coverage, "Skip coverage accumulation");
  cmd_s->add_option("--out", sim.out, "Output directory");

  AnalyzeArgs ana;
  auto* cmd_a = app.add_subcommand("analyze", "Spike analysis of a logger CSV");
  cmd_a->add_option("--input", ana.input, "Logger CSV (time_s,Ch1-2,...)")->required();
  cmd_a->add_option("--prominence", ana.prominence, "Spike prominence threshold");
  cmd_a->add_option("--bin-width", ana.bin_width, "ISI histogram bin width (seconds)");
  cmd_a->add_option("--windows", ana.windows, "label=start:end,... (seconds)");
  cmd_a->add_option("--amp-min", ana.amp_min, "Keep spikes with amplitude >= this");
  cmd_a->add_option("--amp-max", ana.amp_max, "Keep spikes with amplitude <= this");
  cmd_a->add_option("--median-baseline", ana.median_window,
                    "Subtract a moving median of this window (samples, 0=off)");
  cmd_a->add_option("--out", ana.out, "Output directory");

  GatesArgs gates;
  auto* cmd_g = app.add_subcommand("gates", "Mine Boolean gates from three scenario trace CSVs");
  cmd_g->add_option("--run01", gates.run01, "Traces for input pair (0,1)")->required();
  cmd_g->add_option("--run10", gates.run10, "Traces for input pair (1,0)")->required();
  cmd_g->add_option("--run11", gates.run11, "Traces for input pair (1,1)")->required();
  cmd_g->add_option("--window", gates.window, "Simultaneity window (iterations)");
  cmd_g->add_option("--gap", gates.gap, "Separation gap (iterations)");
  cmd_g->add_option("--prominence", gates.prominence, "Spike prominence threshold");
  cmd_g->add_option("--out", gates.out, "Output directory");

  RunArgs run_args;
  auto* cmd_r = app.add_subcommand("run", "Run a full experiment from a config file");
  cmd_r->add_option("--config", run_args.config, "Experiment config")->required();
  cmd_r->add_option("--output", run_args.output,
                    "Output directory (overrides config and MYCO_OUTPUT_DIR)");
  cmd_r->add_option("--workers", run_args.workers, "Worker threads (overrides config)");

  auto* cmd_v = app.add_subcommand("version", "Print version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_i->parsed()) cmd_ingest(ingest);
    else if (cmd_s->parsed()) cmd_simulate(sim);
    else if (cmd_a->parsed()) cmd_analyze(ana);
    else if (cmd_g->parsed()) cmd_gates(gates);
    else if (cmd_r->parsed()) cmd_run(run_args);
    else if (cmd_v->parsed()) std::cout << kToolName << " " << kToolVersion << "\n";
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
