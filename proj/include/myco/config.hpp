#pragma once

#include <string>
#include <vector>

#include "myco/fhn.hpp"
#include "myco/image.hpp"

namespace myco {

// How to build the grid from an image (the `ingest` pipeline).
struct IngestSpec {
  std::string image;
  ThresholdRule rule;
  int dilate = 1;
  int rows = 364, cols = 985;
  std::string transpose = "auto";  // auto | on | off
};

struct AnalysisSpec {
  double prominence = 0.03;
  double simultaneity_window = 200;
  double separation_gap = 1000;
  double activity_threshold = 0.1;
  double display_threshold = 0.04;
  bool frames = false;    // write snapshot PNGs at observer cadence
  bool coverage = true;   // accumulate + emit coverage artifacts
};

// Fully resolved experiment recipe. Input paths are stored already resolved
// against the config file's directory; output_dir is taken as given (the CLI
// applies --output / environment overrides before running).
struct ExperimentConfig {
  std::string config_path;  // source file (for hashing/provenance)

  // Exactly one of grid_file / ingest.image is set.
  std::string grid_file;
  IngestSpec ingest;

  FhnParams params;

  std::string electrode_layout;  // optional; empty = no electrodes
  double electrode_radius = 2.0;

  std::string scenario_file;  // optional; empty = one unstimulated run

  long long steps = 60000;
  long long cadence = 100;
  int workers = 1;
  std::string output_dir = "out";
  unsigned long long seed = 0;  // reserved; the pipeline is deterministic

  AnalysisSpec analysis;
};

// Parses the INI-style config (see data/experiment.cfg for the grammar:
// `[section]` headers, `key = value` pairs, `#` comments) and validates it.
// Every problem — unknown key, bad type, missing file, out-of-range value —
// is collected and reported together in one ValidationError.
ExperimentConfig validate_config(const std::string& path);

// Same, from in-memory text; `source` names the config in errors and
// `base_dir` anchors relative input paths.
ExperimentConfig validate_config_text(const std::string& text, const std::string& source,
                                      const std::string& base_dir);

}  // namespace myco
