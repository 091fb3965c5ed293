#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "myco/config.hpp"
#include "myco/grid.hpp"

namespace myco {

// Stage counts for the ingest pipeline (non-decreasing through dilation).
struct IngestReport {
  size_t threshold_pixels = 0;  // set pixels after thresholding
  size_t dilated_pixels = 0;    // after dilation
  bool transposed = false;
  size_t conductive_nodes = 0;  // after projection
  ConductiveGrid grid;
};

// load -> threshold -> dilate -> (transpose) -> project.
IngestReport run_ingest(const IngestSpec& spec);

struct StageTiming {
  std::string stage;
  double ms = 0;
};

struct ManifestEntry {
  std::string relpath;  // relative to the output directory
  std::uint64_t checksum = 0;  // FNV-1a 64 of the file bytes
  std::uint64_t bytes = 0;
};

struct RunManifest {
  std::string tool_version;
  std::uint64_t config_hash = 0;
  std::string status;  // "complete" or "incomplete"
  std::string error;   // failure description when incomplete
  std::vector<StageTiming> timings;
  std::vector<ManifestEntry> artifacts;
};

// Text round-trip (magic "MYCOMANIFEST1"); used by tests to verify artifacts.
std::string manifest_to_text(const RunManifest& manifest);
RunManifest load_manifest(const std::string& path);

using LogFn = std::function<void(const std::string&)>;

/// Runs the full experiment: per scenario init/stimulate/integrate plus trace,
// activity, coverage and optional frame artifacts; then gate mining when the
// scenario set covers {01, 10, 11}; manifest written last (also on failure,
// marked incomplete, with the artifacts produced so far). Exceptions from a
// stage are rethrown after the manifest is written.
RunManifest run_experiment(const ExperimentConfig& config, const LogFn& log = {});

}  // namespace myco
