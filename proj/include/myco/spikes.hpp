#pragma once

#include <string>
#include <vector>

namespace myco {

struct SpikeTrain {
  std::string source;           // trace identifier
  std::vector<double> times;    // strictly increasing sample indices/seconds/iterations
  std::vector<double> amplitudes;
  std::vector<double> prominences;
  size_t size() const { return times.size(); }
};

// Local maxima with topographic prominence >= prominence_min.
//
// Semantics (pinned explicitly rather than delegating to a third-party peak
// finder): a maximal plateau trace[i..j] of height h is a peak iff it
// has a strictly lower sample on both sides (so trace ends never qualify).
// Each side is scanned outward from the plateau while samples stay below h,
// tracking the running minimum; the scan stops at the first sample >= h or
// at the trace boundary. Prominence = h - max(left minimum, right minimum).
// Plateau peaks report their left-most index. Detected times are sample
// indices; callers rescale to iterations or seconds.
SpikeTrain detect_spikes(const std::vector<double>& trace, double prominence_min = 0.03,
                         std::string source = "");

// Consecutive differences of spike times; empty for fewer than two spikes.
std::vector<double> inter_spike_intervals(const SpikeTrain& train);

struct Histogram {
  double bin_width = 0;
  std::vector<long long> counts;  // counts[k] covers [k*w, (k+1)*w)
};

Histogram isi_histogram(const std::vector<double>& durations, double bin_width);

// Overlay-ready CSV over shared bin edges: `bin_start,<label>,...` rows up to
// the longest histogram; all histograms must share bin_width.
std::string histogram_csv(const std::vector<std::pair<std::string, Histogram>>& conditions);

struct Window {
  std::string label;
  double start = 0, end = 0;  // half-open [start, end)
};

struct WindowReport {
  std::vector<std::string> labels;
  std::vector<long long> counts;
};

// Spikes counted per window; windows must not overlap (touching is fine).
WindowReport count_in_windows(const SpikeTrain& train, const std::vector<Window>& windows);

// `label=start:end,label=start:end` (the CLI --windows syntax).
std::vector<Window> parse_windows(const std::string& text);

struct ChannelLog {
  std::string label;        // e.g. "Ch1-2"
  double sample_rate = 1.0;  // samples per second
  std::vector<double> times;   // seconds, from the file's first column
  std::vector<double> values;  // mV
};

// Logger export: header `time_s,Ch1-2,...`, one row per sample.
std::vector<ChannelLog> load_logger_csv(const std::string& path);

// Spike list CSV: `time,amplitude,prominence`.
std::string spikes_csv(const SpikeTrain& train);

}  // namespace myco
