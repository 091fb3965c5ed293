#include "myco/spikes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "myco/errors.hpp"
#include "myco/util.hpp"

namespace myco {

SpikeTrain detect_spikes(const std::vector<double>& trace, double prominence_min,
                         std::string source) {
  if (trace.size() < 3)
    throw ValidationError({"trace too short for spike detection (need >= 3 samples, got " +
                           std::to_string(trace.size()) + ")"});
  SpikeTrain train;
  train.source = std::move(source);
  const size_t n = trace.size();
  size_t i = 1;
  while (i + 1 < n) {
    if (trace[i] <= trace[i - 1]) {
      ++i;
      continue;
    }
    // trace[i] > trace[i-1]: candidate plateau [i..j].
    size_t j = i;
    while (j + 1 < n && trace[j + 1] == trace[i]) ++j;
    if (j + 1 < n && trace[j + 1] < trace[i]) {
      const double h = trace[i];
      // Scan left from the plateau edge while below h.
      double left_min = trace[i - 1];
      for (size_t k = i - 1; k > 0 && trace[k - 1] < h;) {
        --k;
        left_min = std::min(left_min, trace[k]);
      }
      // Scan right likewise.
      double right_min = trace[j + 1];
      for (size_t k = j + 1; k + 1 < n && trace[k + 1] < h;) {
        ++k;
        right_min = std::min(right_min, trace[k]);
      }
      const double prominence = h - std::max(left_min, right_min);
      if (prominence >= prominence_min) {
        train.times.push_back(static_cast<double>(i));
        train.amplitudes.push_back(h);
        train.prominences.push_back(prominence);
      }
    }
    i = j + 1;
  }
  return train;
}

std::vector<double> inter_spike_intervals(const SpikeTrain& train) {
  std::vector<double> isis;
  for (size_t k = 1; k < train.times.size(); ++k)
    isis.push_back(train.times[k] - train.times[k - 1]);
  return isis;
}

Histogram isi_histogram(const std::vector<double>& durations, double bin_width) {
  if (!(bin_width > 0)) throw ValidationError({"histogram bin width must be positive"});
  Histogram h;
  h.bin_width = bin_width;
  for (double d : durations) {
    if (d < 0) throw ValidationError({"negative duration in histogram input"});
    const size_t bin = static_cast<size_t>(std::floor(d / bin_width));
    if (h.counts.size() <= bin) h.counts.resize(bin + 1, 0);
    ++h.counts[bin];
  }
  return h;
}

std::string histogram_csv(const std::vector<std::pair<std::string, Histogram>>& conditions) {
  std::ostringstream out;
  out << "bin_start";
  size_t bins = 0;
  double width = 0;
  for (const auto& [label, hist] : conditions) {
    out << "," << label;
    bins = std::max(bins, hist.counts.size());
    if (width == 0) width = hist.bin_width;
    else if (hist.bin_width != width)
      throw ValidationError({"histogram overlay requires a shared bin width"});
  }
  out << "\n";
  for (size_t b = 0; b < bins; ++b) {
    out << format_double(static_cast<double>(b) * width);
    for (const auto& [label, hist] : conditions)
      out << "," << (b < hist.counts.size() ? hist.counts[b] : 0);
    out << "\n";
  }
  return out.str();
}

WindowReport count_in_windows(const SpikeTrain& train, const std::vector<Window>& windows) {
  std::vector<const Window*> sorted;
  for (const auto& w : windows) {
    if (!(w.end >= w.start)) throw ValidationError({"window '" + w.label + "' has end < start"});
    sorted.push_back(&w);
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const Window* a, const Window* b) { return a->start < b->start; });
  for (size_t k = 1; k < sorted.size(); ++k)
    if (sorted[k]->start < sorted[k - 1]->end)
      throw ValidationError({"windows '" + sorted[k - 1]->label + "' and '" + sorted[k]->label +
                             "' overlap"});
  WindowReport report;
  for (const auto& w : windows) {
    long long count = 0;
    for (double t : train.times)
      if (t >= w.start && t < w.end) ++count;
    report.labels.push_back(w.label);
    report.counts.push_back(count);
  }
  return report;
}

std::vector<Window> parse_windows(const std::string& text) {
  std::vector<Window> windows;
  for (const auto& part : split(text, ',')) {
    if (trim(part).empty()) continue;
    auto eq = part.find('=');
    auto colon = part.find(':', eq == std::string::npos ? 0 : eq);
    if (eq == std::string::npos || colon == std::string::npos)
      throw ParseError("window spec '" + std::string(trim(part)) +
                       "' is not of the form label=start:end");
    Window w;
    w.label = trim(part.substr(0, eq));
    w.start = require_double(part.substr(eq + 1, colon - eq - 1), "window '" + w.label + "' start");
    w.end = require_double(part.substr(colon + 1), "window '" + w.label + "' end");
    if (w.label.empty()) throw ParseError("window spec '" + std::string(trim(part)) + "' lacks a label");
    windows.push_back(std::move(w));
  }
  if (windows.empty()) throw ParseError("no windows given");
  return windows;
}

std::vector<ChannelLog> load_logger_csv(const std::string& path) {
  std::string text = read_text_file(path);
  auto lines = split(text, '\n');
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ParseError(path + ": empty logger file");
  auto header = split(lines[0], ',');
  if (header.size() < 2)
    throw ParseError(path + ": header must be 'time_s,<channel>,...', got '" + lines[0] + "'");
  std::vector<ChannelLog> logs(header.size() - 1);
  for (size_t c = 1; c < header.size(); ++c) {
    logs[c - 1].label = trim(header[c]);
    if (logs[c - 1].label.empty())
      throw ParseError(path + ": empty channel label in column " + std::to_string(c + 1));
  }
  for (size_t ln = 1; ln < lines.size(); ++ln) {
    if (trim(lines[ln]).empty()) continue;
    auto cells = split(lines[ln], ',');
    if (cells.size() != header.size())
      throw ParseError(path + ": row " + std::to_string(ln + 1) + " has " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(header.size()));
    const std::string where = path + ": row " + std::to_string(ln + 1);
    const double t = require_double(cells[0], where + ", column 1 (time)");
    for (size_t c = 1; c < cells.size(); ++c) {
      logs[c - 1].times.push_back(t);
      logs[c - 1].values.push_back(
          require_double(cells[c], where + ", column " + std::to_string(c + 1)));
    }
  }
  if (!logs.empty() && logs[0].values.empty()) throw ParseError(path + ": no data rows");
  return logs;
}

std::string spikes_csv(const SpikeTrain& train) {
  std::ostringstream out;
  out << "time,amplitude,prominence\n";
  for (size_t k = 0; k < train.times.size(); ++k)
    out << format_double(train.times[k]) << "," << format_double(train.amplitudes[k]) << ","
        << format_double(train.prominences[k]) << "\n";
  return out.str();
}

}  // namespace myco
