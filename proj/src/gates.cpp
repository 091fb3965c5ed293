#include "myco/gates.hpp"

#include <algorithm>
#include <sstream>

#include "myco/electrodes.hpp"
#include "myco/errors.hpp"
#include "myco/util.hpp"

namespace myco {

std::vector<GateEvent> align_events(const ScenarioSpikes& spikes, double simultaneity_window,
                                    double separation_gap) {
  // Pool (time, scenario), sorted by time; ties keep scenario key order.
  std::vector<std::pair<double, std::string>> pool;
  for (const auto& key : {kScenario01, kScenario10, kScenario11}) {
    auto it = spikes.times.find(key);
    if (it == spikes.times.end()) continue;
    for (double t : it->second) pool.emplace_back(t, key);
  }
  std::stable_sort(pool.begin(), pool.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  struct Cluster {
    double first = 0, last = 0;
    std::set<std::string> subset;
  };
  std::vector<Cluster> clusters;
  for (const auto& [t, scenario] : pool) {
    if (clusters.empty() || t - clusters.back().first >= simultaneity_window) {
      clusters.push_back({t, t, {scenario}});
    } else {
      clusters.back().last = t;
      clusters.back().subset.insert(scenario);
    }
  }

  // Unseparated neighbors invalidate each other.
  std::vector<bool> discard(clusters.size(), false);
  for (size_t k = 0; k + 1 < clusters.size(); ++k) {
    if (clusters[k + 1].first - clusters[k].last <= separation_gap) {
      discard[k] = true;
      discard[k + 1] = true;
    }
  }

  std::vector<GateEvent> events;
  for (size_t k = 0; k < clusters.size(); ++k)
    if (!discard[k]) events.push_back({clusters[k].first, clusters[k].subset});
  return events;
}

namespace {

struct GateRow {
  std::set<std::string> subset;
  GateClass gate;
};

const std::vector<GateRow>& gate_rows() {
  static const std::vector<GateRow> rows = {
      {{kScenario01, kScenario10, kScenario11}, {"OR", "x+y"}},
      {{kScenario01, kScenario11}, {"SELECT-y", "y"}},
      {{kScenario01, kScenario10}, {"XOR", "x ⊕ y"}},
      {{kScenario10, kScenario11}, {"SELECT-x", "x"}},
      {{kScenario01}, {"NOT-AND", "x̄y"}},
      {{kScenario10}, {"AND-NOT", "xȳ"}},
      {{kScenario11}, {"AND", "xy"}},
  };
  return rows;
}

}  // namespace

GateClass classify_subset(const std::set<std::string>& subset) {
  if (subset.empty()) throw ValidationError({"cannot classify an empty scenario subset"});
  for (const auto& row : gate_rows())
    if (row.subset == subset) return row.gate;
  std::string joined;
  for (const auto& s : subset) joined += (joined.empty() ? "" : ",") + s;
  throw ValidationError({"scenario subset {" + joined + "} is not one of the 7 gate rows"});
}

const std::vector<GateClass>& gate_table() {
  static const std::vector<GateClass> table = [] {
    std::vector<GateClass> t;
    for (const auto& row : gate_rows()) t.push_back(row.gate);
    return t;
  }();
  return table;
}

GateCensus gate_census(const std::vector<ScenarioSpikes>& all, double simultaneity_window,
                       double separation_gap) {
  GateCensus census;
  std::vector<const ScenarioSpikes*> ordered;
  for (const auto& s : all) ordered.push_back(&s);
  std::sort(ordered.begin(), ordered.end(), [](const ScenarioSpikes* a, const ScenarioSpikes* b) {
    return natural_id_less(a->electrode, b->electrode);
  });
  for (const auto* spikes : ordered) {
    for (const auto& event : align_events(*spikes, simultaneity_window, separation_gap)) {
      GateRecord record;
      record.electrode = spikes->electrode;
      record.time = event.time;
      record.subset = event.subset;
      record.gate = classify_subset(event.subset);
      ++census.by_gate[record.gate.label][record.electrode];
      ++census.totals[record.gate.label];
      census.events.push_back(std::move(record));
    }
  }
  return census;
}

namespace {

std::string join_subset(const std::set<std::string>& subset) {
  std::string out;
  for (const auto& s : subset) out += (out.empty() ? "" : "+") + s;
  return out;
}

std::vector<std::string> electrodes_in_census(const GateCensus& census) {
  std::set<std::string> ids;
  for (const auto& e : census.events) ids.insert(e.electrode);
  std::vector<std::string> out(ids.begin(), ids.end());
  std::sort(out.begin(), out.end(), natural_id_less);
  return out;
}

}  // namespace

std::string gate_events_csv(const GateCensus& census) {
  std::ostringstream out;
  out << "electrode,event_iteration,subset,gate\n";
  for (const auto& e : census.events)
    out << e.electrode << "," << format_double(e.time) << "," << join_subset(e.subset) << ","
        << e.gate.label << "\n";
  return out.str();
}

std::string gate_census_csv(const GateCensus& census) {
  const auto ids = electrodes_in_census(census);
  std::ostringstream out;
  out << "gate,expression,total";
  for (const auto& id : ids) out << "," << id;
  out << "\n";
  for (const auto& gate : gate_table()) {
    out << gate.label << "," << gate.expression << ",";
    auto tot = census.totals.find(gate.label);
    out << (tot == census.totals.end() ? 0 : tot->second);
    for (const auto& id : ids) {
      long long count = 0;
      if (auto g = census.by_gate.find(gate.label); g != census.by_gate.end())
        if (auto e = g->second.find(id); e != g->second.end()) count = e->second;
      out << "," << count;
    }
    out << "\n";
  }
  return out.str();
}

std::string gate_summary(const GateCensus& census) {
  std::ostringstream out;
  long long total = 0;
  for (const auto& [label, count] : census.totals) total += count;
  out << "gate events: " << total << "\n";
  for (const auto& gate : gate_table()) {
    auto g = census.by_gate.find(gate.label);
    if (g == census.by_gate.end()) continue;
    long long count = census.totals.at(gate.label);
    out << count << " " << gate.label << " (" << gate.expression << ") gate"
        << (count == 1 ? "" : "s") << " on electrode" << (g->second.size() == 1 ? "" : "s") << " ";
    std::vector<std::string> ids;
    for (const auto& [id, n] : g->second) ids.push_back(id);
    std::sort(ids.begin(), ids.end(), natural_id_less);
    for (size_t k = 0; k < ids.size(); ++k) {
      long long n = g->second.at(ids[k]);
      out << (k ? ", " : "") << ids[k];
      if (n > 1) out << " (x" << n << ")";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace myco
