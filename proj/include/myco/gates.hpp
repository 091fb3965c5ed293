#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "myco/spikes.hpp"

namespace myco {

// Scenario keys for the three stimulation input pairs (E1,E2).
inline const std::string kScenario01 = "01";  // E2 stimulated
inline const std::string kScenario10 = "10";  // E1 stimulated
inline const std::string kScenario11 = "11";  // both stimulated

// Per-electrode spike times (iterations) for each of the three scenarios.
struct ScenarioSpikes {
  std::string electrode;
  std::map<std::string, std::vector<double>> times;  // keys "01", "10", "11"
};

struct GateEvent {
  double time = 0;                // earliest spike in the cluster
  std::set<std::string> subset;   // scenarios contributing >= 1 spike
};

// Pools all spikes, sorts by time, then clusters greedily left-to-right: a
// spike joins the current cluster when it lies within `simultaneity_window`
// of the cluster's FIRST spike. Adjacent clusters whose gap (next first spike
// minus previous last spike) is <= separation_gap are both discarded as
// unseparated. Surviving events are strictly increasing and pairwise more
// than separation_gap apart.
std::vector<GateEvent> align_events(const ScenarioSpikes& spikes,
                                    double simultaneity_window = 200,
                                    double separation_gap = 1000);

struct GateClass {
  std::string label;       // OR, SELECT-y, XOR, SELECT-x, NOT-AND, AND-NOT, AND
  std::string expression;  // x+y, y, x ⊕ y, x, x̄y, xȳ, xy
};

// Fixed 7-way mapping from non-empty scenario subsets to gates; throws
// ValidationError on an empty or unrecognised subset.
GateClass classify_subset(const std::set<std::string>& subset);

struct GateRecord {
  std::string electrode;
  double time = 0;
  std::set<std::string> subset;
  GateClass gate;
};

struct GateCensus {
  std::vector<GateRecord> events;  // electrode natural order, then time
  // gate label -> electrode id -> event count; and per-gate totals.
  std::map<std::string, std::map<std::string, long long>> by_gate;
  std::map<std::string, long long> totals;
};

GateCensus gate_census(const std::vector<ScenarioSpikes>& all, double simultaneity_window = 200,
                       double separation_gap = 1000);

// The census table's fixed row order.
const std::vector<GateClass>& gate_table();

// `electrode,event_iteration,subset,gate` (subset joined with '+').
std::string gate_events_csv(const GateCensus& census);
// `gate,expression,total,<electrode>,...` over the union of electrodes seen.
std::string gate_census_csv(const GateCensus& census);
// Prose summary, one line per gate with electrodes carrying it.
std::string gate_summary(const GateCensus& census);

}  // namespace myco
