#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "myco/fhn.hpp"
#include "myco/grid.hpp"

namespace myco {

// Virtual electrode: a lattice site plus the conductive nodes it senses.
struct Electrode {
  std::string id;        // e.g. "E1"
  int row = 0, col = 0;  // center node
  double radius = 2.0;   // sensing radius (strict Euclidean)
  // Conductive nodes y with |y - center| < radius, flat indices ascending.
  std::vector<std::int32_t> footprint;
};

struct LayoutEntry {
  std::string id;
  int row = 0, col = 0;
};

// Parses lines of `<id> <row> <col>`; '#' starts a comment; blank lines
// skipped. `source` names the file in error messages.
std::vector<LayoutEntry> parse_electrode_layout(const std::string& text,
                                                const std::string& source);
std::vector<LayoutEntry> load_electrode_layout(const std::string& path);

// Builds electrodes with footprints. Throws ValidationError on out-of-bounds
// coordinates or duplicate ids (all problems reported together). Electrodes
// whose footprint holds zero conductive nodes are still placed; a warning
// line per such electrode is appended to *warnings when given.
std::vector<Electrode> place_electrodes(const std::vector<LayoutEntry>& layout,
                                        const ConductiveGrid& grid, double radius = 2.0,
                                        std::vector<std::string>* warnings = nullptr);

// One stimulation scenario: which electrodes get kicked, how hard, when.
struct StimulusScenario {
  std::string name;                  // e.g. "01", "10", "11"
  std::vector<std::string> targets;  // electrode ids
  double amplitude = 1.0;
  double footprint_radius = 2.0;  // ~10 conductive nodes on the bundled grid
  long long at_iteration = 0;
};

// Scenario file: one scenario per non-comment line,
//   <name> <targets,comma,separated> [amplitude] [radius] [at_iteration]
std::vector<StimulusScenario> parse_scenarios(const std::string& text, const std::string& source);
std::vector<StimulusScenario> load_scenarios(const std::string& path);

// Sets u := amplitude on every conductive node within footprint_radius of
// each target's center; v is untouched. Returns the number of distinct nodes
// perturbed. Unknown target ids raise ValidationError.
size_t apply_stimulus(FieldState& state, const StimulusScenario& scenario,
                      const std::vector<Electrode>& electrodes);

// Sum of (u_y - v_y) over the electrode's footprint; 0 for empty footprints.
double read_potential(const FieldState& state, const Electrode& electrode);

// "E2" < "E10": alphabetic prefix first, then numeric suffix value.
bool natural_id_less(const std::string& a, const std::string& b);

// Observer that samples every electrode's potential. Electrodes are kept in
// natural id order, which is also the CSV column order.
class TraceRecorder {
 public:
  TraceRecorder(std::vector<Electrode> electrodes, long long cadence);

  void sample(const FieldState& state);

  const std::vector<Electrode>& electrodes() const { return electrodes_; }
  long long cadence() const { return cadence_; }
  const std::vector<long long>& iterations() const { return iterations_; }
  // One row per electrode (natural id order), one column per sample.
  const std::vector<std::vector<double>>& samples() const { return samples_; }

  // CSV: header `iteration,<id>,...`, one row per sample instant.
  std::string to_csv() const;

 private:
  std::vector<Electrode> electrodes_;
  long long cadence_;
  std::vector<long long> iterations_;
  std::vector<std::vector<double>> samples_;
};

// Parsed trace CSV (the inverse of TraceRecorder::to_csv).
struct TraceTable {
  std::vector<long long> iterations;
  std::vector<std::string> ids;                 // column order as in file
  std::vector<std::vector<double>> potentials;  // [id index][sample]
};
TraceTable load_traces_csv(const std::string& path);

}  // namespace myco
