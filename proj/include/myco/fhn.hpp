#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "myco/grid.hpp"

namespace myco {

// Scalar model and integration constants. Defaults match the bundled configs.
struct FhnParams {
  double D_u = 1.0;   // conductance (diffusion coefficient for u)
  double a = 0.13;    // excitation threshold
  double b = 0.013;   // recovery rate
  double c1 = 0.26;   // cubic-term coefficient
  double c2 = 0.05;   // u-v coupling coefficient
  double I = 0.0;     // external stimulation current (uniform, per-run)
  double dt = 0.015;  // time step
  double dx = 2.0;    // grid spacing

  // Collects every violation (dt/dx positive, D_u >= 0, 0 < a < 1) and
  // throws ValidationError listing all of them.
  void validate() const;
};

// Per-node excitation u and recovery v. Non-conductive nodes hold exactly 0
// and are never written by the engine.
struct FieldState {
  const ConductiveGrid* grid = nullptr;  // non-owning; outlives the state
  std::vector<double> u;                 // rows*cols, row-major
  std::vector<double> v;
  long long iteration = 0;

  double& u_at(int r, int c) { return u[static_cast<size_t>(r) * grid->cols + c]; }
  double& v_at(int r, int c) { return v[static_cast<size_t>(r) * grid->cols + c]; }
  double u_at(int r, int c) const { return u[static_cast<size_t>(r) * grid->cols + c]; }
  double v_at(int r, int c) const { return v[static_cast<size_t>(r) * grid->cols + c]; }
};

// Resting state (u = v = 0, iteration 0). Throws ValidationError("empty
// domain") when the grid has no conductive node.
FieldState init_state(const ConductiveGrid& grid);

// (sum over conductive 4-neighbors of (u_n - u_node)) / dx^2. Off-grid or
// non-conductive neighbors contribute zero flux (impermeable boundary).
// Querying a non-conductive node is a contract violation (std::logic_error).
double masked_laplacian(const FieldState& state, int row, int col, double dx);

struct RunHooks {
  long long observe_every = 100;  // observer cadence in steps
  bool observe_initial = false;   // also sample the state before the first step
  // Invoked whenever state.iteration is a multiple of observe_every.
  std::vector<std::function<void(const FieldState&)>> observers;
  // Invoked after every single step with the indices of nodes that were
  // updated this step (all other conductive nodes are exactly at rest).
  // Used for per-iteration accumulation without full-grid scans.
  std::function<void(const FieldState&, std::span<const std::int32_t>)> every_step;
};

// Explicit-Euler integrator over the masked grid.
//
// The update is synchronous (reads only the previous buffer), so node visit
// order cannot affect results; with I = 0 the engine additionally skips nodes
// whose whole neighborhood is exactly at rest, which is a no-op by algebra,
// not an approximation. Work may be partitioned across `workers` threads;
// each node's arithmetic is a pure function of the previous buffer evaluated
// in a fixed per-node order, so results are bit-identical for any worker
// count.
class FhnEngine {
 public:
  FhnEngine(const ConductiveGrid& grid, const FhnParams& params, int workers = 1);
  ~FhnEngine();
  FhnEngine(const FhnEngine&) = delete;
  FhnEngine& operator=(const FhnEngine&) = delete;

  const FieldState& state() const { return state_; }
  // Direct access for stimulation between runs. The engine re-scans for
  // non-resting nodes at the start of every run(), so external edits via
  // this reference are picked up automatically.
  FieldState& mutable_state() { return state_; }
  void set_state(FieldState s);  // adopt a checkpointed state (same grid dims)

  const FhnParams& params() const { return params_; }
  int workers() const { return workers_; }

  void run(long long steps, const RunHooks& hooks);
  void run(long long steps);  // no hooks

 private:
  struct Pool;

  void rebuild_active();
  void do_step();
  void check_finite() const;  // throws DivergenceError

  const ConductiveGrid& grid_;
  FhnParams params_;
  int workers_;
  FieldState state_;
  std::vector<double> u_scratch_, v_scratch_;
  std::vector<std::int32_t> nbr_;       // CSR neighbor lists (N, S, W, E order)
  std::vector<std::int32_t> nbr_off_;   // per flat node index, size n+1
  std::vector<std::int32_t> conductive_;  // all conductive flat indices, ascending
  std::vector<std::int32_t> active_, next_active_;
  std::vector<std::uint64_t> mark_epoch_;
  std::uint64_t epoch_ = 0;
  std::vector<std::vector<std::int32_t>> candidates_;  // per worker
  std::unique_ptr<Pool> pool_;
};

// Convenience wrapper matching the operation-level contract: applies exactly
// `steps` synchronous Euler steps to `state` in place.
void run(FieldState& state, const FhnParams& params, long long steps, const RunHooks& hooks,
         int workers = 1);

// Checkpoint IO, magic "MYCOSTATE1": text header (rows, cols, iteration),
// then a "data" line followed by rows*cols little-endian float64 u values and
// rows*cols little-endian float64 v values.
void save_state(const std::string& path, const FieldState& state);
// The returned state references `grid`; dims must match the file header.
FieldState load_state(const std::string& path, const ConductiveGrid& grid);

}  // namespace myco
