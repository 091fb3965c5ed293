#include "myco/fhn.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <thread>

#include "myco/errors.hpp"
#include "myco/util.hpp"

namespace myco {

void FhnParams::validate() const {
  std::vector<std::string> issues;
  if (!(dt > 0)) issues.push_back("dt must be positive");
  if (!(dx > 0)) issues.push_back("dx must be positive");
  if (!(D_u >= 0)) issues.push_back("D_u must be non-negative");
  if (!(a > 0 && a < 1)) issues.push_back("a must lie in (0, 1)");
  for (auto [val, name] : {std::pair{b, "b"}, {c1, "c1"}, {c2, "c2"}, {I, "I"}})
    if (!std::isfinite(val)) issues.push_back(std::string(name) + " must be finite");
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

FieldState init_state(const ConductiveGrid& grid) {
  if (grid.conductive_count() == 0) throw ValidationError({"empty domain: grid has no conductive nodes"});
  FieldState s;
  s.grid = &grid;
  s.u.assign(grid.node_count(), 0.0);
  s.v.assign(grid.node_count(), 0.0);
  s.iteration = 0;
  return s;
}

double masked_laplacian(const FieldState& state, int row, int col, double dx) {
  const ConductiveGrid& g = *state.grid;
  if (!g.conductive(row, col)) throw std::logic_error("masked_laplacian queried on a non-conductive node");
  const double uc = state.u_at(row, col);
  double sum = 0.0;
  // Fixed neighbor order N, S, W, E — the engine uses the same order so
  // floating-point association is identical everywhere.
  if (row > 0 && g.conductive(row - 1, col)) sum += state.u_at(row - 1, col) - uc;
  if (row + 1 < g.rows && g.conductive(row + 1, col)) sum += state.u_at(row + 1, col) - uc;
  if (col > 0 && g.conductive(row, col - 1)) sum += state.u_at(row, col - 1) - uc;
  if (col + 1 < g.cols && g.conductive(row, col + 1)) sum += state.u_at(row, col + 1) - uc;
  return sum / (dx * dx);
}

// Fixed-size thread team with barrier phase sync. Worker k always runs
// part k; the caller participates as part 0.
struct FhnEngine::Pool {
  explicit Pool(int n) : size(n), start(n), finish(n) {
    threads.reserve(n - 1);
    for (int k = 1; k < n; ++k) {
      threads.emplace_back([this, k] {
        for (;;) {
          start.arrive_and_wait();
          if (stop.load(std::memory_order_acquire)) return;
          job(k);
          finish.arrive_and_wait();
        }
      });
    }
  }

  ~Pool() {
    stop.store(true, std::memory_order_release);
    start.arrive_and_wait();
  }

  void parallel(const std::function<void(int)>& fn) {
    job = fn;  // workers are parked at `start`, so this write is unobserved
    start.arrive_and_wait();
    job(0);
    finish.arrive_and_wait();
  }

  int size;
  std::barrier<> start, finish;
  std::function<void(int)> job;
  std::atomic<bool> stop{false};
  std::vector<std::jthread> threads;
};

FhnEngine::FhnEngine(const ConductiveGrid& grid, const FhnParams& params, int workers)
    : grid_(grid), params_(params), workers_(std::max(1, workers)) {
  params_.validate();
  state_ = init_state(grid_);
  u_scratch_.assign(grid_.node_count(), 0.0);
  v_scratch_.assign(grid_.node_count(), 0.0);

  // CSR neighbor lists over flat indices, N/S/W/E order.
  const int R = grid_.rows, C = grid_.cols;
  nbr_off_.assign(grid_.node_count() + 1, 0);
  conductive_.clear();
  for (int r = 0; r < R; ++r)
    for (int c = 0; c < C; ++c)
      if (grid_.conductive(r, c)) conductive_.push_back(r * C + c);
  nbr_.reserve(conductive_.size() * 4);
  size_t off = 0;
  for (size_t n = 0; n < grid_.node_count(); ++n) {
    nbr_off_[n] = static_cast<std::int32_t>(off);
    if (grid_.mask[n]) {
      int r = static_cast<int>(n) / C, c = static_cast<int>(n) % C;
      if (r > 0 && grid_.conductive(r - 1, c)) { nbr_.push_back(static_cast<std::int32_t>(n - C)); ++off; }
      if (r + 1 < R && grid_.conductive(r + 1, c)) { nbr_.push_back(static_cast<std::int32_t>(n + C)); ++off; }
      if (c > 0 && grid_.conductive(r, c - 1)) { nbr_.push_back(static_cast<std::int32_t>(n - 1)); ++off; }
      if (c + 1 < C && grid_.conductive(r, c + 1)) { nbr_.push_back(static_cast<std::int32_t>(n + 1)); ++off; }
    }
  }
  nbr_off_[grid_.node_count()] = static_cast<std::int32_t>(off);

  mark_epoch_.assign(grid_.node_count(), 0);
  candidates_.resize(workers_);
  if (workers_ > 1) pool_ = std::make_unique<Pool>(workers_);
}

FhnEngine::~FhnEngine() = default;

void FhnEngine::set_state(FieldState s) {
  if (s.grid->rows != grid_.rows || s.grid->cols != grid_.cols)
    throw ValidationError({"state dimensions do not match engine grid"});
  s.grid = &grid_;
  state_ = std::move(s);
}

void FhnEngine::rebuild_active() {
  ++epoch_;
  active_.clear();
  if (params_.I != 0.0) {
    active_ = conductive_;
    return;
  }
  for (std::int32_t n : conductive_) {
    bool live = state_.u[n] != 0.0 || state_.v[n] != 0.0;
    for (std::int32_t k = nbr_off_[n]; !live && k < nbr_off_[n + 1]; ++k)
      live = state_.u[nbr_[k]] != 0.0;
    if (live) active_.push_back(n);
  }
  // Scratch must mirror the state on every node that may go unprocessed.
  std::copy(state_.u.begin(), state_.u.end(), u_scratch_.begin());
  std::copy(state_.v.begin(), state_.v.end(), v_scratch_.begin());
}

void FhnEngine::do_step() {
  const double dt = params_.dt, inv_dx2 = 1.0 / (params_.dx * params_.dx);
  const double a = params_.a, b = params_.b, c1 = params_.c1, c2 = params_.c2;
  const double I = params_.I, Du = params_.D_u;
  const bool track = params_.I == 0.0;  // with I != 0 every node stays active
  const double* uo = state_.u.data();
  const double* vo = state_.v.data();
  double* un = u_scratch_.data();
  double* vn = v_scratch_.data();
  const std::int32_t* nbr = nbr_.data();
  const std::int32_t* nbr_off = nbr_off_.data();
  const size_t total = active_.size();

  auto chunk = [&](int part) {
    size_t lo = total * part / workers_;
    size_t hi = total * (part + 1) / workers_;
    auto& cand = candidates_[part];
    for (size_t k = lo; k < hi; ++k) {
      const std::int32_t n = active_[k];
      const double u = uo[n], v = vo[n];
      double sum = 0.0;
      for (std::int32_t e = nbr_off[n]; e < nbr_off[n + 1]; ++e) sum += uo[nbr[e]] - u;
      const double lap = sum * inv_dx2;
      const double u1 = u + dt * (c1 * u * (u - a) * (1.0 - u) - c2 * u * v + I + Du * lap);
      const double v1 = v + dt * b * (u - v);
      un[n] = u1;
      vn[n] = v1;
      if (track) {
        if (u1 != 0.0) {
          // This node and its neighbors see nonzero u next step.
          cand.push_back(n);
          for (std::int32_t e = nbr_off[n]; e < nbr_off[n + 1]; ++e) cand.push_back(nbr[e]);
        } else if (v1 != 0.0 || u != 0.0 || v != 0.0) {
          // Stays active either because v persists or because the buffer it
          // just vacated still holds a stale nonzero value to flush.
          cand.push_back(n);
        }
      }
    }
  };

  if (workers_ > 1 && total >= 2048) {
    pool_->parallel(chunk);
  } else {
    for (int p = 0; p < workers_; ++p) chunk(p);
  }

  state_.u.swap(u_scratch_);
  state_.v.swap(v_scratch_);
  ++state_.iteration;

  if (track) {
    ++epoch_;
    next_active_.clear();
    for (auto& cand : candidates_) {
      for (std::int32_t n : cand) {
        if (mark_epoch_[n] != epoch_) {
          mark_epoch_[n] = epoch_;
          next_active_.push_back(n);
        }
      }
      cand.clear();
    }
    active_.swap(next_active_);
  }
}

void FhnEngine::check_finite() const {
  for (std::int32_t n : active_) {
    if (!std::isfinite(state_.u[n]) || !std::isfinite(state_.v[n]))
      throw DivergenceError(state_.iteration);
  }
}

void FhnEngine::run(long long steps, const RunHooks& hooks) {
  if (steps < 0) throw ValidationError({"steps must be non-negative"});
  const long long cadence = hooks.observe_every > 0 ? hooks.observe_every : 100;
  rebuild_active();
  if (hooks.observe_initial)
    for (const auto& obs : hooks.observers) obs(state_);
  for (long long s = 0; s < steps; ++s) {
    do_step();
    if (hooks.every_step) hooks.every_step(state_, std::span<const std::int32_t>(active_));
    if (state_.iteration % cadence == 0) {
      check_finite();
      for (const auto& obs : hooks.observers) obs(state_);
    }
  }
  check_finite();
}

void FhnEngine::run(long long steps) {
  RunHooks hooks;
  run(steps, hooks);
}

void run(FieldState& state, const FhnParams& params, long long steps, const RunHooks& hooks,
         int workers) {
  FhnEngine engine(*state.grid, params, workers);
  engine.set_state(std::move(state));
  engine.run(steps, hooks);
  state = std::move(engine.mutable_state());
}

namespace {

void write_le_doubles(std::ofstream& out, const std::vector<double>& xs) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(xs.data()),
              static_cast<std::streamsize>(xs.size() * sizeof(double)));
  } else {
    for (double x : xs) {
      std::uint64_t bits;
      std::memcpy(&bits, &x, 8);
      char buf[8];
      for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
      out.write(buf, 8);
    }
  }
}

void read_le_doubles(std::ifstream& in, std::vector<double>& xs, const std::string& path) {
  if constexpr (std::endian::native == std::endian::little) {
    in.read(reinterpret_cast<char*>(xs.data()),
            static_cast<std::streamsize>(xs.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(xs.size() * sizeof(double)))
      throw ParseError(path + ": truncated state data");
  } else {
    for (double& x : xs) {
      char buf[8];
      in.read(buf, 8);
      if (in.gcount() != 8) throw ParseError(path + ": truncated state data");
      std::uint64_t bits = 0;
      for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
      std::memcpy(&x, &bits, 8);
    }
  }
}

}  // namespace

void save_state(const std::string& path, const FieldState& state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "MYCOSTATE1\n";
  out << "rows " << state.grid->rows << "\n";
  out << "cols " << state.grid->cols << "\n";
  out << "iteration " << state.iteration << "\n";
  out << "data\n";
  write_le_doubles(out, state.u);
  write_le_doubles(out, state.v);
  if (!out) throw IoError("write failed for " + path);
}

FieldState load_state(const std::string& path, const ConductiveGrid& grid) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  auto need_line = [&](const char* what) {
    if (!std::getline(in, line)) throw ParseError(path + ": truncated header (missing " + what + ")");
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };
  need_line("magic");
  if (line != "MYCOSTATE1") throw ParseError(path + ": bad magic '" + line + "'");
  need_line("rows");
  if (line.rfind("rows ", 0) != 0) throw ParseError(path + ": expected 'rows'");
  long rows = require_long(line.substr(5), path + ": rows");
  need_line("cols");
  if (line.rfind("cols ", 0) != 0) throw ParseError(path + ": expected 'cols'");
  long cols = require_long(line.substr(5), path + ": cols");
  need_line("iteration");
  if (line.rfind("iteration ", 0) != 0) throw ParseError(path + ": expected 'iteration'");
  long long iteration = require_long(line.substr(10), path + ": iteration");
  need_line("data marker");
  if (line != "data") throw ParseError(path + ": expected 'data' marker");
  if (rows != grid.rows || cols != grid.cols)
    throw ValidationError({"state file dims " + std::to_string(rows) + "x" + std::to_string(cols) +
                           " do not match grid " + std::to_string(grid.rows) + "x" +
                           std::to_string(grid.cols)});
  if (iteration < 0) throw ParseError(path + ": negative iteration");

  FieldState s = init_state(grid);
  s.iteration = iteration;
  read_le_doubles(in, s.u, path);
  read_le_doubles(in, s.v, path);
  return s;
}

}  // namespace myco
