#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "doctest.h"
#include "myco/errors.hpp"
#include "myco/fhn.hpp"
#include "myco/grid.hpp"

using namespace myco;

namespace {

// Independent reference integrator: dense double loop over the full lattice,
// bounds-checked neighbor reads, no active-set tracking. Kept deliberately
// dumb so it shares no structure with the engine under test.
struct NaiveSim {
  ConductiveGrid grid;
  FhnParams p;
  std::vector<double> u, v;

  explicit NaiveSim(ConductiveGrid g, FhnParams params)
      : grid(std::move(g)),
        p(params),
        u(grid.node_count(), 0.0),
        v(grid.node_count(), 0.0) {}

  double& at(std::vector<double>& f, int r, int c) {
    return f[static_cast<size_t>(r) * grid.cols + c];
  }

  void step() {
    std::vector<double> un(u.size(), 0.0), vn(v.size(), 0.0);
    const double inv_dx2 = 1.0 / (p.dx * p.dx);
    for (int r = 0; r < grid.rows; ++r)
      for (int c = 0; c < grid.cols; ++c) {
        if (!grid.conductive(r, c)) continue;
        const double uc = at(u, r, c);
        const double vc = at(v, r, c);
        double sum = 0.0;
        const int dr[4] = {-1, 1, 0, 0};  // N, S, W, E — the engine's order
        const int dc[4] = {0, 0, -1, 1};
        for (int k = 0; k < 4; ++k) {
          const int r2 = r + dr[k], c2 = c + dc[k];
          if (r2 >= 0 && r2 < grid.rows && c2 >= 0 && c2 < grid.cols && grid.conductive(r2, c2))
            sum += at(u, r2, c2) - uc;
        }
        const double lap = sum * inv_dx2;
        at(un, r, c) =
            uc + p.dt * (p.c1 * uc * (uc - p.a) * (1.0 - uc) - p.c2 * uc * vc + p.I + p.D_u * lap);
        at(vn, r, c) = vc + p.dt * p.b * (uc - vc);
      }
    u.swap(un);
    v.swap(vn);
  }
};

// Same portable generator the data tooling uses; good enough for test inputs.
struct SplitMix64 {
  std::uint64_t s;
  explicit SplitMix64(std::uint64_t seed) : s(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (s += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

ConductiveGrid random_grid(int rows, int cols, double fill, SplitMix64& rng) {
  ConductiveGrid g = make_grid(rows, cols, false);
  for (size_t n = 0; n < g.node_count(); ++n) g.mask[n] = rng.uniform() < fill ? 1 : 0;
  return g;
}

}  // namespace

TEST_CASE("params validation lists every violation at once") {
  FhnParams p;
  p.dt = 0.0;
  p.dx = -1.0;
  p.a = 1.5;
  try {
    p.validate();
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.issues().size() == 3);
  }
  FhnParams ok;
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("single-node Euler step matches the hand-computed update") {
  // One isolated conductive node: no diffusion term. With u = 0.5, v = 0:
  //   u' = 0.5 + 0.015 * 0.26 * 0.5 * (0.5 - 0.13) * (1 - 0.5) = 0.50036075
  //   v' = 0.015 * 0.013 * 0.5                                 = 0.0000975
  ConductiveGrid g = make_grid(1, 1, true);
  FhnEngine engine(g, FhnParams{});
  engine.mutable_state().u_at(0, 0) = 0.5;
  engine.run(1);
  CHECK(engine.state().u_at(0, 0) == doctest::Approx(0.50036075).epsilon(1e-12));
  CHECK(engine.state().v_at(0, 0) == doctest::Approx(0.0000975).epsilon(1e-12));

  // And with u = 1 the cubic term vanishes: v' = dt * b * 1 = 0.000195.
  FhnEngine e2(g, FhnParams{});
  e2.mutable_state().u_at(0, 0) = 1.0;
  e2.run(1);
  CHECK(e2.state().u_at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e2.state().v_at(0, 0) == doctest::Approx(0.000195).epsilon(1e-12));
}

TEST_CASE("masked laplacian: interior plus-stencil, boundaries impermeable") {
  ConductiveGrid g = make_grid(3, 3, true);
  g.mask[2 * 3 + 1] = 0;  // knock out the south neighbor of the center
  FieldState s = init_state(g);
  s.u_at(1, 1) = 1.0;
  s.u_at(0, 1) = 0.5;  // N
  s.u_at(1, 0) = 0.25;  // W
  s.u_at(1, 2) = 0.75;  // E
  // S is non-conductive: zero flux. dx = 2 so dx^2 = 4.
  const double expected = ((0.5 - 1.0) + (0.25 - 1.0) + (0.75 - 1.0)) / 4.0;
  CHECK(masked_laplacian(s, 1, 1, 2.0) == doctest::Approx(expected).epsilon(1e-15));

  // Corner node: only two in-grid neighbors exist.
  s.u_at(0, 0) = 1.0;
  const double corner = ((0.5 - 1.0) + (0.25 - 1.0)) / 4.0;  // E = (0,1), S = (1,0)
  CHECK(masked_laplacian(s, 0, 0, 2.0) == doctest::Approx(corner).epsilon(1e-15));

  CHECK_THROWS_AS((void)masked_laplacian(s, 2, 1, 2.0), std::logic_error);
}

TEST_CASE("resting medium stays exactly at zero") {
  ConductiveGrid g = make_grid(20, 20, true);
  FhnEngine engine(g, FhnParams{});
  engine.run(500);
  for (double x : engine.state().u) CHECK(x == 0.0);
  for (double x : engine.state().v) CHECK(x == 0.0);
  CHECK(engine.state().iteration == 500);
}

TEST_CASE("engine matches the naive double-loop oracle on random masks") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    const int rows = trial % 2 ? 6 : 10;
    const int cols = trial % 2 ? 6 : 10;
    ConductiveGrid g = random_grid(rows, cols, 0.7, rng);
    if (g.conductive_count() == 0) g.mask[0] = 1;

    NaiveSim naive(g, FhnParams{});
    FhnEngine engine(g, FhnParams{});
    FieldState init = init_state(g);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        if (g.conductive(r, c)) {
          const double u0 = rng.uniform();
          const double v0 = 0.5 * rng.uniform();
          init.u_at(r, c) = u0;
          init.v_at(r, c) = v0;
          naive.at(naive.u, r, c) = u0;
          naive.at(naive.v, r, c) = v0;
        }
    engine.set_state(std::move(init));

    for (int s = 0; s < 50; ++s) naive.step();
    engine.run(50);

    for (size_t n = 0; n < g.node_count(); ++n) {
      CHECK(std::fabs(engine.state().u[n] - naive.u[n]) <= 1e-12);
      CHECK(std::fabs(engine.state().v[n] - naive.v[n]) <= 1e-12);
    }
  }
}

TEST_CASE("nonzero external current I matches the oracle too") {
  // I != 0 disables the resting-node shortcut; this pins the other code path.
  SplitMix64 rng(7);
  ConductiveGrid g = random_grid(12, 12, 0.6, rng);
  if (g.conductive_count() == 0) g.mask[5] = 1;
  FhnParams p;
  p.I = 0.001;
  NaiveSim naive(g, p);
  FhnEngine engine(g, p);
  for (int s = 0; s < 80; ++s) naive.step();
  engine.run(80);
  for (size_t n = 0; n < g.node_count(); ++n) {
    CHECK(std::fabs(engine.state().u[n] - naive.u[n]) <= 1e-12);
    CHECK(std::fabs(engine.state().v[n] - naive.v[n]) <= 1e-12);
  }
}

TEST_CASE("worker count does not change a single bit") {
  SplitMix64 rng(99);
  ConductiveGrid g = random_grid(40, 60, 0.85, rng);
  FhnParams p;

  auto run_with = [&](int workers) {
    FhnEngine engine(g, p, workers);
    FieldState init = init_state(g);
    // A supra-threshold blob plus scattered speckle.
    for (int r = 15; r < 25; ++r)
      for (int c = 20; c < 32; ++c)
        if (g.conductive(r, c)) init.u_at(r, c) = 1.0;
    engine.set_state(std::move(init));
    engine.run(1000);
    return engine.state();
  };

  const FieldState one = run_with(1);
  const FieldState eight = run_with(8);
  REQUIRE(one.u.size() == eight.u.size());
  for (size_t n = 0; n < one.u.size(); ++n) {
    CHECK(one.u[n] == eight.u[n]);  // bitwise, no tolerance
    CHECK(one.v[n] == eight.v[n]);
  }
}

TEST_CASE("non-conductive nodes are never written") {
  SplitMix64 rng(5);
  ConductiveGrid g = random_grid(15, 15, 0.5, rng);
  FhnEngine engine(g, FhnParams{});
  FieldState init = init_state(g);
  for (int r = 0; r < 15; ++r)
    for (int c = 0; c < 15; ++c)
      if (g.conductive(r, c)) init.u_at(r, c) = 0.8;
  engine.set_state(std::move(init));
  engine.run(200);
  for (int r = 0; r < 15; ++r)
    for (int c = 0; c < 15; ++c)
      if (!g.conductive(r, c)) {
        CHECK(engine.state().u_at(r, c) == 0.0);
        CHECK(engine.state().v_at(r, c) == 0.0);
      }
}

TEST_CASE("divergence raises DivergenceError with the failing iteration") {
  ConductiveGrid g = make_grid(8, 8, true);
  FhnParams p;
  p.dt = 50.0;  // wildly unstable on purpose
  FhnEngine engine(g, p);
  engine.mutable_state().u_at(4, 4) = 1.0;
  try {
    engine.run(10000);
    FAIL("expected DivergenceError");
  } catch (const DivergenceError& e) {
    CHECK(e.iteration() > 0);
    CHECK(std::string(e.what()).find("iteration") != std::string::npos);
  }
}

TEST_CASE("observer cadence: 1000 steps at every-100 gives 10 samples") {
  ConductiveGrid g = make_grid(4, 4, true);
  FhnEngine engine(g, FhnParams{});
  engine.mutable_state().u_at(2, 2) = 1.0;
  RunHooks hooks;
  hooks.observe_every = 100;
  std::vector<long long> seen;
  hooks.observers.push_back([&](const FieldState& s) { seen.push_back(s.iteration); });
  engine.run(1000, hooks);
  REQUIRE(seen.size() == 10);
  CHECK(seen.front() == 100);
  CHECK(seen.back() == 1000);

  // observe_initial adds the pre-run sample at the current iteration.
  FhnEngine e2(g, FhnParams{});
  RunHooks h2;
  h2.observe_every = 50;
  h2.observe_initial = true;
  std::vector<long long> seen2;
  h2.observers.push_back([&](const FieldState& s) { seen2.push_back(s.iteration); });
  e2.run(100, h2);
  CHECK(seen2 == std::vector<long long>{0, 50, 100});
}

TEST_CASE("every_step active spans cover all non-resting nodes") {
  // The span handed to every_step must contain every node that could be
  // non-resting; equivalently, any conductive node outside it is exactly 0.
  SplitMix64 rng(31);
  ConductiveGrid g = random_grid(12, 12, 0.8, rng);
  FhnEngine engine(g, FhnParams{});
  FieldState init = init_state(g);
  for (int r = 5; r < 8; ++r)
    for (int c = 5; c < 8; ++c)
      if (g.conductive(r, c)) init.u_at(r, c) = 1.0;
  engine.set_state(std::move(init));
  RunHooks hooks;
  bool violated = false;
  hooks.every_step = [&](const FieldState& s, std::span<const std::int32_t> active) {
    std::vector<char> in_active(s.grid->node_count(), 0);
    for (auto n : active) in_active[static_cast<size_t>(n)] = 1;
    for (size_t n = 0; n < s.grid->node_count(); ++n)
      if (!in_active[n] && (s.u[n] != 0.0 || s.v[n] != 0.0)) violated = true;
  };
  engine.run(300, hooks);
  CHECK_FALSE(violated);
}

TEST_CASE("state checkpoints round-trip bit-exactly") {
  namespace fs = std::filesystem;
  SplitMix64 rng(12345);
  ConductiveGrid g = random_grid(9, 14, 0.6, rng);
  if (g.conductive_count() == 0) g.mask[3] = 1;
  FieldState s = init_state(g);
  for (size_t n = 0; n < g.node_count(); ++n)
    if (g.mask[n]) {
      s.u[n] = rng.uniform() * 1e3 - 500.0;
      s.v[n] = rng.uniform() * 1e-300;  // exercises subnormal-ish magnitudes
    }
  s.iteration = 777;

  const fs::path path = fs::temp_directory_path() / "myco_test_state.bin";
  save_state(path.string(), s);
  FieldState loaded = load_state(path.string(), g);
  CHECK(loaded.iteration == 777);
  for (size_t n = 0; n < g.node_count(); ++n) {
    CHECK(loaded.u[n] == s.u[n]);
    CHECK(loaded.v[n] == s.v[n]);
  }

  ConductiveGrid other = make_grid(9, 13, true);
  CHECK_THROWS_AS((void)load_state(path.string(), other), ValidationError);
  fs::remove(path);
}

TEST_CASE("a reloaded checkpoint continues the exact trajectory") {
  namespace fs = std::filesystem;
  SplitMix64 rng(424201);
  ConductiveGrid g = random_grid(16, 16, 0.75, rng);
  if (g.conductive_count() == 0) g.mask[0] = 1;

  // Reference: 80 uninterrupted steps from a random start.
  FhnEngine reference(g, FhnParams{}, 1);
  FieldState& init = reference.mutable_state();
  for (size_t n = 0; n < g.node_count(); ++n)
    if (g.mask[n]) {
      init.u[n] = rng.uniform();
      init.v[n] = rng.uniform() * 0.5;
    }
  FieldState start = init;  // copy before integrating
  reference.run(80);

  // Same start: 40 steps, checkpoint, reload into a fresh engine, 40 more.
  FhnEngine first(g, FhnParams{}, 1);
  first.set_state(std::move(start));
  first.run(40);
  const fs::path path = fs::temp_directory_path() / "myco_resume_state.bin";
  save_state(path.string(), first.state());

  FhnEngine second(g, FhnParams{}, 1);
  second.set_state(load_state(path.string(), g));
  CHECK(second.state().iteration == 40);
  second.run(40);
  fs::remove(path);

  CHECK(second.state().iteration == reference.state().iteration);
  bool identical = true;
  for (size_t n = 0; n < g.node_count(); ++n)
    identical = identical && second.state().u[n] == reference.state().u[n] &&
                second.state().v[n] == reference.state().v[n];
  CHECK(identical);
}

TEST_CASE("init_state rejects an empty domain") {
  ConductiveGrid g = make_grid(5, 5, false);
  CHECK_THROWS_AS((void)init_state(g), ValidationError);
}
