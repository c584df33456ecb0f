#include <doctest.h>

#include <cmath>

#include "adiabatica/error.hpp"
#include "adiabatica/phases.hpp"
#include "support.hpp"

using namespace adiabatica;

namespace {

const SpatialGrid wide = make_grid(-10.0, 10.0, 512, Boundary::dirichlet);
const ParameterPoint origin{0.0};

HamiltonianSpec make(const std::string& A, const std::string& V, int params = 1) {
  return HamiltonianSpec::from_strings("1", A, V, params, PhysicsConfig{1.0}, wide);
}

const HamiltonianSpec oscillator = make("0", "0.5*x^2");
const HamiltonianSpec moving = make("0", "0.5*(x-R1)^2");
const HamiltonianSpec coherent = make("R2", "0.5*(x-R1)^2", 2);

ComplexField ground(const HamiltonianSpec& spec, const ParameterPoint& R) {
  return eigensolve(build(spec, R), 1).states[0];
}

// Grid node nearest to c, where the G1 gauge pins the coherent state's phase.
double peak_node(double c) {
  const double h = wide.spacing();
  return wide.x_min() + std::round((c - wide.x_min()) / h) * h;
}

ParameterPath rectangle(int segments, double T) {
  return ParameterPath::polyline({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}, {0.0, 0.0}}, segments, T);
}

Trajectory run(const HamiltonianSpec& spec, const ParameterPath& path, const LevelTrack& track,
               int steps) {
  return evolve(spec, path, track.level(0).state, steps);
}

}  // namespace

TEST_CASE("overlap phase of a rotated eigenstate") {
  const SpectrumSlice s = eigensolve(build(oscillator, origin), 1);
  const std::vector<double> theta{0.0, 1.2, 2.5, 3.9, 5.0, 6.3};
  Trajectory traj;
  std::vector<Eigenstate> levels;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    ComplexField psi = s.states[0];
    for (auto& v : psi) v *= std::polar(1.0, theta[k]);
    traj.times.push_back(static_cast<double>(k));
    traj.states.push_back(psi);
    levels.push_back(Eigenstate{origin, static_cast<double>(k), s.energies[0], s.states[0]});
  }
  const PhaseRecord rec = overlap_phase(traj, levels, wide);
  for (std::size_t k = 0; k < theta.size(); ++k) {
    CHECK(rec.alpha[k] == doctest::Approx(theta[k]).epsilon(1e-12));
    CHECK(rec.fidelity[k] == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (auto& v : traj.states[3]) v *= std::polar(1.0, 1.7);
  CHECK_THROWS_AS(overlap_phase(traj, levels, wide), UnwrapAmbiguity);
}

TEST_CASE("overlap phase of the static oscillator") {
  const ParameterPath path = ParameterPath::polyline({{0.0}}, 20, 2.0);
  const LevelTrack track = track_level(oscillator, path, 0);
  const PhaseRecord rec = overlap_phase(run(oscillator, path, track, 10), track.levels(), wide);
  CHECK(std::abs(rec.alpha.back() + 1.0) <= 1e-4);
  for (double f : rec.fidelity) CHECK(f == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("dynamical phase quadrature") {
  const std::vector<double> t{0.0, 0.5, 1.0, 1.5, 2.0};
  CHECK(dynamical_phase(t, std::vector<double>(5, 1.0)).back() == doctest::Approx(-2.0));
  CHECK(dynamical_phase(t, std::vector<double>(5, 1.0), 2.0).back() == doctest::Approx(-1.0));
  const std::vector<double> s{0.0, 0.25, 0.5, 0.75, 1.0};
  CHECK(dynamical_phase(s, s).back() == doctest::Approx(-0.5));

  const ParameterPath path = ParameterPath::polyline({{0.0}, {1.0}}, 16, 40.0);
  const LevelTrack track = track_level(moving, path, 0);
  const double E0 = track.level(0).energy;
  CHECK(dynamical_phase(path.times(), track.energies()).back() == doctest::Approx(-E0 * 40.0).epsilon(1e-9));
  CHECK(std::abs(E0 - 0.5) <= 1e-4);
}

TEST_CASE("unwrap") {
  const std::vector<double> p{3.0, -3.0, -2.0, -0.5, 0.0};
  const std::vector<double> u = unwrap(p, 1.6);
  CHECK(u[1] == doctest::Approx(2.0 * oracle::pi - 3.0));
  CHECK(u[2] == doctest::Approx(2.0 * oracle::pi - 2.0));
  CHECK(u[4] == doctest::Approx(2.0 * oracle::pi));
  CHECK_THROWS_AS(unwrap(std::vector<double>{0.0, 1.0, 2.6}, 1.5), UnwrapAmbiguity);
  CHECK_THROWS_AS(unwrap(p, 1.0), UnwrapAmbiguity);
}

TEST_CASE("connection of a parameter-independent state vanishes") {
  const ComplexField psi = ground(oscillator, origin);
  CHECK(std::abs(connection_overlap(psi, psi, 0.1, wide)) <= 1e-15);
  CHECK(std::abs(connection_bohm(psi, psi, 0.1, wide)) <= 1e-15);
  CHECK_THROWS_AS(connection_overlap(psi, psi, 0.0, wide), InvalidArgument);
}

TEST_CASE("real eigenfunctions carry no connection") {
  const double dR = 0.05;
  for (double r : {0.0, 0.37, 0.9}) {
    const ComplexField a = ground(moving, ParameterPoint{r - dR / 2});
    const ComplexField b = ground(moving, ParameterPoint{r + dR / 2});
    CHECK(std::abs(connection_overlap(a, b, dR, wide)) <= 1e-8);
    CHECK(std::abs(connection_bohm(a, b, dR, wide)) <= 1e-8);
  }
}

TEST_CASE("coherent connection in the peak-real gauge") {
  // Ground states exp(i R2 (x - x*)) phi0(x - R1), x* the peak node. Along R2 the connection is
  // x* - R1 (at most h/2); along R1 it is R2 dx*/dR1, i.e. R2 times the peak hops.
  const double dR = 0.01;
  for (double r1 : {0.3, 0.61}) {
    const double r2 = 0.7;
    const ComplexField a = ground(coherent, ParameterPoint{r1, r2 - dR / 2});
    const ComplexField b = ground(coherent, ParameterPoint{r1, r2 + dR / 2});
    const double expect = peak_node(r1) - r1;
    CHECK(std::abs(expect) <= wide.spacing() / 2);
    CHECK(connection_overlap(a, b, dR, wide) == doctest::Approx(expect).epsilon(1e-3).scale(1e-6));
    CHECK(std::abs(connection_overlap(a, b, dR, wide) - connection_bohm(a, b, dR, wide)) <= 1e-4);
  }
  // Integrated along R1 from 0 to 1 the hops add up to R2 (x*(1) - x*(0)).
  const int steps = 200;
  const double r2 = 0.4;
  double line = 0.0, line_bohm = 0.0;
  ComplexField prev = ground(coherent, ParameterPoint{0.0, r2});
  for (int k = 1; k <= steps; ++k) {
    const ComplexField next = ground(coherent, ParameterPoint{k / double(steps), r2});
    line += connection_overlap(prev, next, 1.0 / steps, wide) / steps;
    line_bohm += connection_bohm(prev, next, 1.0 / steps, wide) / steps;
    prev = next;
  }
  const double expect = r2 * (peak_node(1.0) - peak_node(0.0));
  CHECK(line == doctest::Approx(expect).epsilon(1e-3));
  CHECK(line_bohm == doctest::Approx(expect).epsilon(1e-3));
}

TEST_CASE("geometric phase is a midpoint line integral") {
  const ParameterPath path = ParameterPath::polyline({{0.0, 0.0}, {2.0, 1.0}}, 4, 1.0);
  std::vector<ConnectionSample> flat, tilted;
  std::vector<std::size_t> segments;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    flat.push_back({path.point(k), {0.0, 0.0}});
    tilted.push_back({path.point(k), {1.0, -3.0}});
    segments.push_back(k);
  }
  for (double g : geometric_phase(flat, segments, path)) CHECK(g == 0.0);
  const std::vector<double> g = geometric_phase(tilted, segments, path);
  CHECK(g.size() == path.size());
  CHECK(g.front() == 0.0);
  CHECK(g.back() == doctest::Approx(2.0 - 3.0));
  CHECK(g[2] == doctest::Approx(0.5 * (2.0 - 3.0)));

  tilted[1].A = {std::nan(""), std::nan("")};
  CHECK(geometric_phase(tilted, segments, path).back() == doctest::Approx(0.75 * (2.0 - 3.0)));
}

TEST_CASE("moving well path: no geometric phase by either route") {
  const ParameterPath path = ParameterPath::polyline({{0.0}, {1.0}}, 32, 40.0);
  const LevelTrack track = track_level(moving, path, 0);
  const PathConnection c = path_connection(moving, path, track);
  CHECK(c.skipped.empty());
  for (double g : geometric_phase(c.overlap, c.segments, path)) CHECK(std::abs(g) <= 1e-6);
  for (double g : geometric_phase(c.bohm, c.segments, path)) CHECK(std::abs(g) <= 1e-6);
}

TEST_CASE("coherent rectangle encloses minus its area") {
  const ParameterPath path = rectangle(64, 40.0);
  const LevelTrack track = track_level(coherent, path, 0);
  const PathConnection c = path_connection(coherent, path, track);
  REQUIRE(c.skipped.empty());
  const double go = geometric_phase(c.overlap, c.segments, path).back();
  const double gb = geometric_phase(c.bohm, c.segments, path).back();
  CHECK(std::abs(go + 1.0) <= 1e-2);
  CHECK(std::abs(gb + 1.0) <= 1e-2);
  for (std::size_t i = 0; i < c.overlap.size(); ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(c.overlap[i].A[j] - c.bohm[i].A[j]) <= 1e-4);

  std::vector<ComplexField> loop;
  for (std::size_t k = 0; k + 1 < track.size(); ++k) loop.push_back(track.level(k).state);
  const double gp = loop_phase_pancharatnam(loop, wide, go);
  CHECK(std::abs(gp + 1.0) <= 1e-3);
  CHECK(std::abs(gp - go) <= 1e-3);
}

TEST_CASE("Pancharatnam loop phase") {
  const ComplexField psi = ground(oscillator, origin);
  CHECK(loop_phase_pancharatnam({psi, psi, psi}, wide) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));

  const ParameterPath path = rectangle(32, 1.0);
  const LevelTrack track = track_level(coherent, path, 0);
  std::vector<ComplexField> loop;
  for (std::size_t k = 0; k + 1 < track.size(); ++k) loop.push_back(track.level(k).state);
  const double base = loop_phase_pancharatnam(loop, wide);

  auto r = oracle::rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<ComplexField> rotated = loop;
    for (auto& st : rotated) {
      const Complex phase = std::polar(1.0, oracle::uniform(r, -oracle::pi, oracle::pi));
      for (auto& v : st) v *= phase;
    }
    CHECK(std::abs(loop_phase_pancharatnam(rotated, wide) - base) <= 1e-12);
  }

  // The branch nearest a reference is chosen.
  CHECK(loop_phase_pancharatnam(loop, wide, base + 2.0 * oracle::pi) ==
        doctest::Approx(base + 2.0 * oracle::pi));

  const SpectrumSlice two = eigensolve(build(oscillator, origin), 2);
  CHECK_THROWS_AS(loop_phase_pancharatnam({two.states[0], two.states[1]}, wide), TrackingLoss);
}

TEST_CASE("Bohm phase rate") {
  const SpectrumSlice s = eigensolve(build(oscillator, origin), 1);
  const ActionGradient none = action_gradient(s.states[0], s.states[0], 0.1, wide);
  CHECK(phase_rate_bohm(s.energies[0], {none}, std::vector<double>{0.0}, wide) ==
        doctest::Approx(-s.energies[0]));
  CHECK(phase_rate_bohm(0.7, {none}, std::vector<double>{0.0}, wide, 2.0) == doctest::Approx(-0.35));
  CHECK_THROWS_AS(phase_rate_bohm(0.7, {none}, std::vector<double>{0.0, 1.0}, wide), BindingMismatch);

  // Path R = (a, omega t). In the gauge exp(i R2 x) phi0(x - R1) the rate is -E - omega a; the
  // peak-real gauge subtracts omega x* from it.
  const double a = 1.3, omega = 0.2, r2 = 0.5, dR = 0.01;
  const double xs = peak_node(a);
  auto state = [&](double da, double dr2, bool plain) {
    ComplexField psi = ground(coherent, ParameterPoint{a + da, r2 + dr2});
    if (plain)
      for (auto& v : psi) v *= std::polar(1.0, (r2 + dr2) * peak_node(a + da));
    return psi;
  };
  const double E = eigensolve(build(coherent, ParameterPoint{a, r2}), 1).energies[0];
  const std::vector<double> Rdot{0.0, omega};
  for (bool plain : {true, false}) {
    const ActionGradient d1 = action_gradient(state(-dR / 2, 0.0, plain), state(dR / 2, 0.0, plain), dR, wide);
    const ActionGradient d2 = action_gradient(state(0.0, -dR / 2, plain), state(0.0, dR / 2, plain), dR, wide);
    const double rate = phase_rate_bohm(E, {d1, d2}, Rdot, wide);
    CHECK(std::abs(rate - (-E - omega * (plain ? a : a - xs))) <= 1e-3);
  }
}

TEST_CASE("integrated Bohm rate reproduces the total phase") {
  const ParameterPath path = ParameterPath::polyline({{0.0}, {1.0}}, 64, 80.0);
  const LevelTrack track = track_level(moving, path, 0);
  const PhaseRecord rec = overlap_phase(run(moving, path, track, 64), track.levels(), wide);
  const std::vector<double> rate = phase_rate_series(track, wide);
  double integral = 0.0;
  for (std::size_t k = 1; k < rate.size(); ++k)
    integral += 0.5 * (rate[k] + rate[k - 1]) * (path.time(k) - path.time(k - 1));
  CHECK(std::abs(integral - rec.alpha.back()) <= 1e-2);

  const std::vector<double> still = phase_rate_series(track_level(oscillator, ParameterPath::polyline({{0.0}}, 4, 1.0), 0), wide);
  for (double v : still) CHECK(v == doctest::Approx(-0.5).epsilon(1e-3));
}

TEST_CASE("separability of the phase") {
  auto deviation = [](const HamiltonianSpec& spec, const ParameterPath& path) {
    const LevelTrack track = track_level(spec, path, 0);
    const Trajectory traj = run(spec, path, track, 64);
    const MadelungFields f0 = decompose(track.level(0).state, wide);
    std::vector<double> f = dynamical_phase(path.times(), track.energies());
    const std::vector<double> d = separability_check(traj, f0, f);
    double m = 0.0;
    for (double v : d) m = std::max(m, v);
    return m;
  };
  CHECK(deviation(oscillator, ParameterPath::polyline({{0.0}}, 16, 10.0)) <= 1e-6);
  const double d40 = deviation(moving, ParameterPath::polyline({{0.0}, {1.0}}, 64, 40.0));
  const double d80 = deviation(moving, ParameterPath::polyline({{0.0}, {1.0}}, 64, 80.0));
  const double d1 = deviation(moving, ParameterPath::polyline({{0.0}, {1.0}}, 64, 1.0));
  CHECK(d40 <= 0.05);
  CHECK(d80 <= 0.5 * d40);
  CHECK(d1 >= 5.0 * d40);
}

TEST_CASE("density and quantum potential drift") {
  {
    const ParameterPath path = ParameterPath::polyline({{0.0}}, 16, 10.0);
    const LevelTrack track = track_level(oscillator, path, 0);
    const DriftSeries d = rho_q_drift(run(oscillator, path, track, 32), oscillator, path);
    for (double v : d.rho) CHECK(v <= 1e-8);
    for (double v : d.Q) CHECK(v <= 1e-8);
  }
  // Around a closed loop the density comes back; the residual drift shrinks with T.
  auto terminal = [](double T) {
    const ParameterPath path = rectangle(64, T);
    const LevelTrack track = track_level(coherent, path, 0);
    const DriftSeries d = rho_q_drift(run(coherent, path, track, 64), coherent, path);
    return std::pair{d.rho.back(), d.Q.back()};
  };
  const auto [r10, q10] = terminal(10.0);
  const auto [r40, q40] = terminal(40.0);
  CHECK(r40 < r10);
  CHECK(q40 < q10);
}

TEST_CASE("WKB index") {
  const SpatialGrid ring = make_grid(-5.0, 5.0, 256, Boundary::periodic);
  const HamiltonianSpec free = HamiltonianSpec::from_strings("1", "0", "0", 1, PhysicsConfig{1.0}, ring);
  CHECK(wkb_index(oracle::plane_wave(ring, oracle::commensurate_k(ring, 5)), free, origin) <= 1e-12);

  const double ground_index = wkb_index(ground(oscillator, origin), oscillator, origin);
  CHECK(ground_index > 0.3);
  CHECK(ground_index < 0.7);
  const double fast = wkb_index(normalized(oracle::wavepacket(wide, 20.0, 2.0), wide), oscillator, origin);
  CHECK(fast < ground_index);
  const double slow = wkb_index(normalized(oracle::wavepacket(wide, 2.0, 2.0), wide), oscillator, origin);
  CHECK(fast < slow);

  CHECK_THROWS_AS(wkb_index(ComplexField(ring.size(), Complex(1.0, 0.0)), free, origin), InvalidArgument);
}
