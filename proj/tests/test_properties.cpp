// Randomized invariants. Each generator is seeded, so failures reproduce.
#include <doctest.h>

#include <cmath>
#include <string>

#include "adiabatica/error.hpp"
#include "adiabatica/madelung.hpp"
#include "adiabatica/propagate.hpp"
#include "support.hpp"

using namespace adiabatica;

namespace {

using Rng = std::mt19937_64;

int pick(Rng& r, int n) { return std::uniform_int_distribution<int>(0, n - 1)(r); }

std::string number(Rng& r) {
  static const char* values[] = {"0.5", "2", "1.25", "3", "0.1", "1e-2", "7"};
  return values[pick(r, 7)];
}

std::string random_expr(Rng& r, int depth) {
  if (depth == 0 || pick(r, 4) == 0) {
    switch (pick(r, 4)) {
      case 0: return "x";
      case 1: return "R1";
      case 2: return "t";
      default: return number(r);
    }
  }
  switch (pick(r, 7)) {
    case 0: return random_expr(r, depth - 1) + " + " + random_expr(r, depth - 1);
    case 1: return random_expr(r, depth - 1) + " - " + random_expr(r, depth - 1);
    case 2: return "(" + random_expr(r, depth - 1) + ")*(" + random_expr(r, depth - 1) + ")";
    case 3: return "(" + random_expr(r, depth - 1) + ")/(2 + " + random_expr(r, depth - 1) + "^2)";
    case 4: return "(" + random_expr(r, depth - 1) + ")^" + std::to_string(1 + pick(r, 3));
    case 5: return "-" + random_expr(r, depth - 1);
    default: {
      static const char* fns[] = {"sin", "cos", "tanh", "abs", "exp"};
      const char* f = fns[pick(r, 5)];
      const std::string arg = random_expr(r, depth - 1);
      return std::string(f) + (std::string(f) == "exp" ? "(-(" + arg + ")^2)" : "(" + arg + ")");
    }
  }
}

RealField random_field(Rng& r, int n) {
  RealField f(n);
  for (auto& v : f) v = oracle::uniform(r, -1.0, 1.0);
  return f;
}

ComplexField random_state(Rng& r, const SpatialGrid& g) {
  ComplexField psi(g.size());
  for (auto& v : psi) v = Complex(oracle::uniform(r, -1, 1), oracle::uniform(r, -1, 1));
  if (!g.periodic()) psi.front() = psi.back() = Complex{};
  return normalized(psi, g);
}

double dot(const RealField& a, const RealField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

SpatialGrid random_grid(Rng& r, Boundary b) {
  const double lo = oracle::uniform(r, -5.0, 0.0);
  return make_grid(lo, lo + oracle::uniform(r, 1.0, 8.0), 8 + pick(r, 60), b);
}

}  // namespace

TEST_CASE("print then parse is the identity on expression trees") {
  Rng r = oracle::rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const std::string src = random_expr(r, 4);
    const Expr e = parse(src, 1);
    const Expr back = parse(e.print(), 1);
    CHECK_MESSAGE(back == e, src);
    CHECK(back.print() == e.print());
    const double x = oracle::uniform(r, -2, 2), t = oracle::uniform(r, 0, 3);
    const std::vector<double> R{oracle::uniform(r, -1, 1)};
    try {
      const double v = e.eval(x, R, t);
      CHECK(back.eval(x, R, t) == v);
    } catch (const EvalError&) {
      CHECK_THROWS_AS(back.eval(x, R, t), EvalError);
    }
  }
}

TEST_CASE("periodic difference matrices: D1 antisymmetric, D2 symmetric") {
  Rng r = oracle::rng(202);
  for (int trial = 0; trial < 50; ++trial) {
    const SpatialGrid g = random_grid(r, Boundary::periodic);
    const RealField u = random_field(r, g.size()), v = random_field(r, g.size());
    const double scale = 1.0 / (g.spacing() * g.spacing());
    CHECK(std::abs(dot(u, deriv1(v, g)) + dot(deriv1(u, g), v)) <= 1e-12 * scale * g.size());
    CHECK(std::abs(dot(u, deriv2(v, g)) - dot(deriv2(u, g), v)) <= 1e-12 * scale * g.size());
    // A derivative integrates to zero around the ring.
    CHECK(std::abs(integrate(deriv1(u, g), g)) <= 1e-12 * scale);
  }
}

TEST_CASE("assembled operators are Hermitian") {
  Rng r = oracle::rng(303);
  for (int trial = 0; trial < 40; ++trial) {
    const SpatialGrid g = random_grid(r, trial % 2 ? Boundary::periodic : Boundary::dirichlet);
    const std::string A = random_expr(r, 2), V = random_expr(r, 2);
    HamiltonianSpec spec = HamiltonianSpec::from_strings("1 + R1^2", A, V, 1, PhysicsConfig{oracle::uniform(r, 0.3, 2.0)}, g);
    const ParameterPoint R{oracle::uniform(r, -1, 1)};
    HermitianOperator H = [&] {
      try {
        return build(spec, R, 0.5);
      } catch (const EvalError&) {
        return build(HamiltonianSpec::from_strings("1", A, "x^2", 1, PhysicsConfig{}, g), R, 0.5);
      }
    }();
    const ComplexField a = random_state(r, g), b = random_state(r, g);
    const Complex lhs = inner(a, H.apply(b), g), rhs = std::conj(inner(b, H.apply(a), g));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * H.max_abs());
    CHECK(std::abs(inner(a, H.apply(a), g).imag()) <= 1e-12 * H.max_abs());
  }
}

TEST_CASE("Crank-Nicolson steps are unitary") {
  Rng r = oracle::rng(404);
  for (int trial = 0; trial < 40; ++trial) {
    const SpatialGrid g = random_grid(r, trial % 2 ? Boundary::periodic : Boundary::dirichlet);
    const HamiltonianSpec spec = HamiltonianSpec::from_strings(
        "1", std::to_string(oracle::uniform(r, -2, 2)) + "*sin(x)", "x^2", 1, PhysicsConfig{}, g);
    const HermitianOperator H = build(spec, ParameterPoint{0.0});
    const ComplexField a = random_state(r, g), b = random_state(r, g);
    const double dt = oracle::uniform(r, 1e-3, 1.0);
    const ComplexField sa = step(a, H, dt), sb = step(b, H, dt);
    CHECK(std::abs(norm(sa, g) - 1.0) <= 1e-12);
    // Inner products are preserved, not only norms.
    CHECK(std::abs(inner(sa, sb, g) - inner(a, b, g)) <= 1e-12);
  }
}

TEST_CASE("constant potential offsets shift every eigenvalue") {
  Rng r = oracle::rng(505);
  for (int trial = 0; trial < 20; ++trial) {
    const SpatialGrid g = random_grid(r, trial % 2 ? Boundary::periodic : Boundary::dirichlet);
    const double c = oracle::uniform(r, -3, 3);
    const std::string V = "x^2*" + std::to_string(oracle::uniform(r, 0.1, 2.0));
    const auto spec = [&](const std::string& pot) {
      return HamiltonianSpec::from_strings("1", "0.3*x", pot, 1, PhysicsConfig{}, g);
    };
    const SpectrumSlice a = eigensolve(build(spec(V), ParameterPoint{0.0}), 4);
    const SpectrumSlice b = eigensolve(build(spec(V + " + " + std::to_string(c)), ParameterPoint{0.0}), 4);
    for (int k = 0; k < 4; ++k)
      CHECK(b.energies[k] - a.energies[k] == doctest::Approx(std::stod(std::to_string(c))).epsilon(1e-9));
  }
}

TEST_CASE("Madelung decomposition is exact on unmasked nodes") {
  Rng r = oracle::rng(606);
  for (int trial = 0; trial < 40; ++trial) {
    const SpatialGrid g = random_grid(r, trial % 2 ? Boundary::periodic : Boundary::dirichlet);
    const ComplexField psi = random_state(r, g);
    const double hbar = oracle::uniform(r, 0.2, 3.0);
    const MadelungFields f = decompose(psi, g, PhysicsConfig{hbar});
    int covered = 0;
    for (const Run& run : f.runs) {
      CHECK(run.size() > 0);
      covered += run.size();
      for (int j = run.begin; j < run.end; ++j) {
        CHECK(f.defined(j));
        CHECK(std::abs(std::polar(std::sqrt(f.rho[j]), f.S[j] / hbar) - psi[j]) <= 1e-12);
        // Inside a run S moves by less than pi hbar / 2 per node.
        if (j > run.begin) CHECK(std::abs(f.S[j] - f.S[j - 1]) <= 0.5 * oracle::pi * hbar + 1e-12);
      }
    }
    CHECK(covered + f.masked == g.size());
  }
}

TEST_CASE("polyline paths respect their waypoints") {
  Rng r = oracle::rng(707);
  for (int trial = 0; trial < 100; ++trial) {
    const int legs = 1 + pick(r, 4), dim = 1 + pick(r, 3);
    // Legs no shorter than 0.5 so that each one is resolved by at least one segment.
    std::vector<ParameterPoint> w(legs + 1, ParameterPoint(dim));
    for (int c = 0; c < dim; ++c) w[0][c] = oracle::uniform(r, -2, 2);
    for (int l = 1; l <= legs; ++l) {
      w[l] = w[l - 1];
      w[l][0] += (pick(r, 2) ? 1.0 : -1.0) * oracle::uniform(r, 0.5, 2.0);
      for (int c = 1; c < dim; ++c) w[l][c] += oracle::uniform(r, -1, 1);
    }
    const int segments = 12 * legs + pick(r, 40);
    const double T = oracle::uniform(r, 0.1, 100.0);
    const ParameterPath p = ParameterPath::polyline(w, segments, T);
    CHECK(p.size() == static_cast<std::size_t>(segments + 1));
    CHECK(p.time(0) == 0.0);
    CHECK(p.duration() == doctest::Approx(T));
    for (int c = 0; c < dim; ++c) {
      CHECK(p.point(0)[c] == w.front()[c]);
      CHECK(p.point(p.size() - 1)[c] == doctest::Approx(w.back()[c]));
    }
    for (std::size_t k = 1; k < p.size(); ++k) CHECK(p.time(k) > p.time(k - 1));
    const double t = oracle::uniform(r, 0.0, T);
    CHECK(p.at(t).size() == static_cast<std::size_t>(dim));
  }
}

TEST_CASE("wrap_angle lands in (-pi, pi] and preserves the angle") {
  Rng r = oracle::rng(808);
  for (int trial = 0; trial < 1000; ++trial) {
    const double a = oracle::uniform(r, -50.0, 50.0);
    const double w = wrap_angle(a);
    CHECK(w > -oracle::pi);
    CHECK(w <= oracle::pi);
    CHECK(std::abs(std::remainder(a - w, 2.0 * oracle::pi)) <= 1e-12);
  }
}
