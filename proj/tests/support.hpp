#pragma once

// Independent reference values for tests: closed forms and hand-built fields, computed
// without the library's solvers.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "adiabatica/grid.hpp"

namespace oracle {

using adiabatica::Complex;
using adiabatica::ComplexField;
using adiabatica::RealField;
using adiabatica::SpatialGrid;

inline constexpr double pi = std::numbers::pi;

// Hermite-function oscillator eigenstates (hbar = m = omega = 1) centred at c.
inline double hermite_function(int n, double x) {
  double h0 = std::exp(-0.5 * x * x) / std::pow(pi, 0.25);
  if (n == 0) return h0;
  double h1 = std::sqrt(2.0) * x * h0;
  for (int k = 2; k <= n; ++k) {
    const double h2 = std::sqrt(2.0 / k) * x * h1 - std::sqrt((k - 1.0) / k) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

inline ComplexField oscillator_state(const SpatialGrid& g, int n, double c = 0.0) {
  ComplexField psi(g.size());
  for (int j = 0; j < g.size(); ++j) psi[j] = hermite_function(n, g.x(j) - c);
  return psi;
}

// exp(i k x) on a periodic grid; normalized.
inline ComplexField plane_wave(const SpatialGrid& g, double k) {
  const double L = g.x_max() - g.x_min();
  ComplexField psi(g.size());
  for (int j = 0; j < g.size(); ++j) psi[j] = std::polar(1.0 / std::sqrt(L), k * g.x(j));
  return psi;
}

// Gaussian packet of width sigma and mean momentum k, normalized analytically.
inline ComplexField wavepacket(const SpatialGrid& g, double k, double sigma, double c = 0.0) {
  ComplexField psi(g.size());
  const double a = 1.0 / std::pow(2.0 * pi * sigma * sigma, 0.25);
  for (int j = 0; j < g.size(); ++j) {
    const double u = g.x(j) - c;
    psi[j] = std::polar(a * std::exp(-u * u / (4.0 * sigma * sigma)), k * g.x(j));
  }
  return psi;
}

// Commensurate wavenumber 2 pi m / L for a periodic grid.
inline double commensurate_k(const SpatialGrid& g, int m) {
  return 2.0 * pi * m / (g.x_max() - g.x_min());
}

inline std::mt19937_64 rng(unsigned long seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& r, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(r);
}

inline double max_abs_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace oracle
