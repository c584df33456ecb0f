#pragma once

#include <span>
#include <vector>

#include "adiabatica/spectrum.hpp"

namespace adiabatica {

/// psi at the path sample times.
struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexField> states;
  std::vector<double> norms;
  double max_step_norm_error = 0.0;  // max over steps of | ||psi'|| - ||psi|| |
  long steps = 0;
};

/// Per-step bound on the change of the norm.
inline constexpr double step_norm_tolerance = 1e-10;

/// One Crank-Nicolson step (I + i dt/2hbar H) psi' = (I - i dt/2hbar H) psi with a tridiagonal
/// solve (Sherman-Morrison for the periodic corner). Throws NormViolation if the norm moves by
/// more than step_norm_tolerance.
ComplexField step(std::span<const Complex> psi, const HermitianOperator& H_mid, double dt,
                  double hbar = 1.0);

/// Propagates psi0 along the path, R linear between samples, with steps_per_sample equal steps
/// per segment and H taken at each step's midpoint time.
Trajectory evolve(const HamiltonianSpec& spec, const ParameterPath& path,
                  std::span<const Complex> psi0, int steps_per_sample);

}  // namespace adiabatica
