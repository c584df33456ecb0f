#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "adiabatica/expr.hpp"
#include "adiabatica/grid.hpp"

namespace adiabatica {

struct PhysicsConfig {
  double hbar = 1.0;
};

/// Coordinates R = (R1, ..., Rm) of a point in parameter space.
using ParameterPoint = std::vector<double>;

/// H = (g(R)/2) (p - A(x;R))^2 + V(x;R) on a 1D grid.
struct HamiltonianSpec {
  Expr g;
  Expr A;
  Expr V;
  PhysicsConfig physics;
  SpatialGrid grid;
  int params;

  /// Parses the three expressions and validates hbar > 0 and that g does not depend on x.
  static HamiltonianSpec from_strings(std::string_view g, std::string_view A, std::string_view V,
                                      int params, PhysicsConfig physics, SpatialGrid grid);

  /// g(R); throws InvalidArgument when g(R) <= 0.
  double metric(std::span<const double> R) const;
};

/// Banded Hermitian matrix of size n: real diagonal, complex first super-diagonal and, on
/// periodic grids, the wrap-around coupling H(n-1, 0). Dirichlet end nodes are pinned: their
/// rows and columns are zero, so apply() keeps psi(x_min) = psi(x_max) = 0.
class HermitianOperator {
public:
  HermitianOperator(SpatialGrid grid, ParameterPoint R, RealField diag, ComplexField upper,
                    Complex wrap);

  const SpatialGrid& grid() const noexcept { return grid_; }
  const ParameterPoint& point() const noexcept { return R_; }
  int size() const noexcept { return grid_.size(); }

  const RealField& diag() const noexcept { return diag_; }
  /// upper()[j] = H(j, j+1).
  const ComplexField& upper() const noexcept { return upper_; }
  /// H(n-1, 0); zero on dirichlet grids.
  Complex wrap() const noexcept { return wrap_; }

  /// Element access for tests and dense export.
  Complex operator()(int row, int col) const;

  ComplexField apply(std::span<const Complex> psi) const;

  /// Row-major dense copy.
  std::vector<Complex> dense() const;

  double max_abs() const;

  /// <psi|H|psi> / <psi|psi>.
  double rayleigh_quotient(std::span<const Complex> psi) const;

private:
  SpatialGrid grid_;
  ParameterPoint R_;
  RealField diag_;
  ComplexField upper_;
  Complex wrap_;
};

/// Assembles (g/2)[-hbar^2 D2 + i hbar (D1 A + A D1) + A^2] + V with 3-point stencils.
HermitianOperator build(const HamiltonianSpec& spec, std::span<const double> R, double t = 0.0);

/// Pointwise (g/2)(p(x) - A(x;R))^2 + V(x;R).
RealField classical_field(const HamiltonianSpec& spec, std::span<const double> R,
                          std::span<const double> p, double t = 0.0);

}  // namespace adiabatica
