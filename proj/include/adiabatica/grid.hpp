#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

namespace adiabatica {

using Complex = std::complex<double>;
using RealField = std::vector<double>;
using ComplexField = std::vector<Complex>;

enum class Boundary { dirichlet, periodic };

Boundary parse_boundary(std::string_view name);
std::string_view to_string(Boundary b);

/// Uniform 1D grid.
///
/// Dirichlet grids include both end points (h = (x_max - x_min)/(n - 1)); wavefunctions are
/// pinned to zero there. Periodic grids exclude x_max (h = (x_max - x_min)/n).
class SpatialGrid {
public:
  SpatialGrid(double x_min, double x_max, int n, Boundary boundary);

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  int size() const noexcept { return n_; }
  Boundary boundary() const noexcept { return boundary_; }
  bool periodic() const noexcept { return boundary_ == Boundary::periodic; }
  double spacing() const noexcept { return h_; }

  double x(int j) const noexcept { return x_min_ + j * h_; }
  RealField nodes() const;

  /// Quadrature weight of node j: trapezoid for dirichlet, rectangle for periodic.
  double weight(int j) const noexcept;

  /// Throws BindingMismatch unless `size` equals the number of nodes.
  void check_binding(std::size_t size, std::string_view what = "field") const;

  bool operator==(const SpatialGrid&) const = default;

private:
  double x_min_;
  double x_max_;
  int n_;
  Boundary boundary_;
  double h_;
};

SpatialGrid make_grid(double x_min, double x_max, int n, Boundary boundary);

/// Central 3-point first derivative. Dirichlet edges use one-sided 2nd-order stencils.
RealField deriv1(std::span<const double> f, const SpatialGrid& grid);

/// Central 3-point second derivative. Dirichlet edges use one-sided 2nd-order stencils.
RealField deriv2(std::span<const double> f, const SpatialGrid& grid);

double integrate(std::span<const double> f, const SpatialGrid& grid);

/// <psi|phi> = integral of conj(psi) * phi.
Complex inner(std::span<const Complex> psi, std::span<const Complex> phi, const SpatialGrid& grid);

double norm(std::span<const Complex> psi, const SpatialGrid& grid);

/// Returns psi scaled to unit norm. Throws InvalidArgument for the zero function.
ComplexField normalized(std::span<const Complex> psi, const SpatialGrid& grid);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a) noexcept;

}  // namespace adiabatica
