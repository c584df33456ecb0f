#include "adiabatica/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "adiabatica/error.hpp"

namespace adiabatica {

Boundary parse_boundary(std::string_view name) {
  if (name == "dirichlet") return Boundary::dirichlet;
  if (name == "periodic") return Boundary::periodic;
  throw InvalidArgument("unknown boundary '" + std::string(name) +
                        "' (expected dirichlet or periodic)");
}

std::string_view to_string(Boundary b) {
  return b == Boundary::periodic ? "periodic" : "dirichlet";
}

SpatialGrid::SpatialGrid(double x_min, double x_max, int n, Boundary boundary)
    : x_min_(x_min), x_max_(x_max), n_(n), boundary_(boundary), h_(0.0) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max))
    throw InvalidArgument("grid requires finite x_min < x_max");
  if (n < 8) throw InvalidArgument("grid requires n >= 8, got " + std::to_string(n));
  h_ = boundary == Boundary::periodic ? (x_max - x_min) / n : (x_max - x_min) / (n - 1);
}

SpatialGrid make_grid(double x_min, double x_max, int n, Boundary boundary) {
  return SpatialGrid(x_min, x_max, n, boundary);
}

RealField SpatialGrid::nodes() const {
  RealField out(n_);
  for (int j = 0; j < n_; ++j) out[j] = x(j);
  return out;
}

double SpatialGrid::weight(int j) const noexcept {
  if (boundary_ == Boundary::dirichlet && (j == 0 || j == n_ - 1)) return 0.5 * h_;
  return h_;
}

void SpatialGrid::check_binding(std::size_t size, std::string_view what) const {
  if (size != static_cast<std::size_t>(n_))
    throw BindingMismatch(std::string(what) + " has " + std::to_string(size) +
                          " samples, grid has " + std::to_string(n_));
}

RealField deriv1(std::span<const double> f, const SpatialGrid& grid) {
  grid.check_binding(f.size());
  const int n = grid.size();
  const double h = grid.spacing();
  RealField out(n);
  for (int j = 1; j < n - 1; ++j) out[j] = (f[j + 1] - f[j - 1]) / (2.0 * h);
  if (grid.periodic()) {
    out[0] = (f[1] - f[n - 1]) / (2.0 * h);
    out[n - 1] = (f[0] - f[n - 2]) / (2.0 * h);
  } else {
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  }
  return out;
}

RealField deriv2(std::span<const double> f, const SpatialGrid& grid) {
  grid.check_binding(f.size());
  const int n = grid.size();
  const double h2 = grid.spacing() * grid.spacing();
  RealField out(n);
  for (int j = 1; j < n - 1; ++j) out[j] = (f[j + 1] - 2.0 * f[j] + f[j - 1]) / h2;
  if (grid.periodic()) {
    out[0] = (f[1] - 2.0 * f[0] + f[n - 1]) / h2;
    out[n - 1] = (f[0] - 2.0 * f[n - 1] + f[n - 2]) / h2;
  } else {
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
  }
  return out;
}

double integrate(std::span<const double> f, const SpatialGrid& grid) {
  grid.check_binding(f.size());
  double sum = 0.0;
  for (int j = 0; j < grid.size(); ++j) sum += grid.weight(j) * f[j];
  return sum;
}

Complex inner(std::span<const Complex> psi, std::span<const Complex> phi, const SpatialGrid& grid) {
  grid.check_binding(psi.size(), "bra");
  grid.check_binding(phi.size(), "ket");
  Complex sum{0.0, 0.0};
  for (int j = 0; j < grid.size(); ++j) sum += grid.weight(j) * std::conj(psi[j]) * phi[j];
  return sum;
}

double norm(std::span<const Complex> psi, const SpatialGrid& grid) {
  grid.check_binding(psi.size());
  double sum = 0.0;
  for (int j = 0; j < grid.size(); ++j) sum += grid.weight(j) * std::norm(psi[j]);
  return std::sqrt(sum);
}

ComplexField normalized(std::span<const Complex> psi, const SpatialGrid& grid) {
  const double nrm = norm(psi, grid);
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw InvalidArgument("cannot normalize a zero field");
  ComplexField out(psi.begin(), psi.end());
  for (auto& v : out) v /= nrm;
  return out;
}

double wrap_angle(double a) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(a, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

}  // namespace adiabatica
