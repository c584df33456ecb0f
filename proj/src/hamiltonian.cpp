#include "adiabatica/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adiabatica/error.hpp"

namespace adiabatica {

HamiltonianSpec HamiltonianSpec::from_strings(std::string_view g, std::string_view A,
                                              std::string_view V, int params,
                                              PhysicsConfig physics, SpatialGrid grid) {
  if (params < 1) throw InvalidArgument("parameter space needs at least one coordinate");
  if (!(physics.hbar > 0.0) || !std::isfinite(physics.hbar))
    throw InvalidArgument("hbar must be positive");
  HamiltonianSpec spec{Expr::parse(g, params), Expr::parse(A, params), Expr::parse(V, params),
                       physics, std::move(grid), params};
  if (spec.g.depends_on_x()) throw InvalidArgument("metric g may depend on R only, not on x");
  return spec;
}

double HamiltonianSpec::metric(std::span<const double> R) const {
  const double value = g.eval(0.0, R);
  if (!(value > 0.0)) throw InvalidArgument("metric g(R) must be positive, got " + std::to_string(value));
  return value;
}

HermitianOperator::HermitianOperator(SpatialGrid grid, ParameterPoint R, RealField diag,
                                     ComplexField upper, Complex wrap)
    : grid_(std::move(grid)), R_(std::move(R)), diag_(std::move(diag)),
      upper_(std::move(upper)), wrap_(wrap) {
  grid_.check_binding(diag_.size(), "operator diagonal");
  if (upper_.size() + 1 != diag_.size()) throw BindingMismatch("operator super-diagonal size");
}

Complex HermitianOperator::operator()(int row, int col) const {
  const int n = size();
  if (row == col) return diag_[row];
  if (col == row + 1) return upper_[row];
  if (row == col + 1) return std::conj(upper_[col]);
  if (row == n - 1 && col == 0) return wrap_;
  if (row == 0 && col == n - 1) return std::conj(wrap_);
  return {0.0, 0.0};
}

ComplexField HermitianOperator::apply(std::span<const Complex> psi) const {
  grid_.check_binding(psi.size());
  const int n = size();
  ComplexField out(n);
  for (int j = 0; j < n; ++j) out[j] = diag_[j] * psi[j];
  for (int j = 0; j + 1 < n; ++j) {
    out[j] += upper_[j] * psi[j + 1];
    out[j + 1] += std::conj(upper_[j]) * psi[j];
  }
  if (wrap_ != Complex{}) {
    out[n - 1] += wrap_ * psi[0];
    out[0] += std::conj(wrap_) * psi[n - 1];
  }
  return out;
}

std::vector<Complex> HermitianOperator::dense() const {
  const int n = size();
  std::vector<Complex> m(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r)
    for (int c = std::max(0, r - 1); c <= std::min(n - 1, r + 1); ++c) m[r * n + c] = (*this)(r, c);
  if (n > 2) {
    m[(n - 1) * n] += wrap_;
    m[n - 1] += std::conj(wrap_);
  }
  return m;
}

double HermitianOperator::max_abs() const {
  double m = std::abs(wrap_);
  for (double d : diag_) m = std::max(m, std::abs(d));
  for (const Complex& u : upper_) m = std::max(m, std::abs(u));
  return m;
}

double HermitianOperator::rayleigh_quotient(std::span<const Complex> psi) const {
  const ComplexField hpsi = apply(psi);
  return (inner(psi, hpsi, grid_) / inner(psi, psi, grid_)).real();
}

HermitianOperator build(const HamiltonianSpec& spec, std::span<const double> R, double t) {
  const SpatialGrid& grid = spec.grid;
  const int n = grid.size();
  const double h = grid.spacing();
  const double hbar = spec.physics.hbar;
  const double g = spec.metric(R);
  const RealField A = spec.A.sample(grid, R, t);
  const RealField V = spec.V.sample(grid, R, t);

  const double kinetic = hbar * hbar / (h * h);
  auto coupling = [&](int a, int b) {
    return 0.5 * g * Complex(-kinetic, hbar * (A[a] + A[b]) / (2.0 * h));
  };

  RealField diag(n);
  ComplexField upper(n - 1);
  for (int j = 0; j < n; ++j) diag[j] = 0.5 * g * (2.0 * kinetic + A[j] * A[j]) + V[j];
  for (int j = 0; j + 1 < n; ++j) upper[j] = coupling(j, j + 1);

  Complex wrap{};
  if (grid.periodic()) {
    wrap = coupling(n - 1, 0);
  } else {
    diag.front() = diag.back() = 0.0;
    upper.front() = upper.back() = Complex{};
  }
  return HermitianOperator(grid, ParameterPoint(R.begin(), R.end()), std::move(diag),
                           std::move(upper), wrap);
}

RealField classical_field(const HamiltonianSpec& spec, std::span<const double> R,
                          std::span<const double> p, double t) {
  spec.grid.check_binding(p.size(), "momentum field");
  const double g = spec.metric(R);
  const RealField A = spec.A.sample(spec.grid, R, t);
  const RealField V = spec.V.sample(spec.grid, R, t);
  RealField out(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double k = p[j] - A[j];
    out[j] = 0.5 * g * k * k + V[j];
  }
  return out;
}

}  // namespace adiabatica
