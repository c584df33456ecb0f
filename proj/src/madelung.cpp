#include "adiabatica/madelung.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "adiabatica/error.hpp"

namespace adiabatica {
namespace {

constexpr double node_jump = std::numbers::pi / 2.0;

// Wrapped phase increment from node a to node b.
double dphase(const MadelungFields& f, int a, int b) {
  return wrap_angle(f.phase[b] - f.phase[a]);
}

}  // namespace

int MadelungFields::run_of(int j) const {
  for (std::size_t r = 0; r < runs.size(); ++r)
    if (runs[r].contains(j)) return static_cast<int>(r);
  return -1;
}

MadelungFields decompose(std::span<const Complex> psi, const SpatialGrid& grid,
                         const PhysicsConfig& physics, double node_eps) {
  grid.check_binding(psi.size(), "wavefunction");
  if (!(node_eps > 0.0)) throw InvalidArgument("node threshold must be positive");
  const int n = grid.size();

  MadelungFields f{grid, physics.hbar, RealField(n), RealField(n, 0.0), RealField(n),
                   std::vector<std::uint8_t>(n, 0), {}, RealField(n, 0.0), RealField(n, 0.0), 0};
  double peak = 0.0;
  for (int j = 0; j < n; ++j) {
    f.rho[j] = std::norm(psi[j]);
    f.phase[j] = std::arg(psi[j]);
    peak = std::max(peak, f.rho[j]);
  }
  if (!(peak > 0.0)) throw InvalidArgument("cannot decompose the zero wavefunction");

  const double eps = node_eps * peak;
  for (int j = 0; j < n; ++j) f.mask[j] = f.rho[j] >= eps;
  // A sign change between two nodes hides a zero that the density threshold cannot see.
  std::vector<std::uint8_t> straddle(n, 0);
  const int bonds = grid.periodic() ? n : n - 1;
  for (int j = 0; j < bonds; ++j) {
    const int k = (j + 1) % n;
    if (f.mask[j] && f.mask[k] && std::abs(dphase(f, j, k)) > node_jump) straddle[j] = straddle[k] = 1;
  }
  for (int j = 0; j < n; ++j)
    if (straddle[j]) f.mask[j] = 0;

  for (int j = 0; j < n;) {
    if (!f.mask[j]) {
      ++f.masked;
      ++j;
      continue;
    }
    Run run{j, j};
    f.S[j] = physics.hbar * f.phase[j];
    for (run.end = j + 1; run.end < n && f.mask[run.end]; ++run.end)
      f.S[run.end] = f.S[run.end - 1] + physics.hbar * dphase(f, run.end - 1, run.end);
    f.runs.push_back(run);
    j = run.end;
  }
  if (f.runs.empty()) throw InvalidArgument("every node is masked");
  return f;
}

RealField phase_gradient(const MadelungFields& f) {
  const SpatialGrid& grid = f.grid;
  const int n = grid.size();
  const double h = grid.spacing();
  const double c = f.hbar / h;
  RealField out(n, 0.0);
  auto ok = [&](int j) { return f.mask[j] != 0; };
  for (int j = 0; j < n; ++j) {
    if (!ok(j)) continue;
    int lo = j - 1, hi = j + 1;
    if (grid.periodic()) {
      lo = (lo + n) % n;
      hi = hi % n;
    }
    const bool left = lo >= 0 && ok(lo);
    const bool right = hi < n && ok(hi);
    if (left && right) {
      out[j] = 0.5 * c * (dphase(f, lo, j) + dphase(f, j, hi));
    } else if (right) {
      const int hh = grid.periodic() ? (hi + 1) % n : hi + 1;
      if (hh < n && ok(hh) && hh != j)
        out[j] = c * (2.0 * dphase(f, j, hi) - 0.5 * (dphase(f, j, hi) + dphase(f, hi, hh)));
      else out[j] = c * dphase(f, j, hi);
    } else if (left) {
      const int ll = grid.periodic() ? (lo - 1 + n) % n : lo - 1;
      if (ll >= 0 && ok(ll) && ll != j)
        out[j] = c * (2.0 * dphase(f, lo, j) - 0.5 * (dphase(f, ll, lo) + dphase(f, lo, j)));
      else out[j] = c * dphase(f, lo, j);
    }
  }
  return out;
}

RealField quantum_potential(const MadelungFields& f, double g) {
  const int n = f.grid.size();
  RealField amp(n);
  for (int j = 0; j < n; ++j) amp[j] = std::sqrt(f.rho[j]);
  const RealField d2 = deriv2(amp, f.grid);
  RealField Q(n, 0.0);
  for (int j = 0; j < n; ++j)
    if (f.mask[j]) Q[j] = -f.hbar * f.hbar * g * d2[j] / (2.0 * amp[j]);
  return Q;
}

RealField bond_current(std::span<const Complex> psi, std::span<const double> A, double g,
                       const SpatialGrid& grid, double hbar) {
  grid.check_binding(psi.size(), "wavefunction");
  grid.check_binding(A.size(), "vector potential");
  const int n = grid.size();
  const double h = grid.spacing();
  RealField bond(n, 0.0);
  const int bonds = grid.periodic() ? n : n - 1;
  for (int j = 0; j < bonds; ++j) {
    const int k = (j + 1) % n;
    // conj(psi_j) psi_k = a_j a_k exp(i dtheta)
    const Complex link = std::conj(psi[j]) * psi[k];
    const double Abar = 0.5 * (A[j] + A[k]);
    bond[j] = g * ((hbar / h) * link.imag() - Abar * link.real());
  }
  return bond;
}

RealField current(std::span<const Complex> psi, const MadelungFields& f,
                  std::span<const double> A, double g) {
  const int n = f.grid.size();
  const RealField bond = bond_current(psi, A, g, f.grid, f.hbar);
  RealField J(n, 0.0);
  for (int j = 0; j < n; ++j) {
    if (!f.mask[j]) continue;
    const bool has_left = f.grid.periodic() || j > 0;
    const bool has_right = f.grid.periodic() || j < n - 1;
    const double left = has_left ? bond[(j - 1 + n) % n] : 0.0;
    const double right = has_right ? bond[j] : 0.0;
    J[j] = has_left && has_right ? 0.5 * (left + right) : (has_left ? left : right);
  }
  return J;
}

MadelungFields analyze(std::span<const Complex> psi, const HamiltonianSpec& spec,
                       std::span<const double> R, double t, double node_eps) {
  MadelungFields f = decompose(psi, spec.grid, spec.physics, node_eps);
  const double g = spec.metric(R);
  f.Q = quantum_potential(f, g);
  f.J = current(psi, f, spec.A.sample(spec.grid, R, t), g);
  return f;
}

RealField qhj_residual(const MadelungFields& f, const HamiltonianSpec& spec,
                       std::span<const double> R, double energy, double t) {
  const RealField H = classical_field(spec, R, phase_gradient(f), t);
  RealField r(H.size(), 0.0);
  for (std::size_t j = 0; j < r.size(); ++j)
    if (f.mask[j]) r[j] = H[j] + f.Q[j] - energy;
  return r;
}

RealField qhj_residual(const MadelungFields& f, const HamiltonianSpec& spec,
                       std::span<const double> R, std::span<const double> dtS, double t) {
  f.grid.check_binding(dtS.size(), "dS/dt field");
  const RealField H = classical_field(spec, R, phase_gradient(f), t);
  RealField r(H.size(), 0.0);
  for (std::size_t j = 0; j < r.size(); ++j)
    if (f.mask[j]) r[j] = dtS[j] + H[j] + f.Q[j];
  return r;
}

RealField continuity_residual(const MadelungFields& f, std::span<const double> dtRho) {
  if (!dtRho.empty()) f.grid.check_binding(dtRho.size(), "drho/dt field");
  const RealField div = deriv1(f.J, f.grid);
  RealField r(div.size(), 0.0);
  for (std::size_t j = 0; j < r.size(); ++j)
    if (f.mask[j]) r[j] = div[j] + (dtRho.empty() ? 0.0 : dtRho[j]);
  return r;
}

double weighted_rms(std::span<const double> values, const MadelungFields& f) {
  f.grid.check_binding(values.size());
  double num = 0.0, den = 0.0;
  for (int j = 0; j < f.grid.size(); ++j) {
    if (!f.mask[j]) continue;
    const double w = f.grid.weight(j) * f.rho[j];
    num += w * values[j] * values[j];
    den += w;
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

double weighted_stddev(std::span<const double> values, const MadelungFields& f) {
  f.grid.check_binding(values.size());
  double mean = 0.0, den = 0.0;
  for (int j = 0; j < f.grid.size(); ++j) {
    if (!f.mask[j]) continue;
    const double w = f.grid.weight(j) * f.rho[j];
    mean += w * values[j];
    den += w;
  }
  if (!(den > 0.0)) return 0.0;
  mean /= den;
  double num = 0.0;
  for (int j = 0; j < f.grid.size(); ++j)
    if (f.mask[j]) num += f.grid.weight(j) * f.rho[j] * (values[j] - mean) * (values[j] - mean);
  return std::sqrt(num / den);
}

}  // namespace adiabatica
