#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "adiabatica/propagate.hpp"

#include <cmath>
#include <string>

#include "adiabatica/error.hpp"

namespace adiabatica {
namespace {

// Solves the tridiagonal system in place for `nrhs` column-major right-hand sides.
void tridiagonal_solve(std::vector<Complex> lower, std::vector<Complex> diag,
                       std::vector<Complex> upper, std::vector<Complex>& rhs, int nrhs) {
  const lapack_int m = static_cast<lapack_int>(diag.size());
  const lapack_int info = LAPACKE_zgtsv(LAPACK_COL_MAJOR, m, nrhs, lower.data(), diag.data(),
                                        upper.data(), rhs.data(), m);
  if (info != 0)
    throw SolverFailure("Crank-Nicolson tridiagonal solve (zgtsv) failed, info = " +
                        std::to_string(info));
}

}  // namespace

ComplexField step(std::span<const Complex> psi, const HermitianOperator& H, double dt,
                  double hbar) {
  const SpatialGrid& grid = H.grid();
  grid.check_binding(psi.size(), "wavefunction");
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  const int n = H.size();
  const Complex itau(0.0, dt / (2.0 * hbar));

  const ComplexField hpsi = H.apply(psi);
  ComplexField out(n, Complex{});

  if (!grid.periodic()) {
    const int m = n - 2;
    std::vector<Complex> lower(m - 1), diag(m), upper(m - 1), rhs(m);
    for (int i = 0; i < m; ++i) {
      diag[i] = 1.0 + itau * H.diag()[i + 1];
      rhs[i] = psi[i + 1] - itau * hpsi[i + 1];
    }
    for (int i = 0; i + 1 < m; ++i) {
      upper[i] = itau * H.upper()[i + 1];
      lower[i] = itau * std::conj(H.upper()[i + 1]);
    }
    tridiagonal_solve(std::move(lower), std::move(diag), std::move(upper), rhs, 1);
    for (int i = 0; i < m; ++i) out[i + 1] = rhs[i];
  } else {
    // M = T + u v^T with the corner entries moved into u, v.
    const Complex bottom_left = itau * H.wrap();
    const Complex top_right = itau * std::conj(H.wrap());
    std::vector<Complex> lower(n - 1), diag(n), upper(n - 1);
    for (int i = 0; i < n; ++i) diag[i] = 1.0 + itau * H.diag()[i];
    for (int i = 0; i + 1 < n; ++i) {
      upper[i] = itau * H.upper()[i];
      lower[i] = itau * std::conj(H.upper()[i]);
    }
    const Complex gamma = -diag[0];
    diag[0] -= gamma;
    diag[n - 1] -= bottom_left * top_right / gamma;

    std::vector<Complex> rhs(2 * static_cast<std::size_t>(n), Complex{});
    for (int i = 0; i < n; ++i) rhs[i] = psi[i] - itau * hpsi[i];
    rhs[n] = gamma;
    rhs[2 * n - 1] = bottom_left;
    tridiagonal_solve(std::move(lower), std::move(diag), std::move(upper), rhs, 2);

    const Complex* y = rhs.data();
    const Complex* z = rhs.data() + n;
    const Complex v_last = top_right / gamma;
    const Complex factor = (y[0] + v_last * y[n - 1]) / (1.0 + z[0] + v_last * z[n - 1]);
    for (int i = 0; i < n; ++i) out[i] = y[i] - factor * z[i];
  }

  const double before = norm(psi, grid);
  const double after = norm(out, grid);
  if (!(std::abs(after - before) <= step_norm_tolerance))
    throw NormViolation("Crank-Nicolson step changed the norm by " +
                        std::to_string(after - before));
  return out;
}

Trajectory evolve(const HamiltonianSpec& spec, const ParameterPath& path,
                  std::span<const Complex> psi0, int steps_per_sample) {
  if (steps_per_sample < 1) throw InvalidArgument("steps_per_sample must be at least 1");
  spec.grid.check_binding(psi0.size(), "initial state");

  Trajectory traj;
  ComplexField psi(psi0.begin(), psi0.end());
  traj.times.push_back(path.time(0));
  traj.states.push_back(psi);
  traj.norms.push_back(norm(psi, spec.grid));

  const double hbar = spec.physics.hbar;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const double t0 = path.time(k);
    const double dt = (path.time(k + 1) - t0) / steps_per_sample;
    const ParameterPoint& a = path.point(k);
    const ParameterPoint& b = path.point(k + 1);
    ParameterPoint R(a.size());
    for (int s = 0; s < steps_per_sample; ++s) {
      const double f = (s + 0.5) / steps_per_sample;
      for (std::size_t j = 0; j < R.size(); ++j) R[j] = a[j] + f * (b[j] - a[j]);
      const double before = norm(psi, spec.grid);
      psi = step(psi, build(spec, R, t0 + (s + 0.5) * dt), dt, hbar);
      traj.max_step_norm_error =
          std::max(traj.max_step_norm_error, std::abs(norm(psi, spec.grid) - before));
      ++traj.steps;
    }
    traj.times.push_back(path.time(k + 1));
    traj.states.push_back(psi);
    traj.norms.push_back(norm(psi, spec.grid));
  }
  return traj;
}

}  // namespace adiabatica
