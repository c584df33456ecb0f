#include "adiabatica/phases.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "adiabatica/error.hpp"

namespace adiabatica {
namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double quiet_nan = std::numeric_limits<double>::quiet_NaN();

double distance(const ParameterPoint& a, const ParameterPoint& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(s);
}

// Index of the single component that differs between a and b, or -1.
int moved_axis(const ParameterPoint& a, const ParameterPoint& b) {
  int axis = -1;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] == b[j]) continue;
    if (axis >= 0) return -1;
    axis = static_cast<int>(j);
  }
  return axis;
}

}  // namespace

std::vector<double> unwrap(std::span<const double> principal, double limit) {
  std::vector<double> out;
  out.reserve(principal.size());
  for (std::size_t k = 0; k < principal.size(); ++k) {
    if (k == 0) {
      out.push_back(principal[0]);
      continue;
    }
    const double inc = wrap_angle(principal[k] - principal[k - 1]);
    if (std::abs(inc) > limit) throw UnwrapAmbiguity(k, inc);
    out.push_back(out.back() + inc);
  }
  return out;
}

PhaseRecord overlap_phase(const Trajectory& traj, const std::vector<Eigenstate>& levels,
                          const SpatialGrid& grid) {
  if (traj.states.size() != levels.size())
    throw BindingMismatch("trajectory and tracked levels have different sample counts");
  PhaseRecord rec;
  rec.times = traj.times;
  std::vector<double> principal;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const Complex c = inner(levels[k].state, traj.states[k], grid);
    principal.push_back(std::arg(c));
    rec.fidelity.push_back(std::min(1.0, std::abs(c)));
  }
  rec.alpha = unwrap(principal, pi / 2.0);
  return rec;
}

std::vector<double> dynamical_phase(std::span<const double> times, std::span<const double> E,
                                    double hbar) {
  if (times.size() != E.size()) throw BindingMismatch("times and energies differ in length");
  std::vector<double> delta(times.size(), 0.0);
  for (std::size_t k = 1; k < times.size(); ++k)
    delta[k] = delta[k - 1] - 0.5 * (E[k] + E[k - 1]) * (times[k] - times[k - 1]) / hbar;
  return delta;
}

double connection_overlap(std::span<const Complex> a, std::span<const Complex> b, double dR,
                          const SpatialGrid& grid) {
  if (dR == 0.0) throw InvalidArgument("connection step dR must be nonzero");
  const Complex link = inner(a, b, grid);
  if (std::abs(link) < 1e-8) throw InvalidArgument("vanishing overlap between neighbouring states");
  return -std::arg(link) / dR;
}

ActionGradient action_gradient(std::span<const Complex> a, std::span<const Complex> b,
                               double dR, const SpatialGrid& grid, double hbar,
                               double node_eps) {
  if (dR == 0.0) throw InvalidArgument("action gradient step dR must be nonzero");
  const PhysicsConfig physics{hbar};
  const MadelungFields fa = decompose(a, grid, physics, node_eps);
  const MadelungFields fb = decompose(b, grid, physics, node_eps);
  if (fa.runs.size() != fb.runs.size())
    throw RunAlignmentError("node structure changed: " + std::to_string(fa.runs.size()) +
                            " runs vs " + std::to_string(fb.runs.size()));

  const int n = grid.size();
  ActionGradient out{RealField(n, 0.0), RealField(n, 0.0), std::vector<std::uint8_t>(n, 0)};
  for (int j = 0; j < n; ++j) {
    out.mask[j] = fa.mask[j] && fb.mask[j];
    out.rho[j] = 0.5 * (fa.rho[j] + fb.rho[j]);
  }

  const double period = two_pi * hbar;
  for (int j = 0; j < n;) {
    if (!out.mask[j]) {
      ++j;
      continue;
    }
    int end = j;
    double mean = 0.0, weight = 0.0;
    for (; end < n && out.mask[end]; ++end) {
      const double w = grid.weight(end) * out.rho[end];
      mean += w * (fb.S[end] - fa.S[end]);
      weight += w;
    }
    mean = weight > 0.0 ? mean / weight : 0.0;
    const double shift = period * std::round(mean / period);
    double spread = 0.0;
    for (int i = j; i < end; ++i) {
      const double d = fb.S[i] - fa.S[i] - shift;
      spread = std::max(spread, std::abs(d - (mean - shift)));
      out.dS[i] = d / dR;
    }
    if (spread > pi * hbar)
      throw RunAlignmentError("phase difference varies by " + std::to_string(spread / hbar) +
                              " rad inside one run");
    j = end;
  }
  return out;
}

double connection_bohm(std::span<const Complex> a, std::span<const Complex> b, double dR,
                       const SpatialGrid& grid, double hbar, double node_eps) {
  const ActionGradient g = action_gradient(a, b, dR, grid, hbar, node_eps);
  RealField integrand(g.dS.size(), 0.0);
  for (std::size_t j = 0; j < integrand.size(); ++j)
    if (g.mask[j]) integrand[j] = g.rho[j] * g.dS[j];
  return -integrate(integrand, grid) / hbar;
}

PathConnection path_connection(const HamiltonianSpec& spec, const ParameterPath& path,
                               const LevelTrack& track, const ConnectionOptions& options) {
  if (track.size() != path.size()) throw BindingMismatch("track and path differ in length");
  const SpatialGrid& grid = spec.grid;
  const double hbar = spec.physics.hbar;
  const std::size_t m = path.dimension();
  PathConnection out;

  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const ParameterPoint& Ra = path.point(k);
    const ParameterPoint& Rb = path.point(k + 1);
    const double length = distance(Ra, Rb);
    if (length == 0.0) continue;

    ParameterPoint mid(m);
    for (std::size_t j = 0; j < m; ++j) mid[j] = 0.5 * (Ra[j] + Rb[j]);
    const double t_mid = 0.5 * (path.time(k) + path.time(k + 1));
    const Eigenstate a = track.level(k);
    const Eigenstate b = track.level(k + 1);
    const int axis = moved_axis(Ra, Rb);

    ConnectionSample ov{mid, std::vector<double>(m, quiet_nan)};
    ConnectionSample bo{mid, std::vector<double>(m, quiet_nan)};
    std::string failure;

    for (std::size_t j = 0; j < m; ++j) {
      ComplexField lo, hi;
      double step = 0.0;
      if (static_cast<int>(j) == axis) {
        lo = a.state;
        hi = b.state;
        step = Rb[j] - Ra[j];
      } else {
        if (!options.probes) continue;
        step = options.probe_step > 0.0 ? options.probe_step : length;
        ParameterPoint Rlo = mid, Rhi = mid;
        Rlo[j] -= 0.5 * step;
        Rhi[j] += 0.5 * step;
        const SpectrumSlice slo = eigensolve(build(spec, Rlo, t_mid), options.k_buffer);
        const SpectrumSlice shi = eigensolve(build(spec, Rhi, t_mid), options.k_buffer);
        lo = slo.states[best_overlap(slo, a.state, grid)];
        hi = shi.states[best_overlap(shi, a.state, grid)];
      }
      ov.A[j] = connection_overlap(lo, hi, step, grid);
      try {
        bo.A[j] = connection_bohm(lo, hi, step, grid, hbar, options.node_eps);
      } catch (const RunAlignmentError& e) {
        failure = e.what();
      }
    }

    if (!failure.empty()) {
      out.skipped.push_back(k);
      out.skip_reasons.push_back(failure);
      std::fill(bo.A.begin(), bo.A.end(), quiet_nan);
    }
    out.overlap.push_back(std::move(ov));
    out.bohm.push_back(std::move(bo));
    out.segments.push_back(k);
  }
  return out;
}

std::vector<double> geometric_phase(const std::vector<ConnectionSample>& connection,
                                    const std::vector<std::size_t>& segments,
                                    const ParameterPath& path) {
  if (connection.size() != segments.size())
    throw BindingMismatch("connection samples and segment indices differ in length");
  std::vector<double> increment(path.size(), 0.0);
  for (std::size_t i = 0; i < connection.size(); ++i) {
    const std::size_t k = segments[i];
    if (k + 1 >= path.size()) throw InvalidArgument("segment index outside the path");
    double dot = 0.0;
    bool usable = true;
    for (std::size_t j = 0; j < connection[i].A.size(); ++j) {
      const double dR = path.point(k + 1)[j] - path.point(k)[j];
      if (dR == 0.0) continue;
      if (std::isnan(connection[i].A[j])) usable = false;
      dot += connection[i].A[j] * dR;
    }
    if (usable) increment[k + 1] += dot;
  }
  std::vector<double> gamma(path.size(), 0.0);
  for (std::size_t k = 1; k < path.size(); ++k) gamma[k] = gamma[k - 1] + increment[k];
  return gamma;
}

double loop_phase_pancharatnam(const std::vector<ComplexField>& states, const SpatialGrid& grid,
                               double reference) {
  if (states.size() < 2) throw InvalidArgument("loop needs at least two states");
  Complex product(1.0, 0.0);
  for (std::size_t k = 0; k < states.size(); ++k) {
    const std::size_t next = (k + 1) % states.size();
    const Complex link = inner(states[k], states[next], grid);
    const double size = std::abs(link);
    if (size < 1e-8) throw TrackingLoss(k, size);
    product *= link / size;
  }
  double gamma = -std::arg(product);
  if (!std::isnan(reference)) gamma += two_pi * std::round((reference - gamma) / two_pi);
  return gamma;
}

double phase_rate_bohm(double energy, const std::vector<ActionGradient>& dS_dR,
                       std::span<const double> Rdot, const SpatialGrid& grid, double hbar) {
  if (dS_dR.size() != Rdot.size())
    throw BindingMismatch("one action gradient per parameter velocity component required");
  const int n = grid.size();
  RealField integrand(n, 0.0);
  for (std::size_t c = 0; c < dS_dR.size(); ++c) {
    if (Rdot[c] == 0.0) continue;
    for (int j = 0; j < n; ++j)
      if (dS_dR[c].mask[j]) integrand[j] += dS_dR[c].rho[j] * dS_dR[c].dS[j] * Rdot[c];
  }
  return -energy / hbar - integrate(integrand, grid) / hbar;
}

std::vector<double> phase_rate_series(const LevelTrack& track, const SpatialGrid& grid,
                                      double hbar, double node_eps) {
  const std::size_t K = track.size();
  std::vector<double> rate(K, quiet_nan);
  if (K < 2) return rate;
  const std::vector<double> one{1.0};
  for (std::size_t k = 0; k < K; ++k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == K ? K - 1 : k + 1;
    const Eigenstate a = track.level(lo);
    const Eigenstate b = track.level(hi);
    try {
      const std::vector<ActionGradient> dSdt{
          action_gradient(a.state, b.state, b.t - a.t, grid, hbar, node_eps)};
      rate[k] = phase_rate_bohm(track.level(k).energy, dSdt, one, grid, hbar);
    } catch (const RunAlignmentError&) {
      rate[k] = quiet_nan;
    }
  }
  return rate;
}

std::vector<double> separability_check(const Trajectory& traj, const MadelungFields& initial,
                                       std::span<const double> f, double node_eps) {
  if (f.size() != traj.states.size()) throw BindingMismatch("f(t) and trajectory differ in length");
  const SpatialGrid& grid = initial.grid;
  const double hbar = initial.hbar;
  const int n = grid.size();
  std::vector<double> out;
  out.reserve(traj.states.size());
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const MadelungFields ft = decompose(traj.states[k], grid, PhysicsConfig{hbar}, node_eps);
    // Circular statistics: d is only meaningful modulo 2 pi hbar across runs.
    RealField angle(n, 0.0);
    Complex centre{};
    double weight = 0.0;
    for (int j = 0; j < n; ++j) {
      if (!(ft.mask[j] && initial.mask[j])) continue;
      angle[j] = (ft.S[j] - initial.S[j] - f[k]) / hbar;
      const double w = grid.weight(j) * ft.rho[j];
      centre += w * std::polar(1.0, angle[j]);
      weight += w;
    }
    if (!(weight > 0.0)) {
      out.push_back(quiet_nan);
      continue;
    }
    const double mean = std::arg(centre);
    double var = 0.0;
    for (int j = 0; j < n; ++j) {
      if (!(ft.mask[j] && initial.mask[j])) continue;
      const double d = wrap_angle(angle[j] - mean);
      var += grid.weight(j) * ft.rho[j] * d * d;
    }
    out.push_back(hbar * std::sqrt(var / weight));
  }
  return out;
}

DriftSeries rho_q_drift(const Trajectory& traj, const HamiltonianSpec& spec,
                        const ParameterPath& path, double node_eps) {
  if (traj.states.size() != path.size()) throw BindingMismatch("trajectory and path differ in length");
  const SpatialGrid& grid = spec.grid;
  const int n = grid.size();
  DriftSeries out;
  MadelungFields f0 = decompose(traj.states[0], grid, spec.physics, node_eps);
  f0.Q = quantum_potential(f0, spec.metric(path.point(0)));
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    MadelungFields ft = decompose(traj.states[k], grid, spec.physics, node_eps);
    ft.Q = quantum_potential(ft, spec.metric(path.point(k)));
    RealField diff(n, 0.0), dq(n, 0.0);
    for (int j = 0; j < n; ++j) {
      diff[j] = std::abs(ft.rho[j] - f0.rho[j]);
      if (ft.mask[j] && f0.mask[j]) dq[j] = ft.Q[j] - f0.Q[j];
    }
    MadelungFields joint = ft;
    for (int j = 0; j < n; ++j) joint.mask[j] = ft.mask[j] && f0.mask[j];
    out.rho.push_back(integrate(diff, grid));
    out.Q.push_back(weighted_rms(dq, joint));
  }
  return out;
}

double wkb_index(std::span<const Complex> psi, const HamiltonianSpec& spec,
                 std::span<const double> R, double t, double node_eps) {
  const MadelungFields f = analyze(psi, spec, R, t, node_eps);
  const RealField H = classical_field(spec, R, phase_gradient(f), t);
  const int n = spec.grid.size();
  RealField q(n, 0.0), c(n, 0.0);
  for (int j = 0; j < n; ++j) {
    if (!f.mask[j]) continue;
    q[j] = f.rho[j] * std::abs(f.Q[j]);
    c[j] = f.rho[j] * std::abs(H[j]);
  }
  const double quantum = integrate(q, spec.grid);
  const double classical = integrate(c, spec.grid);
  if (!(quantum + classical > 0.0))
    throw InvalidArgument("wkb index undefined: quantum and classical terms both vanish");
  return quantum / (quantum + classical);
}

}  // namespace adiabatica
