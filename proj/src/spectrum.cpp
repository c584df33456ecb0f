#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "adiabatica/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "adiabatica/error.hpp"

namespace adiabatica {
namespace {

constexpr double closure_tolerance = 1e-12;

double distance(const ParameterPoint& a, const ParameterPoint& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(s);
}

void solve_tridiagonal(const HermitianOperator& H, int k, SpectrumSlice& out) {
  const int n = H.size();
  const int m = n - 2;  // interior nodes; the end nodes are pinned to zero
  if (k > m) throw InvalidArgument("requested " + std::to_string(k) + " levels from " +
                                   std::to_string(m) + " interior nodes");

  std::vector<double> d(m), e(m, 0.0), phase(m, 0.0);
  for (int i = 0; i < m; ++i) d[i] = H.diag()[i + 1];
  for (int i = 0; i + 1 < m; ++i) {
    const Complex c = H.upper()[i + 1];
    e[i] = std::abs(c);
    phase[i + 1] = wrap_angle(phase[i] - std::arg(c));
  }

  std::vector<double> w(m), z(static_cast<std::size_t>(m) * k);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(k));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', m, d.data(), e.data(), 0.0,
                                         0.0, 1, k, 0.0, &found, w.data(), z.data(), m,
                                         support.data());
  if (info != 0 || found != k)
    throw SolverFailure("tridiagonal eigensolver (dstevr) failed, info = " +
                        std::to_string(info));

  const double scale = 1.0 / std::sqrt(H.grid().spacing());
  for (int s = 0; s < k; ++s) {
    ComplexField psi(n, Complex{});
    for (int i = 0; i < m; ++i)
      psi[i + 1] = std::polar(z[static_cast<std::size_t>(s) * m + i] * scale, phase[i]);
    out.energies.push_back(w[s]);
    out.states.push_back(std::move(psi));
  }
}

void solve_dense(const HermitianOperator& H, int k, SpectrumSlice& out) {
  const int n = H.size();
  if (k > n) throw InvalidArgument("requested more levels than grid nodes");
  std::vector<Complex> a = H.dense();  // Hermitian, so row-major equals conj of col-major
  for (auto& v : a) v = std::conj(v);
  std::vector<double> w(n);
  std::vector<Complex> z(static_cast<std::size_t>(n) * k);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(k));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0,
                                         0.0, 1, k, 0.0, &found, w.data(), z.data(), n,
                                         support.data());
  if (info != 0 || found != k)
    throw SolverFailure("dense eigensolver (zheevr) failed, info = " + std::to_string(info));

  const double scale = 1.0 / std::sqrt(H.grid().spacing());
  for (int s = 0; s < k; ++s) {
    ComplexField psi(n);
    for (int i = 0; i < n; ++i) psi[i] = z[static_cast<std::size_t>(s) * n + i] * scale;
    out.energies.push_back(w[s]);
    out.states.push_back(std::move(psi));
  }
}

}  // namespace

ParameterPath::ParameterPath(std::vector<double> times, std::vector<ParameterPoint> points)
    : times_(std::move(times)), points_(std::move(points)) {
  if (times_.size() < 2 || times_.size() != points_.size())
    throw InvalidArgument("parameter path needs at least two (t, R) samples");
  if (times_.front() != 0.0) throw InvalidArgument("parameter path must start at t = 0");
  const std::size_t m = points_.front().size();
  if (m < 1) throw InvalidArgument("parameter points need at least one coordinate");
  for (std::size_t k = 0; k < points_.size(); ++k) {
    if (points_[k].size() != m) throw InvalidArgument("inconsistent parameter dimension");
    for (double r : points_[k])
      if (!std::isfinite(r)) throw InvalidArgument("non-finite parameter coordinate");
    if (k > 0 && !(times_[k] > times_[k - 1]))
      throw InvalidArgument("path times must increase strictly");
  }
  closed_ = true;
  for (std::size_t j = 0; j < m; ++j)
    closed_ = closed_ && std::abs(points_.back()[j] - points_.front()[j]) <= closure_tolerance;
}

ParameterPath ParameterPath::polyline(const std::vector<ParameterPoint>& waypoints,
                                      int segments, double T) {
  if (waypoints.empty()) throw InvalidArgument("polyline needs at least one waypoint");
  if (segments < 1) throw InvalidArgument("polyline needs at least one segment");
  if (!(T > 0.0)) throw InvalidArgument("path duration T must be positive");

  std::vector<double> lengths;
  double total = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    if (waypoints[i].size() != waypoints.front().size())
      throw InvalidArgument("inconsistent waypoint dimension");
    lengths.push_back(distance(waypoints[i - 1], waypoints[i]));
    total += lengths.back();
  }

  std::vector<ParameterPoint> points;
  std::vector<double> times;
  if (total == 0.0) {
    for (int k = 0; k <= segments; ++k) {
      points.push_back(waypoints.front());
      times.push_back(T * k / segments);
    }
    return ParameterPath(std::move(times), std::move(points));
  }

  // Largest-remainder apportionment of segments to legs.
  std::vector<int> per_leg(lengths.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  int assigned = 0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const double share = segments * lengths[i] / total;
    per_leg[i] = static_cast<int>(std::floor(share));
    assigned += per_leg[i];
    remainders.emplace_back(share - per_leg[i], i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < segments; ++r, ++assigned) ++per_leg[remainders[r].second];
  for (std::size_t i = 0; i < lengths.size(); ++i)
    if (lengths[i] > 0.0 && per_leg[i] == 0)
      throw InvalidArgument("too few segments to resolve every polyline leg");

  double arc = 0.0;
  points.push_back(waypoints.front());
  times.push_back(0.0);
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const ParameterPoint& a = waypoints[i];
    const ParameterPoint& b = waypoints[i + 1];
    for (int s = 1; s <= per_leg[i]; ++s) {
      const double f = static_cast<double>(s) / per_leg[i];
      ParameterPoint p(a.size());
      for (std::size_t j = 0; j < a.size(); ++j) p[j] = s == per_leg[i] ? b[j] : a[j] + f * (b[j] - a[j]);
      points.push_back(std::move(p));
      times.push_back(s == per_leg[i] ? T * (arc + lengths[i]) / total
                                      : T * (arc + f * lengths[i]) / total);
    }
    arc += lengths[i];
  }
  times.back() = T;
  return ParameterPath(std::move(times), std::move(points));
}

ParameterPath ParameterPath::explicit_samples(
    const std::vector<std::pair<double, ParameterPoint>>& s, double T) {
  if (!(T > 0.0)) throw InvalidArgument("path duration T must be positive");
  std::vector<double> times;
  std::vector<ParameterPoint> points;
  for (const auto& [fraction, R] : s) {
    times.push_back(fraction * T);
    points.push_back(R);
  }
  return ParameterPath(std::move(times), std::move(points));
}

ParameterPoint ParameterPath::at(double t) const {
  if (t <= times_.front()) return points_.front();
  if (t >= times_.back()) return points_.back();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - times_.begin()) - 1;
  const double f = (t - times_[k]) / (times_[k + 1] - times_[k]);
  ParameterPoint p(points_[k].size());
  for (std::size_t j = 0; j < p.size(); ++j)
    p[j] = points_[k][j] + f * (points_[k + 1][j] - points_[k][j]);
  return p;
}

ComplexField gauge_fix(std::span<const Complex> psi) {
  std::size_t peak = 0;
  double best = -1.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double a = std::abs(psi[j]);
    if (a > best) {
      best = a;
      peak = j;
    }
  }
  ComplexField out(psi.begin(), psi.end());
  if (!(best > 0.0)) return out;
  const Complex rotation = std::conj(psi[peak]) / best;
  for (auto& v : out) v *= rotation;
  out[peak] = Complex(best, 0.0);
  return out;
}

SpectrumSlice eigensolve(const HermitianOperator& H, int k) {
  if (k < 1 || k > H.size()) throw InvalidArgument("eigensolve needs 1 <= k <= n");
  SpectrumSlice slice;
  slice.R = H.point();
  slice.scale = H.max_abs();
  if (H.grid().periodic()) solve_dense(H, k, slice);
  else solve_tridiagonal(H, k, slice);

  for (auto& psi : slice.states) {
    psi = gauge_fix(normalized(psi, H.grid()));
    const ComplexField hpsi = H.apply(psi);
    ComplexField r(psi.size());
    const double E = slice.energies[&psi - slice.states.data()];
    for (std::size_t j = 0; j < psi.size(); ++j) r[j] = hpsi[j] - E * psi[j];
    slice.residual = std::max(slice.residual, norm(r, H.grid()));
  }
  return slice;
}

int best_overlap(const SpectrumSlice& slice, std::span<const Complex> reference,
                 const SpatialGrid& grid, double* overlap) {
  int best = 0;
  double value = -1.0;
  for (std::size_t s = 0; s < slice.states.size(); ++s) {
    const double o = std::abs(inner(reference, slice.states[s], grid));
    if (o > value) {
      value = o;
      best = static_cast<int>(s);
    }
  }
  if (overlap) *overlap = value;
  return best;
}

Eigenstate LevelTrack::level(std::size_t k) const {
  const SpectrumSlice& s = slices.at(k);
  return {s.R, s.t, s.energies[selected[k]], s.states[selected[k]]};
}

std::vector<Eigenstate> LevelTrack::levels() const {
  std::vector<Eigenstate> out;
  out.reserve(size());
  for (std::size_t k = 0; k < size(); ++k) out.push_back(level(k));
  return out;
}

std::vector<double> LevelTrack::energies() const {
  std::vector<double> out;
  for (std::size_t k = 0; k < size(); ++k) out.push_back(slices[k].energies[selected[k]]);
  return out;
}

double LevelTrack::min_gap() const {
  return gaps.empty() ? std::numeric_limits<double>::infinity()
                      : *std::min_element(gaps.begin(), gaps.end());
}

double LevelTrack::min_overlap() const {
  return overlaps.empty() ? 1.0 : *std::min_element(overlaps.begin(), overlaps.end());
}

LevelTrack track_level(const HamiltonianSpec& spec, const ParameterPath& path, int n,
                       const TrackOptions& options) {
  if (n < 0 || n >= options.k_buffer)
    throw InvalidArgument("tracked level must satisfy 0 <= n < k_buffer");
  if (static_cast<int>(path.dimension()) < spec.params)
    throw InvalidArgument("path dimension is smaller than the number of parameters");

  // Eigensolves are independent per sample; the selection below is a sequential reduction.
  LevelTrack track;
  track.slices.resize(path.size());
  for (std::size_t k = 0; k < path.size(); ++k) {
    track.slices[k] = eigensolve(build(spec, path.point(k), path.time(k)), options.k_buffer);
    track.slices[k].t = path.time(k);
  }

  for (std::size_t k = 0; k < path.size(); ++k) {
    int sel = n;
    double overlap = 1.0;
    if (k > 0) {
      const SpectrumSlice& prev = track.slices[k - 1];
      sel = best_overlap(track.slices[k], prev.states[track.selected[k - 1]], spec.grid, &overlap);
      if (overlap < 0.5) throw TrackingLoss(k, overlap);
    }
    const auto& E = track.slices[k].energies;
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < E.size(); ++m)
      if (static_cast<int>(m) != sel) gap = std::min(gap, std::abs(E[m] - E[sel]));
    if (gap < options.gap_threshold) throw GapAlarm(k, gap, options.gap_threshold);
    track.selected.push_back(sel);
    track.overlaps.push_back(overlap);
    track.gaps.push_back(gap);
  }
  return track;
}

}  // namespace adiabatica
