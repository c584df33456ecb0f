#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "adiabatica/hamiltonian.hpp"

namespace adiabatica {

/// Lowest eigenpairs of H at one parameter point, normalized on the grid and gauge-fixed.
struct SpectrumSlice {
  ParameterPoint R;
  double t = 0.0;
  std::vector<double> energies;      // ascending
  std::vector<ComplexField> states;  // orthonormal, gauge G1
  double residual = 0.0;             // max_i ||H psi_i - E_i psi_i||
  double scale = 0.0;                // max |H_ij|, the reference for residual bounds
};

/// One eigenstate picked out of a slice.
struct Eigenstate {
  ParameterPoint R;
  double t = 0.0;
  double energy = 0.0;
  ComplexField state;
};

/// Samples (t_k, R_k) of a curve in parameter space. Closed iff R_last == R_first.
class ParameterPath {
public:
  ParameterPath(std::vector<double> times, std::vector<ParameterPoint> points);

  /// Piecewise-linear path through `waypoints`, `segments` steps distributed over the legs in
  /// proportion to their length, traversed at uniform speed over [0, T]. A single waypoint (or
  /// zero-length polyline) yields a constant path with `segments` equal time steps.
  static ParameterPath polyline(const std::vector<ParameterPoint>& waypoints, int segments,
                                double T);

  /// Explicit samples given as (fraction of T in [0,1], R) pairs.
  static ParameterPath explicit_samples(const std::vector<std::pair<double, ParameterPoint>>& s,
                                        double T);

  std::size_t size() const noexcept { return times_.size(); }
  std::size_t dimension() const noexcept { return points_.front().size(); }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<ParameterPoint>& points() const noexcept { return points_; }
  double time(std::size_t k) const { return times_[k]; }
  const ParameterPoint& point(std::size_t k) const { return points_[k]; }
  double duration() const noexcept { return times_.back(); }
  bool closed() const noexcept { return closed_; }

  /// Linear interpolation of R between samples.
  ParameterPoint at(double t) const;

private:
  std::vector<double> times_;
  std::vector<ParameterPoint> points_;
  bool closed_ = false;
};

/// k lowest eigenpairs. Dirichlet operators are reduced to a real symmetric tridiagonal
/// problem by a diagonal phase transform; periodic ones use a dense Hermitian solve.
SpectrumSlice eigensolve(const HermitianOperator& H, int k);

/// Gauge G1: rotate psi so that its value at the node of largest |psi| (smallest index on
/// ties) is real and positive.
ComplexField gauge_fix(std::span<const Complex> psi);

struct TrackOptions {
  int k_buffer = 6;
  double gap_threshold = 1e-8;
};

struct LevelTrack {
  std::vector<SpectrumSlice> slices;
  std::vector<int> selected;       // index into slices[k].states
  std::vector<double> overlaps;    // |<previous|selected>|, 1 at k = 0
  std::vector<double> gaps;        // min_{m != sel} |E_m - E_sel|

  std::size_t size() const noexcept { return slices.size(); }
  Eigenstate level(std::size_t k) const;
  std::vector<Eigenstate> levels() const;
  std::vector<double> energies() const;
  double min_gap() const;
  double min_overlap() const;
};

/// Follows level `n` along `path` by maximal overlap. Throws TrackingLoss when the best
/// overlap drops below 0.5, GapAlarm when the gap falls below options.gap_threshold.
LevelTrack track_level(const HamiltonianSpec& spec, const ParameterPath& path, int n,
                       const TrackOptions& options = {});

/// Index of the state in `slice` with the largest |<reference|state>|.
int best_overlap(const SpectrumSlice& slice, std::span<const Complex> reference,
                 const SpatialGrid& grid, double* overlap = nullptr);

}  // namespace adiabatica
