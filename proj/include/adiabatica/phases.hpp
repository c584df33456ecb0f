#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "adiabatica/madelung.hpp"
#include "adiabatica/propagate.hpp"
#include "adiabatica/spectrum.hpp"

namespace adiabatica {

/// Phase angles (radians) at the path sample times.
struct PhaseRecord {
  std::vector<double> times;
  std::vector<double> alpha;     // unwrapped arg <n;t|psi(t)>
  std::vector<double> delta;     // -(1/hbar) int E dt
  std::vector<double> gamma;     // line integral of the connection
  std::vector<double> fidelity;  // |<n;t|psi(t)>|
};

/// Connection components at one parameter point (units 1/[R]). NaN marks a component that
/// could not be computed (skipped sample).
struct ConnectionSample {
  ParameterPoint R;
  std::vector<double> A;
};

/// Fills alpha and fidelity. Throws UnwrapAmbiguity if consecutive samples differ by more
/// than pi/2 in phase.
PhaseRecord overlap_phase(const Trajectory& traj, const std::vector<Eigenstate>& levels,
                          const SpatialGrid& grid);

/// Trapezoid rule for -(1/hbar) int_0^t E dt'.
std::vector<double> dynamical_phase(std::span<const double> times, std::span<const double> E,
                                    double hbar = 1.0);

/// Cumulative unwrapping by principal-value increments; throws UnwrapAmbiguity if an
/// increment exceeds `limit`.
std::vector<double> unwrap(std::span<const double> principal, double limit);

/// -arg<a|b> / |dR|: the connection along the step from a to b.
double connection_overlap(std::span<const Complex> a, std::span<const Complex> b, double dR,
                          const SpatialGrid& grid);

/// dS/dR between two states a step dR apart, on nodes defined in both. Within each joint run
/// the difference is shifted by a multiple of 2 pi hbar toward zero weighted mean.
struct ActionGradient {
  RealField dS;                    // (S_b - S_a) / dR
  RealField rho;                   // (rho_a + rho_b) / 2
  std::vector<std::uint8_t> mask;  // joint definition mask
};

/// Throws RunAlignmentError when the node structure of a and b differs.
ActionGradient action_gradient(std::span<const Complex> a, std::span<const Complex> b,
                               double dR, const SpatialGrid& grid, double hbar = 1.0,
                               double node_eps = default_node_eps);

/// -(1/hbar) int rho dS/dR along the step from a to b.
double connection_bohm(std::span<const Complex> a, std::span<const Complex> b, double dR,
                       const SpatialGrid& grid, double hbar = 1.0,
                       double node_eps = default_node_eps);

struct ConnectionOptions {
  /// Components not moved by a path segment are obtained from eigensolves at
  /// R_mid -/+ probe_step/2 along that axis. Zero uses the segment length.
  bool probes = true;
  double probe_step = 0.0;
  double node_eps = default_node_eps;
  int k_buffer = 6;
};

/// Connection by both routes at every segment midpoint of a tracked path.
struct PathConnection {
  std::vector<ConnectionSample> overlap;
  std::vector<ConnectionSample> bohm;
  std::vector<std::size_t> segments;  // segment index k (from sample k to k+1) of each entry
  std::vector<std::size_t> skipped;   // segments where the Bohm route failed run alignment
  std::vector<std::string> skip_reasons;
};

PathConnection path_connection(const HamiltonianSpec& spec, const ParameterPath& path,
                               const LevelTrack& track, const ConnectionOptions& options = {});

/// Midpoint-rule line integral sum_k A(mid_k) . dR_k, cumulative over path samples. Samples
/// with NaN components contribute nothing.
std::vector<double> geometric_phase(const std::vector<ConnectionSample>& connection,
                                    const std::vector<std::size_t>& segments,
                                    const ParameterPath& path);

/// -arg prod_k <n_k|n_{k+1}> around the closed loop (the last state closes back to the first).
/// Principal value, or the branch closest to `reference` when one is given. Throws
/// TrackingLoss for a vanishing link.
double loop_phase_pancharatnam(const std::vector<ComplexField>& states, const SpatialGrid& grid,
                               double reference = std::numeric_limits<double>::quiet_NaN());

/// d alpha/dt = -E/hbar - (1/hbar) int rho dS/dt, with dS/dt = sum_j (dS/dR^j)(dR^j/dt).
double phase_rate_bohm(double energy, const std::vector<ActionGradient>& dS_dR,
                       std::span<const double> Rdot, const SpatialGrid& grid, double hbar = 1.0);

/// Bohm phase rate at every path sample with dS/dt by central differences of the tracked
/// states in time (one-sided at the ends).
std::vector<double> phase_rate_series(const LevelTrack& track, const SpatialGrid& grid,
                                      double hbar = 1.0, double node_eps = default_node_eps);

/// rho-weighted circular standard deviation of S(x;t) - S_n(x;0) - f(t) on jointly defined
/// nodes, in action units. f = hbar * delta; the global constant is projected out.
std::vector<double> separability_check(const Trajectory& traj, const MadelungFields& initial,
                                       std::span<const double> f, double node_eps = default_node_eps);

struct DriftSeries {
  std::vector<double> rho;  // int |rho(x;t) - rho(x;0)| dx
  std::vector<double> Q;    // rho-weighted RMS of Q(x;t) - Q(x;0)
};

DriftSeries rho_q_drift(const Trajectory& traj, const HamiltonianSpec& spec,
                        const ParameterPath& path, double node_eps = default_node_eps);

/// int rho|Q| / (int rho|Q| + int rho|H_cl|) with H_cl at p = S'. Throws InvalidArgument when
/// both integrals vanish.
double wkb_index(std::span<const Complex> psi, const HamiltonianSpec& spec,
                 std::span<const double> R, double t = 0.0, double node_eps = default_node_eps);

}  // namespace adiabatica
