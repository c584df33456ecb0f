#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adiabatica/hamiltonian.hpp"

namespace adiabatica {

/// Half-open index range [begin, end) of contiguous unmasked nodes.
struct Run {
  int begin;
  int end;
  int size() const noexcept { return end - begin; }
  bool contains(int j) const noexcept { return j >= begin && j < end; }
};

/// psi = sqrt(rho) exp(iS/hbar) on a grid.
///
/// A node is masked when rho < eps_node, and also when the phase jumps by more than pi/2
/// between it and a neighbour (a zero of psi lies between the two nodes). S is unwrapped
/// along each run of unmasked nodes and starts every run at the principal value of arg psi.
/// Q and J are zero on masked nodes.
struct MadelungFields {
  SpatialGrid grid;
  double hbar = 1.0;
  RealField rho;
  RealField S;
  RealField phase;                 // principal arg psi
  std::vector<std::uint8_t> mask;  // 1 where S is defined
  std::vector<Run> runs;
  RealField Q;
  RealField J;
  int masked = 0;

  bool defined(int j) const { return mask[j] != 0; }
  /// Index of the run containing j, or -1.
  int run_of(int j) const;
};

/// Default relative node threshold: eps_node = node_eps * max(rho).
inline constexpr double default_node_eps = 1e-10;

/// rho, S, mask and runs. Throws InvalidArgument for an all-masked (zero) input.
MadelungFields decompose(std::span<const Complex> psi, const SpatialGrid& grid,
                         const PhysicsConfig& physics = {}, double node_eps = default_node_eps);

/// Full decomposition with Q and J for the Hamiltonian at R.
MadelungFields analyze(std::span<const Complex> psi, const HamiltonianSpec& spec,
                       std::span<const double> R, double t = 0.0,
                       double node_eps = default_node_eps);

/// dS/dx on unmasked nodes from wrapped neighbour phase differences: central inside a run,
/// one-sided 2nd order at run edges, periodic wrap where both neighbours are defined.
RealField phase_gradient(const MadelungFields& fields);

/// Q = -hbar^2 g (sqrt rho)'' / (2 sqrt rho), zero on masked nodes.
RealField quantum_potential(const MadelungFields& fields, double g);

/// Lattice bond currents J_{j+1/2} between nodes j and j+1 (the last entry is the wrap bond on
/// periodic grids and zero otherwise). They satisfy the discrete continuity equation of the
/// assembled operator exactly and reduce to rho g (S' - A) as h -> 0.
RealField bond_current(std::span<const Complex> psi, std::span<const double> A, double g,
                       const SpatialGrid& grid, double hbar);

/// Node current: mean of the adjacent bond currents, zero where masked.
RealField current(std::span<const Complex> psi, const MadelungFields& fields,
                  std::span<const double> A, double g);

/// Eigenstate form: H(x, S') + Q - E.
RealField qhj_residual(const MadelungFields& fields, const HamiltonianSpec& spec,
                       std::span<const double> R, double energy, double t = 0.0);

/// Time-dependent form: dS/dt + H(x, S') + Q.
RealField qhj_residual(const MadelungFields& fields, const HamiltonianSpec& spec,
                       std::span<const double> R, std::span<const double> dtS, double t = 0.0);

/// dtRho + J'. Pass an empty dtRho for the eigenstate form.
RealField continuity_residual(const MadelungFields& fields, std::span<const double> dtRho);

/// sqrt( sum rho v^2 / sum rho ) over unmasked nodes, with grid weights.
double weighted_rms(std::span<const double> values, const MadelungFields& fields);

/// Weighted RMS after removing the rho-weighted mean.
double weighted_stddev(std::span<const double> values, const MadelungFields& fields);

}  // namespace adiabatica
