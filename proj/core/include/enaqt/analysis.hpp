#pragma once

#include <cstddef>
#include <vector>

#include "enaqt/types.hpp"

namespace enaqt {

struct SweepTable;

struct EnergyCluster {
  double energy = 0.0;
  std::size_t multiplicity = 0;
  /// Number of cluster vectors that join the invariant subspace
  /// (multiplicity - 1 when the cluster touches the trap, else multiplicity).
  std::size_t decoupled = 0;
  double trap_weight = 0.0;  // sum_i |<trap|v_i>|^2 over the cluster
};

/// Orthonormal eigenvectors of H_S with zero amplitude on the trap.
struct InvariantSubspace {
  ComplexMatrix basis;  // N x D', columns are the vectors
  std::vector<double> energies;
  std::vector<EnergyCluster> clusters;

  std::size_t dimension() const { return static_cast<std::size_t>(basis.cols()); }
  ComplexMatrix projector() const { return basis * basis.adjoint(); }
};

struct InvariantSubspaceOptions {
  /// Eigenvalues closer than cluster_tol * ||H_S|| share a cluster.
  double cluster_tol = 1e-8;
  /// Nondegenerate eigenvectors with |<trap|v>| below this are decoupled.
  double overlap_tol = 1e-9;
};

InvariantSubspace invariant_subspace(const ComplexMatrix& system_hamiltonian,
                                     std::size_t trap_site,
                                     const InvariantSubspaceOptions& options = {});

/// 1 - sum_i <lambda_i|rho0|lambda_i>.
double efficiency_upper_bound(const InvariantSubspace& subspace, const ComplexMatrix& rho0);

struct DeltaMax {
  double dephasing = 0.0;
  double delta_max = 0.0;
  double argmax_disorder = 0.0;
  double eta_ordered = 0.0;
  double eta_best = 0.0;
  /// sqrt(se_best^2 + se_ordered^2) for the two cells that define delta_max.
  double stderr_estimate = 0.0;
};

/// max over the disorder grid of mean eta(dephasing, disorder) minus mean
/// eta(dephasing, 0). Throws when the table lacks the disorder = 0 cell.
DeltaMax delta_max(const SweepTable& table, double dephasing);

/// delta_max for every dephasing value present in the table, in increasing order.
std::vector<DeltaMax> delta_max_profile(const SweepTable& table);

}  // namespace enaqt
