#include "enaqt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "enaqt/ensemble.hpp"

namespace enaqt {

InvariantSubspace invariant_subspace(const ComplexMatrix& system_hamiltonian,
                                     std::size_t trap_site,
                                     const InvariantSubspaceOptions& options) {
  const Eigen::Index n = system_hamiltonian.rows();
  if (system_hamiltonian.cols() != n) throw InvalidArgument("Hamiltonian must be square");
  if (trap_site >= static_cast<std::size_t>(n)) throw InvalidArgument("trap site out of range");
  if ((system_hamiltonian - system_hamiltonian.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidArgument("invariant_subspace requires a Hermitian Hamiltonian");
  }
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(system_hamiltonian);
  if (es.info() != Eigen::Success) throw SolverError("Hermitian eigensolver failed");
  const RealVector& evals = es.eigenvalues();
  const ComplexMatrix& evecs = es.eigenvectors();
  const auto trap = static_cast<Eigen::Index>(trap_site);

  const double norm = std::max(evals.cwiseAbs().maxCoeff(), 1.0);
  const double gap = options.cluster_tol * norm;

  InvariantSubspace out;
  std::vector<ComplexVector> vectors;
  std::vector<double> energies;

  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && evals(stop) - evals(stop - 1) < gap) ++stop;
    const Eigen::Index dim = stop - start;
    const ComplexMatrix block = evecs.middleCols(start, dim);
    const double mean_energy = evals.segment(start, dim).mean();
    // Trap amplitudes of the cluster vectors: o_i = <trap|v_i>.
    const ComplexVector overlap = block.row(trap).transpose();
    const double weight = overlap.squaredNorm();

    EnergyCluster cluster;
    cluster.energy = mean_energy;
    cluster.multiplicity = static_cast<std::size_t>(dim);
    cluster.trap_weight = weight;

    if (std::sqrt(weight) < options.overlap_tol) {
      for (Eigen::Index i = 0; i < dim; ++i) {
        vectors.emplace_back(block.col(i));
        energies.push_back(evals(start + i));
      }
      cluster.decoupled = static_cast<std::size_t>(dim);
    } else if (dim > 1) {
      // Coefficients a with sum_i o_i a_i = 0 are orthogonal to conj(o).
      // Complete conj(o)/|o| to a unitary basis; the remaining D-1 columns
      // span the trap-free part of the cluster.
      const ComplexVector coupled = overlap.conjugate() / std::sqrt(weight);
      const Eigen::HouseholderQR<ComplexMatrix> qr(coupled);
      const ComplexMatrix unitary = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
      const ComplexMatrix rotated = block * unitary.rightCols(dim - 1);
      for (Eigen::Index i = 0; i < dim - 1; ++i) {
        vectors.emplace_back(rotated.col(i));
        energies.push_back(mean_energy);
      }
      cluster.decoupled = static_cast<std::size_t>(dim - 1);
    }
    out.clusters.push_back(cluster);
    start = stop;
  }

  out.basis = ComplexMatrix(n, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    out.basis.col(static_cast<Eigen::Index>(i)) = vectors[i];
  }
  out.energies = std::move(energies);
  return out;
}

double efficiency_upper_bound(const InvariantSubspace& subspace, const ComplexMatrix& rho0) {
  if (subspace.basis.cols() == 0) return 1.0;
  if (rho0.rows() != subspace.basis.rows() || rho0.cols() != subspace.basis.rows()) {
    throw InvalidArgument("efficiency_upper_bound: dimension mismatch");
  }
  const Complex captured = (subspace.basis.adjoint() * rho0 * subspace.basis).trace();
  return 1.0 - captured.real();
}

namespace {

bool same_value(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

DeltaMax delta_max(const SweepTable& table, double dephasing) {
  const SweepRow* ordered = nullptr;
  const SweepRow* best = nullptr;
  for (const auto& row : table.rows) {
    if (!same_value(row.dephasing, dephasing)) continue;
    if (row.disorder == 0.0) ordered = &row;
    if (best == nullptr || row.eta_mean > best->eta_mean) best = &row;
  }
  if (ordered == nullptr) {
    throw InvalidArgument("delta_max: no disorder = 0 cell at dephasing " +
                          std::to_string(dephasing));
  }
  DeltaMax out;
  out.dephasing = dephasing;
  out.eta_ordered = ordered->eta_mean;
  out.eta_best = best->eta_mean;
  out.argmax_disorder = best->disorder;
  out.delta_max = best->eta_mean - ordered->eta_mean;
  out.stderr_estimate = std::hypot(best->eta_stderr, ordered->eta_stderr);
  return out;
}

std::vector<DeltaMax> delta_max_profile(const SweepTable& table) {
  std::vector<double> dephasings;
  for (const auto& row : table.rows) {
    const bool known = std::any_of(dephasings.begin(), dephasings.end(),
                                   [&](double g) { return same_value(g, row.dephasing); });
    if (!known) dephasings.push_back(row.dephasing);
  }
  std::sort(dephasings.begin(), dephasings.end());
  std::vector<DeltaMax> out;
  out.reserve(dephasings.size());
  for (double g : dephasings) out.push_back(delta_max(table, g));
  return out;
}

}  // namespace enaqt
