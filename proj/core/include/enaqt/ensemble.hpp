#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "enaqt/dynamics.hpp"
#include "enaqt/graph.hpp"
#include "enaqt/model.hpp"

namespace enaqt {

/// Where the trap sits: the tree root, or an explicit vertex.
struct TrapPlacement {
  std::optional<std::size_t> vertex;  // empty = root (trees) / vertex 0 (others)

  static TrapPlacement at_root() { return {}; }
  static TrapPlacement at(std::size_t v) { return {v}; }
  std::size_t resolve(const Topology& topology) const;
};

/// Everything that stays fixed across a sweep.
struct EnsembleSetup {
  Topology topology;
  InitialState initial = InitialState::leaf_mixture();
  TrapPlacement trap = TrapPlacement::at_root();
  double trap_rate = 1.0;
  double recomb_rate = 0.01;
  DephasingConvention convention = DephasingConvention::kHalfRate;
  std::uint64_t master_seed = 20150327;
  SolverKind solver = SolverKind::kLiouvillianReduced;

  TransportModel make_model(const RealVector& energies, double dephasing) const;
};

struct SweepGrid {
  std::vector<double> disorder_values;
  std::vector<double> dephasing_values;
  std::size_t n_realizations = 100;

  /// Throws InvalidArgument naming the violated constraint.
  void validate() const;
};

struct SweepRow {
  double disorder = 0.0;
  double dephasing = 0.0;
  double eta_mean = 0.0;
  double eta_stderr = 0.0;
  std::size_t n = 0;
  double eta_loss_mean = 0.0;
};

struct JobFailure {
  double disorder = 0.0;
  double dephasing = 0.0;
  std::size_t realization = 0;
  std::string message;
};

struct SweepTable {
  std::vector<SweepRow> rows;  // sorted by (disorder, dephasing)
  std::vector<JobFailure> failures;

  const SweepRow* find(double disorder, double dephasing) const;
};

/// Seed of the disorder draws for one (disorder, dephasing) cell, keyed by the
/// values themselves so a cell gets the same draws in any grid.
std::uint64_t cell_seed(std::uint64_t master_seed, double disorder, double dephasing);

/// Energies of one realization in one cell.
RealVector realization_energies(const EnsembleSetup& setup, double disorder, double dephasing,
                                std::size_t realization_index);

/// Efficiency of a single disorder realization.
EfficiencyResult run_point(const EnsembleSetup& setup, double disorder, double dephasing,
                           std::size_t realization_index);

struct ExecutionOptions {
  std::size_t threads = 0;  // 0 = hardware concurrency
};

SweepTable run_sweep(const EnsembleSetup& setup, const SweepGrid& grid,
                     const ExecutionOptions& execution = {});

/// eta at zero disorder for each dephasing value.
std::vector<double> dephasing_profile(const EnsembleSetup& setup,
                                      const std::vector<double>& dephasing_values);

/// Trap observables averaged over disorder realizations (one realization at
/// zero disorder). Realizations follow the same seeding as run_point.
TrapObservables averaged_trap_observables(const EnsembleSetup& setup, double disorder,
                                          double dephasing, std::size_t n_realizations,
                                          double t_final, const OutputGrid& grid = {},
                                          const ExecutionOptions& execution = {});

/// Linear grid start, start+step, ..., up to stop (inclusive within step/1e6).
std::vector<double> linear_grid(double start, double stop, double step);
/// `count` log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t count);

}  // namespace enaqt
