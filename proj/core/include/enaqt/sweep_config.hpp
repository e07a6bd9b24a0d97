#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "enaqt/ensemble.hpp"

namespace enaqt {

struct GraphSpec {
  GraphKind kind = GraphKind::kBinaryTree;
  unsigned generations = 5;
  unsigned dimension = 4;
  std::string edge_file;

  Topology build() const;
};

GraphKind parse_graph_kind(const std::string& text);

/// Every field of a sweep, as read from a `key = value` file and/or flags.
///
/// Keys: graph, generations, dimension, edge_file, init, trap, kappa,
/// gamma_recomb, convention, seed, solver, disorder, dephasing, realizations,
/// threads. Grid values accept "start:stop:step", "log:lo:hi:count" or a
/// comma list.
struct SweepConfig {
  GraphSpec graph;
  std::optional<InitialState> initial;  // default: leaves on trees, uniform otherwise
  TrapPlacement trap = TrapPlacement::at_root();
  double kappa = 1.0;
  double gamma_recomb = 0.01;
  DephasingConvention convention = DephasingConvention::kHalfRate;
  std::uint64_t seed = 20150327;
  SolverKind solver = SolverKind::kLiouvillianReduced;
  std::vector<double> disorder = linear_grid(0.0, 2.5, 0.1);
  std::vector<double> dephasing = linear_grid(0.0, 1.2, 0.05);
  std::size_t realizations = 100;
  std::size_t threads = 0;

  EnsembleSetup setup() const;
  SweepGrid grid() const;
};

/// Parses a grid expression (see SweepConfig).
std::vector<double> parse_grid(const std::string& text);
TrapPlacement parse_trap(const std::string& text);

/// Applies one setting; throws InvalidArgument for unknown keys or bad values.
void apply_setting(SweepConfig& config, const std::string& key, const std::string& value);

/// Parses `key = value` lines ('#' starts a comment) in order of appearance.
std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text);

SweepConfig parse_sweep_config(const std::string& text, SweepConfig base = {});
SweepConfig load_sweep_config(const std::string& path, SweepConfig base = {});

}  // namespace enaqt
