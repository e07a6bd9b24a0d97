#include "enaqt/sweep_config.hpp"

#include <fstream>
#include <sstream>

#include "enaqt/csv.hpp"

namespace enaqt {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

unsigned long long parse_unsigned(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
    throw InvalidArgument(key + ": expected a non-negative integer, got '" + value + "'");
  }
  return std::stoull(v);
}

double parse_rate(const std::string& key, const std::string& value) {
  const double v = csv::parse_double(value);
  if (!(v >= 0.0)) throw InvalidArgument(key + " must be >= 0");
  return v;
}

}  // namespace

Topology GraphSpec::build() const {
  switch (kind) {
    case GraphKind::kBinaryTree:
      return build_binary_tree(generations);
    case GraphKind::kHypercube:
      return build_hypercube(dimension);
    case GraphKind::kCustom:
      if (edge_file.empty()) throw InvalidArgument("custom graph requires an edge-list file");
      return load_edge_list(edge_file);
  }
  throw InvalidArgument("unknown graph kind");
}

GraphKind parse_graph_kind(const std::string& text) {
  if (text == "binary-tree" || text == "tree") return GraphKind::kBinaryTree;
  if (text == "hypercube") return GraphKind::kHypercube;
  if (text == "custom") return GraphKind::kCustom;
  throw InvalidArgument("unknown graph '" + text + "' (expected binary-tree, hypercube, custom)");
}

EnsembleSetup SweepConfig::setup() const {
  Topology topology = graph.build();
  InitialState init = initial.value_or(topology.kind() == GraphKind::kBinaryTree
                                           ? InitialState::leaf_mixture()
                                           : InitialState::uniform_mixture());
  EnsembleSetup s{std::move(topology)};
  s.initial = init;
  s.trap = trap;
  s.trap_rate = kappa;
  s.recomb_rate = gamma_recomb;
  s.convention = convention;
  s.master_seed = seed;
  s.solver = solver;
  return s;
}

SweepGrid SweepConfig::grid() const {
  SweepGrid g{disorder, dephasing, realizations};
  g.validate();
  return g;
}

std::vector<double> parse_grid(const std::string& text) {
  const std::string t = trim(text);
  if (t.rfind("log:", 0) == 0) {
    const auto parts = split_on(t.substr(4), ':');
    if (parts.size() != 3) throw InvalidArgument("log grid must be log:lo:hi:count");
    return log_grid(csv::parse_double(parts[0]), csv::parse_double(parts[1]),
                    static_cast<std::size_t>(parse_unsigned("log grid count", parts[2])));
  }
  if (t.find(':') != std::string::npos) {
    const auto parts = split_on(t, ':');
    if (parts.size() != 3) throw InvalidArgument("linear grid must be start:stop:step");
    return linear_grid(csv::parse_double(parts[0]), csv::parse_double(parts[1]),
                       csv::parse_double(parts[2]));
  }
  std::vector<double> out;
  for (const auto& item : split_on(t, ',')) out.push_back(csv::parse_double(item));
  if (out.empty()) throw InvalidArgument("empty grid");
  return out;
}

TrapPlacement parse_trap(const std::string& text) {
  const std::string t = trim(text);
  if (t == "root") return TrapPlacement::at_root();
  return TrapPlacement::at(static_cast<std::size_t>(parse_unsigned("trap", t)));
}

void apply_setting(SweepConfig& c, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "graph") {
    c.graph.kind = parse_graph_kind(v);
  } else if (key == "generations") {
    c.graph.generations = static_cast<unsigned>(parse_unsigned(key, v));
  } else if (key == "dimension") {
    c.graph.dimension = static_cast<unsigned>(parse_unsigned(key, v));
  } else if (key == "edge_file" || key == "edge-file") {
    c.graph.edge_file = v;
    c.graph.kind = GraphKind::kCustom;
  } else if (key == "init") {
    c.initial = parse_initial_state(v);
  } else if (key == "trap") {
    c.trap = parse_trap(v);
  } else if (key == "kappa") {
    c.kappa = parse_rate(key, v);
  } else if (key == "gamma_recomb" || key == "gamma-recomb") {
    c.gamma_recomb = parse_rate(key, v);
  } else if (key == "convention" || key == "dephasing_convention" ||
             key == "dephasing-convention") {
    c.convention = parse_dephasing_convention(v);
  } else if (key == "seed" || key == "master_seed") {
    c.seed = parse_unsigned(key, v);
  } else if (key == "solver") {
    c.solver = parse_solver_kind(v);
  } else if (key == "disorder" || key == "disorder_values") {
    c.disorder = parse_grid(v);
  } else if (key == "dephasing" || key == "dephasing_values") {
    c.dephasing = parse_grid(v);
  } else if (key == "realizations" || key == "n_realizations") {
    c.realizations = static_cast<std::size_t>(parse_unsigned(key, v));
  } else if (key == "threads") {
    c.threads = static_cast<std::size_t>(parse_unsigned(key, v));
  } else {
    throw InvalidArgument("unknown configuration key '" + key + "'");
  }
}

std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw InvalidArgument("config line " + std::to_string(line_no) + ": empty key");
    }
    out.emplace_back(std::move(key), trim(line.substr(eq + 1)));
  }
  return out;
}

SweepConfig parse_sweep_config(const std::string& text, SweepConfig base) {
  for (const auto& [key, value] : parse_key_values(text)) apply_setting(base, key, value);
  return base;
}

SweepConfig load_sweep_config(const std::string& path, SweepConfig base) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_sweep_config(buffer.str(), std::move(base));
}

}  // namespace enaqt
