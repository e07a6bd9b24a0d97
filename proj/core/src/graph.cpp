#include "enaqt/graph.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

namespace enaqt {

namespace {

void validate_edges(std::size_t n_sites, const std::vector<Edge>& edges) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : edges) {
    if (e.a >= n_sites || e.b >= n_sites) {
      throw InvalidArgument("edge (" + std::to_string(e.a) + "," + std::to_string(e.b) +
                            ") has an endpoint outside 0.." + std::to_string(n_sites - 1));
    }
    if (e.a == e.b) {
      throw InvalidArgument("self-loop at site " + std::to_string(e.a));
    }
    auto key = std::minmax(e.a, e.b);
    if (!seen.insert({key.first, key.second}).second) {
      throw InvalidArgument("duplicate edge (" + std::to_string(key.first) + "," +
                            std::to_string(key.second) + ")");
    }
  }
}

std::string bit_string(std::size_t value, unsigned width) {
  std::string s(width, '0');
  for (unsigned j = 0; j < width; ++j) {
    if ((value >> j) & 1U) s[width - 1 - j] = '1';
  }
  return s;
}

}  // namespace

Topology::Topology(std::size_t n_sites, std::vector<Edge> edges, double coupling,
                   GraphKind kind, unsigned size_parameter, std::vector<std::string> labels)
    : n_sites_(n_sites),
      edges_(std::move(edges)),
      coupling_(coupling),
      kind_(kind),
      size_parameter_(size_parameter),
      labels_(std::move(labels)) {
  if (n_sites_ == 0) throw InvalidArgument("topology needs at least one site");
  validate_edges(n_sites_, edges_);
}

RealMatrix Topology::adjacency() const {
  RealMatrix a = RealMatrix::Zero(n_sites_, n_sites_);
  for (const auto& e : edges_) {
    a(e.a, e.b) = 1.0;
    a(e.b, e.a) = 1.0;
  }
  return a;
}

RealMatrix Topology::coupling_matrix() const {
  RealMatrix a = RealMatrix::Zero(n_sites_, n_sites_);
  for (const auto& e : edges_) {
    a(e.a, e.b) = e.coupling;
    a(e.b, e.a) = e.coupling;
  }
  return a;
}

std::vector<std::size_t> Topology::neighbors(std::size_t site) const {
  if (site >= n_sites_) throw InvalidArgument("site index out of range");
  std::vector<std::size_t> out;
  for (const auto& e : edges_) {
    if (e.a == site) out.push_back(e.b);
    if (e.b == site) out.push_back(e.a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Topology::is_connected() const {
  std::vector<std::vector<std::size_t>> adj(n_sites_);
  for (const auto& e : edges_) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  std::vector<bool> visited(n_sites_, false);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  visited[0] = true;
  std::size_t count = 1;
  while (!frontier.empty()) {
    auto v = frontier.front();
    frontier.pop();
    for (auto w : adj[v]) {
      if (!visited[w]) {
        visited[w] = true;
        ++count;
        frontier.push(w);
      }
    }
  }
  return count == n_sites_;
}

std::string Topology::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case GraphKind::kBinaryTree:
      os << "binary-tree(g=" << size_parameter_ << ")";
      break;
    case GraphKind::kHypercube:
      os << "hypercube(d=" << size_parameter_ << ")";
      break;
    case GraphKind::kCustom:
      os << "custom";
      break;
  }
  os << " N=" << n_sites_ << " edges=" << edges_.size();
  return os.str();
}

Topology build_binary_tree(unsigned generations, double coupling) {
  if (generations == 0) throw InvalidArgument("binary tree needs generations >= 1");
  if (generations > 20) throw InvalidArgument("binary tree generations > 20 not supported");
  const std::size_t n = (std::size_t{1} << generations) - 1;
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  // Heap label m (1-based) links to 2m and 2m+1; index = label - 1.
  for (std::size_t m = 1; m < (std::size_t{1} << (generations - 1)); ++m) {
    edges.push_back({m - 1, 2 * m - 1, coupling});
    edges.push_back({m - 1, 2 * m, coupling});
  }
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i + 1);
  return Topology(n, std::move(edges), coupling, GraphKind::kBinaryTree, generations,
                  std::move(labels));
}

Topology build_hypercube(unsigned dimension, double coupling) {
  if (dimension == 0) throw InvalidArgument("hypercube needs dimension >= 1");
  if (dimension > 16) throw InvalidArgument("hypercube dimension > 16 not supported");
  const std::size_t n = std::size_t{1} << dimension;
  std::vector<Edge> edges;
  edges.reserve(dimension * n / 2);
  for (std::size_t v = 0; v < n; ++v) {
    for (unsigned j = 0; j < dimension; ++j) {
      const std::size_t w = v ^ (std::size_t{1} << j);
      if (v < w) edges.push_back({v, w, coupling});
    }
  }
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = bit_string(i, dimension);
  return Topology(n, std::move(edges), coupling, GraphKind::kHypercube, dimension,
                  std::move(labels));
}

Topology build_custom(std::size_t n_sites,
                      const std::vector<std::pair<std::size_t, std::size_t>>& edge_list,
                      double coupling) {
  std::vector<Edge> edges;
  edges.reserve(edge_list.size());
  for (auto [a, b] : edge_list) edges.push_back({a, b, coupling});
  std::vector<std::string> labels(n_sites);
  for (std::size_t i = 0; i < n_sites; ++i) labels[i] = std::to_string(i);
  return Topology(n_sites, std::move(edges), coupling, GraphKind::kCustom, 0,
                  std::move(labels));
}

Topology parse_edge_list(const std::string& text, double coupling) {
  std::istringstream in(text);
  std::string line;
  std::size_t n_sites = 0;
  bool have_n = false;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    if (!have_n) {
      long long n = 0;
      if (!(fields >> n) || n <= 0) {
        throw InvalidArgument("edge list line " + std::to_string(line_no) +
                              ": expected positive site count");
      }
      n_sites = static_cast<std::size_t>(n);
      have_n = true;
      continue;
    }
    long long i = -1;
    long long j = -1;
    if (!(fields >> i >> j) || i < 0 || j < 0) {
      throw InvalidArgument("edge list line " + std::to_string(line_no) +
                            ": expected two non-negative indices");
    }
    edges.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  if (!have_n) throw InvalidArgument("edge list is empty");
  return build_custom(n_sites, edges, coupling);
}

Topology load_edge_list(const std::string& path, double coupling) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open edge list '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_edge_list(buffer.str(), coupling);
}

std::vector<std::size_t> leaves(const Topology& topology) {
  if (topology.kind() != GraphKind::kBinaryTree) {
    throw InvalidArgument("leaves() requires a binary tree");
  }
  const std::size_t first = (std::size_t{1} << (topology.size_parameter() - 1)) - 1;
  std::vector<std::size_t> out;
  for (std::size_t i = first; i < topology.n_sites(); ++i) out.push_back(i);
  return out;
}

std::size_t root(const Topology& topology) {
  if (topology.kind() != GraphKind::kBinaryTree) {
    throw InvalidArgument("root() requires a binary tree");
  }
  return 0;
}

std::string to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::kBinaryTree:
      return "binary-tree";
    case GraphKind::kHypercube:
      return "hypercube";
    case GraphKind::kCustom:
      return "custom";
  }
  return "unknown";
}

}  // namespace enaqt
