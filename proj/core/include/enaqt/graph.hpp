#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "enaqt/types.hpp"

namespace enaqt {

enum class GraphKind { kBinaryTree, kHypercube, kCustom };

struct Edge {
  std::size_t a;
  std::size_t b;
  double coupling;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable site/edge structure of a transport network.
///
/// Sites are indexed 0..N-1. Binary trees keep the heap numbering as a
/// display label (site i carries label i+1, root is label 1, children of
/// label m are 2m and 2m+1); hypercube sites carry their d-bit string.
class Topology {
 public:
  std::size_t n_sites() const { return n_sites_; }
  const std::vector<Edge>& edges() const { return edges_; }
  double coupling() const { return coupling_; }
  GraphKind kind() const { return kind_; }
  /// Generations g for trees, dimension d for hypercubes, 0 otherwise.
  unsigned size_parameter() const { return size_parameter_; }
  const std::string& label(std::size_t site) const { return labels_.at(site); }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Symmetric 0/1 matrix with zero diagonal.
  RealMatrix adjacency() const;
  /// Coupling-weighted adjacency, i.e. the off-diagonal part of H_S.
  RealMatrix coupling_matrix() const;
  std::vector<std::size_t> neighbors(std::size_t site) const;
  bool is_connected() const;

  std::string describe() const;

  friend Topology build_binary_tree(unsigned generations, double coupling);
  friend Topology build_hypercube(unsigned dimension, double coupling);
  friend Topology build_custom(std::size_t n_sites,
                               const std::vector<std::pair<std::size_t, std::size_t>>& edge_list,
                               double coupling);

 private:
  Topology(std::size_t n_sites, std::vector<Edge> edges, double coupling, GraphKind kind,
           unsigned size_parameter, std::vector<std::string> labels);

  std::size_t n_sites_ = 0;
  std::vector<Edge> edges_;
  double coupling_ = 1.0;
  GraphKind kind_ = GraphKind::kCustom;
  unsigned size_parameter_ = 0;
  std::vector<std::string> labels_;
};

Topology build_binary_tree(unsigned generations, double coupling = 1.0);
Topology build_hypercube(unsigned dimension, double coupling = 1.0);
Topology build_custom(std::size_t n_sites,
                      const std::vector<std::pair<std::size_t, std::size_t>>& edge_list,
                      double coupling = 1.0);

/// Reads an edge-list file: first line N, then one 0-based "i j" pair per line.
/// Blank lines and lines starting with '#' are ignored.
Topology load_edge_list(const std::string& path, double coupling = 1.0);
Topology parse_edge_list(const std::string& text, double coupling = 1.0);

/// Leaf sites of a binary tree (heap labels 2^(g-1)..2^g-1), as 0-based indices.
std::vector<std::size_t> leaves(const Topology& topology);
/// Root of a binary tree (heap label 1), i.e. index 0.
std::size_t root(const Topology& topology);

std::string to_string(GraphKind kind);

}  // namespace enaqt
