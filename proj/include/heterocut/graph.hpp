#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "heterocut/geometry.hpp"

namespace heterocut {

/// Symmetric nonnegative edge weights with zero diagonal. Entries are chordal
/// distances between unit vectors, so they lie in [0, 2].
struct WeightGraph {
  int n = 0;
  std::vector<double> w;  // row-major n*n

  WeightGraph() = default;
  explicit WeightGraph(int n_) : n(n_), w(static_cast<std::size_t>(n_) * n_, 0.0) {}

  double at(int i, int j) const { return w[static_cast<std::size_t>(i) * n + j]; }
  double& at(int i, int j) { return w[static_cast<std::size_t>(i) * n + j]; }
  const double* row(int i) const { return w.data() + static_cast<std::size_t>(i) * n; }
};

/// Assignment of vertices to classes 0..k-1. Classes may be empty.
struct Partition {
  int k = 1;
  std::vector<std::int32_t> assign;

  Partition() = default;
  Partition(int k_, int n) : k(k_), assign(n, 0) {}

  int size() const { return static_cast<int>(assign.size()); }
  std::vector<int> class_sizes() const;
  std::vector<int> members(int c) const;
};

/// Score of one pair: distance between the two lifted common lines mapped
/// through their rotations. Zero when rotations and lines are consistent.
double edge_weight(const Rotation& ri, const CommonLine& cij, const Rotation& rj,
                   const CommonLine& cji);

/// Pairwise weight matrix over all valid pairs; invalid pairs get weight 0.
/// Rows are computed independently (kernel path, parallel over rows), so the
/// result is bitwise independent of the thread count.
WeightGraph build_weight_graph(std::span<const Rotation> rotations,
                               const CommonLineTable& table);

double total_weight(const WeightGraph& g);

/// Sum of weights across classes, each unordered pair counted once.
double cut_weight(const WeightGraph& g, const Partition& p);
double within_class_weight(const WeightGraph& g, const Partition& p);

/// Objective of a joint (rotations, partition) state: sum of edge weights over
/// valid within-class pairs, accumulated class by class.
double objective_F(std::span<const Rotation> rotations, const Partition& p,
                   const CommonLineTable& table);

/// Same sum restricted to one class given by sorted member indices.
double class_objective(std::span<const Rotation> rotations, std::span<const int> members,
                       const CommonLineTable& table);

// Serialization: CSV matrix and a binary dump (uint64 n, then n*n float64
// row-major, little-endian).
void save_weight_graph_csv(const WeightGraph& g, std::ostream& out);
WeightGraph load_weight_graph_csv(std::istream& in);
void save_weight_graph_binary(const WeightGraph& g, const std::string& path);
WeightGraph load_weight_graph_binary(const std::string& path);

}  // namespace heterocut
