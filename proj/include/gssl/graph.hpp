#pragma once

#include "gssl/types.hpp"

#include <vector>

namespace gssl {

struct Neighbor {
  Index id;
  double sq_distance;
};

/// Each vertex's k nearest other vertices, ascending by distance (ties by id).
struct NeighborIndex {
  std::vector<std::vector<Neighbor>> lists;
  Index k = 0;

  Index size() const { return static_cast<Index>(lists.size()); }
  bool contains(Index vertex, Index neighbor) const;
};

/// Symmetric nonnegative weight matrix with zero diagonal and cached row sums.
class AffinityGraph {
 public:
  AffinityGraph() = default;
  /// Takes ownership of a symmetric weight matrix; throws ValidationError otherwise.
  explicit AffinityGraph(SparseMatrix weights);

  const SparseMatrix& weights() const { return weights_; }
  const Vector& degree() const { return degree_; }
  Index size() const { return weights_.rows(); }
  Index edge_count() const { return weights_.nonZeros() / 2; }

  bool is_isolated(Index v) const { return degree_[v] <= 0.0; }
  Index isolated_count() const;

  /// Component id per vertex, numbered in order of each component's lowest vertex.
  std::vector<int> components() const;

 private:
  SparseMatrix weights_;
  Vector degree_;
};

enum class LaplacianKind {
  kUnnormalized,  // L = D - W
  kSymmetric,     // S = D^-1/2 W D^-1/2
  kRowStochastic  // P = D^-1 W
};

/// Squared Euclidean distances between all rows.
Matrix pairwise_sq_euclidean(const Matrix& features);

NeighborIndex knn_index(const Matrix& sq_distances, Index k);

/// W_ij = 1 iff i and j are each in the other's neighbor list.
AffinityGraph mutual_knn_graph(const NeighborIndex& index);

/// Same edge set, weights exp(-d_ij / (2 sigma^2)).
AffinityGraph rbf_weights(const Matrix& sq_distances, const AffinityGraph& graph, double sigma);

/// Rows and columns of isolated vertices are zero in the S and P variants.
SparseMatrix laplacian(const AffinityGraph& graph, LaplacianKind kind);

/// Induced subgraph on the given vertices (in the given order).
AffinityGraph induced_subgraph(const AffinityGraph& graph, const std::vector<Index>& vertices);

/// Vertices with positive degree, ascending.
std::vector<Index> active_vertices(const AffinityGraph& graph);

}  // namespace gssl
