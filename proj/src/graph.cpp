#include "gssl/graph.hpp"

#include "gssl/error.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

namespace gssl {
namespace {

using Triplet = Eigen::Triplet<double>;

void require_distance_matrix(const Matrix& d) {
  if (d.rows() != d.cols()) throw ValidationError("distance matrix must be square");
  if (d.rows() < 2) throw ValidationError("distance matrix needs at least 2 points");
  if (!d.allFinite()) throw ValidationError("distance matrix contains non-finite values");
}

}  // namespace

bool NeighborIndex::contains(Index vertex, Index neighbor) const {
  const auto& list = lists[vertex];
  return std::ranges::any_of(list, [&](const Neighbor& nb) { return nb.id == neighbor; });
}

AffinityGraph::AffinityGraph(SparseMatrix weights) : weights_(std::move(weights)) {
  if (weights_.rows() != weights_.cols()) throw ValidationError("weight matrix must be square");
  weights_.makeCompressed();
  const Index n = weights_.rows();
  degree_ = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    for (SparseMatrix::InnerIterator it(weights_, i); it; ++it) {
      if (!std::isfinite(it.value()) || it.value() < 0.0)
        throw ValidationError("weights must be finite and nonnegative");
      if (it.col() == i && it.value() != 0.0)
        throw ValidationError("weight matrix must have a zero diagonal");
      if (weights_.coeff(it.col(), i) != it.value())
        throw ValidationError("weight matrix must be symmetric");
      degree_[i] += it.value();
    }
  }
}

Index AffinityGraph::isolated_count() const {
  return (degree_.array() <= 0.0).count();
}

std::vector<int> AffinityGraph::components() const {
  const Index n = size();
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  int next = 0;
  std::queue<Index> frontier;
  for (Index start = 0; start < n; ++start) {
    if (label[start] >= 0) continue;
    label[start] = next;
    frontier.push(start);
    while (!frontier.empty()) {
      const Index v = frontier.front();
      frontier.pop();
      for (SparseMatrix::InnerIterator it(weights_, v); it; ++it) {
        if (it.value() > 0.0 && label[it.col()] < 0) {
          label[it.col()] = next;
          frontier.push(it.col());
        }
      }
    }
    ++next;
  }
  return label;
}

Matrix pairwise_sq_euclidean(const Matrix& features) {
  if (features.rows() < 2) throw ValidationError("need at least 2 points for pairwise distances");
  if (!features.allFinite()) throw ValidationError("features contain non-finite values");
  const Index n = features.rows();
  const Matrix points = features.transpose();  // one point per column
  Matrix dist = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      const double value = (points.col(i) - points.col(j)).squaredNorm();
      dist(i, j) = value;
      dist(j, i) = value;
    }
  }
  return dist;
}

NeighborIndex knn_index(const Matrix& sq_distances, Index k) {
  require_distance_matrix(sq_distances);
  const Index n = sq_distances.rows();
  if (k < 1 || k > n - 1)
    throw ValidationError("k must lie in [1, " + std::to_string(n - 1) + "], got " + std::to_string(k));

  const auto closer = [](const Neighbor& a, const Neighbor& b) {
    return a.sq_distance != b.sq_distance ? a.sq_distance < b.sq_distance : a.id < b.id;
  };
  NeighborIndex index;
  index.k = k;
  index.lists.resize(static_cast<std::size_t>(n));
  std::vector<Neighbor> candidates;
  candidates.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    candidates.clear();
    for (Index j = 0; j < n; ++j) {
      if (j != i) candidates.push_back({j, sq_distances(i, j)});
    }
    std::partial_sort(candidates.begin(), candidates.begin() + k, candidates.end(), closer);
    index.lists[i].assign(candidates.begin(), candidates.begin() + k);
  }
  return index;
}

AffinityGraph mutual_knn_graph(const NeighborIndex& index) {
  const Index n = index.size();
  std::vector<Triplet> triplets;
  for (Index i = 0; i < n; ++i) {
    for (const Neighbor& nb : index.lists[i]) {
      if (nb.id > i && index.contains(nb.id, i)) {
        triplets.emplace_back(i, nb.id, 1.0);
        triplets.emplace_back(nb.id, i, 1.0);
      }
    }
  }
  SparseMatrix w(n, n);
  w.setFromTriplets(triplets.begin(), triplets.end());
  return AffinityGraph(std::move(w));
}

AffinityGraph rbf_weights(const Matrix& sq_distances, const AffinityGraph& graph, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("rbf sigma must be positive");
  if (sq_distances.rows() != graph.size() || sq_distances.cols() != graph.size())
    throw ValidationError("distance matrix does not match the graph size");
  SparseMatrix w = graph.weights();
  const double scale = 1.0 / (2.0 * sigma * sigma);
  for (Index i = 0; i < w.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(w, i); it; ++it) {
      // Average the two triangle entries so asymmetric rounding cannot break symmetry.
      const double d = 0.5 * (sq_distances(i, it.col()) + sq_distances(it.col(), i));
      it.valueRef() = std::exp(-d * scale);
    }
  }
  return AffinityGraph(std::move(w));
}

SparseMatrix laplacian(const AffinityGraph& graph, LaplacianKind kind) {
  const Index n = graph.size();
  const SparseMatrix& w = graph.weights();
  const Vector& deg = graph.degree();
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(w.nonZeros() + n));
  for (Index i = 0; i < n; ++i) {
    if (kind == LaplacianKind::kUnnormalized && deg[i] != 0.0) triplets.emplace_back(i, i, deg[i]);
    for (SparseMatrix::InnerIterator it(w, i); it; ++it) {
      const Index j = it.col();
      switch (kind) {
        case LaplacianKind::kUnnormalized:
          triplets.emplace_back(i, j, -it.value());
          break;
        case LaplacianKind::kSymmetric:
          triplets.emplace_back(i, j, it.value() / std::sqrt(deg[i] * deg[j]));
          break;
        case LaplacianKind::kRowStochastic:
          triplets.emplace_back(i, j, it.value() / deg[i]);
          break;
      }
    }
  }
  SparseMatrix out(n, n);
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

AffinityGraph induced_subgraph(const AffinityGraph& graph, const std::vector<Index>& vertices) {
  const Index n = graph.size();
  std::vector<Index> position(static_cast<std::size_t>(n), -1);
  for (std::size_t p = 0; p < vertices.size(); ++p) {
    if (vertices[p] < 0 || vertices[p] >= n) throw ValidationError("subgraph vertex out of range");
    position[vertices[p]] = static_cast<Index>(p);
  }
  std::vector<Triplet> triplets;
  for (std::size_t p = 0; p < vertices.size(); ++p) {
    for (SparseMatrix::InnerIterator it(graph.weights(), vertices[p]); it; ++it) {
      const Index q = position[it.col()];
      if (q >= 0) triplets.emplace_back(static_cast<Index>(p), q, it.value());
    }
  }
  const auto m = static_cast<Index>(vertices.size());
  SparseMatrix w(m, m);
  w.setFromTriplets(triplets.begin(), triplets.end());
  return AffinityGraph(std::move(w));
}

std::vector<Index> active_vertices(const AffinityGraph& graph) {
  std::vector<Index> active;
  for (Index v = 0; v < graph.size(); ++v) {
    if (!graph.is_isolated(v)) active.push_back(v);
  }
  return active;
}

}  // namespace gssl
