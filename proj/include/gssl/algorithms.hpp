#pragma once

#include "gssl/graph.hpp"
#include "gssl/numerics.hpp"
#include "gssl/types.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace gssl {

/// Observed labels of a transductive problem. An instance is labeled iff its
/// observed class is present.
struct LabelState {
  std::vector<std::optional<int>> observed;
  std::vector<Index> flip_record;  // ascending ids whose observed label was corrupted
  int class_count = 2;

  Index size() const { return static_cast<Index>(observed.size()); }
  bool is_labeled(Index i) const { return observed[i].has_value(); }
  Index labeled_count() const;
  std::vector<Index> labeled_indices() const;
  std::vector<bool> labeled_mask() const;

  /// Most frequent observed class, ties toward the lower index.
  int majority_class() const;

  void validate() const;
};

/// Builds a state with the given instances labeled by their clean class.
LabelState make_label_state(const ClassVector& truth, int class_count,
                            const std::vector<Index>& labeled);

/// Class scores F with per-run metadata.
struct ScoreMatrix {
  Matrix scores;
  Index iterations = 0;
  /// Vertices with no graph path to a labeled vertex; their rows hold the
  /// one-hot encoding of the majority observed class.
  std::vector<Index> unresolved;
};

enum class SolveMode { kIterative, kClosed };

struct GfhfOptions {
  SolveMode mode = SolveMode::kClosed;
  double tol = 1e-8;
  Index max_iter = 10000;
};

struct LgcOptions {
  double alpha = 0.9;
  SolveMode mode = SolveMode::kClosed;
  double tol = 1e-8;
  Index max_iter = 10000;
};

struct GtamOptions {
  double mu = 99.0;
  /// Greedy additions to perform; negative means until every vertex is labeled.
  Index max_steps = -1;
};

/// Labeled row i is the indicator of its observed class; unlabeled rows are zero.
Matrix one_hot(const LabelState& state, int classes);

/// Harmonic label propagation with labeled rows clamped.
ScoreMatrix gfhf(const AffinityGraph& graph, const LabelState& state, const GfhfOptions& options = {});

/// Local and global consistency: F = alpha S F + (1 - alpha) Y.
ScoreMatrix lgc(const AffinityGraph& graph, const LabelState& state, const LgcOptions& options = {});

/// Eigenpairs of the unnormalized Laplacian of the non-isolated subgraph,
/// computed per connected component so every eigenvector lives on exactly one
/// component. Each component's constant vector carries eigenvalue exactly 0.
struct SpectralBasis {
  std::vector<Index> vertices;  // graph vertex of each eigenvector row
  EigenPairs<double> pairs;     // ascending; zero-eigenvalue ties by component
  std::vector<int> component;   // component of each eigenvector column
  std::vector<int> vertex_component;  // component of each row
};

/// Computes the p smallest Laplacian eigenpairs of every component (all of
/// them when p < 0) and merges them in ascending order.
SpectralBasis spectral_basis(const AffinityGraph& graph, Index p = -1);

/// Least-squares fit of +/-1 class indicators on the p smoothest eigenvectors
/// among those supported on a component that holds a labeled vertex.
ScoreMatrix laplacian_eigenmaps(const AffinityGraph& graph, const LabelState& state, Index p);
/// Same, reusing a basis of the graph holding at least p eigenvectors.
ScoreMatrix laplacian_eigenmaps(const AffinityGraph& graph, const SpectralBasis& basis,
                                const LabelState& state, Index p);

/// Dense operator G = mu (Lsym + mu I)^-1 on the non-isolated subgraph, so the
/// optimal scores for a normalized label matrix Ytilde are G Ytilde.
struct GtamOperator {
  std::vector<Index> vertices;
  Vector degree;
  Matrix response;
  double mu = 0.0;
  Index graph_size = 0;
};

GtamOperator make_gtam_operator(const AffinityGraph& graph, double mu);

struct GtamResult {
  ScoreMatrix scores;
  LabelState augmented;
  /// Criterion value before the first greedy step and after each step.
  std::vector<double> objective;
  /// Greedy additions in order, as (vertex, class).
  std::vector<std::pair<Index, int>> additions;
};

/// Degree-weighted column normalization of a binary label matrix: column j is
/// D y_j / (sum_k D_kk Y_kj); an empty column stays zero.
Matrix normalize_labels(const Matrix& labels, const Vector& degree);

/// Q(F, Y) = 1/2 tr(F' Lsym F + mu (F - Ytilde)'(F - Ytilde)).
double gtam_objective(const SparseMatrix& normalized_laplacian, const Matrix& scores,
                      const Matrix& normalized_labels, double mu);

GtamResult gtam(const AffinityGraph& graph, const LabelState& state, const GtamOptions& options = {});
/// Same, reusing an operator built from this graph with the desired mu.
GtamResult gtam(const AffinityGraph& graph, const GtamOperator& op, const LabelState& state,
                Index max_steps = -1);

/// Row argmax, ties toward the lower class. Isolated vertices take their
/// observed class when labeled and the majority observed class otherwise.
ClassVector predict(const ScoreMatrix& scores, const LabelState& state, const AffinityGraph& graph);

enum class AccuracyScope { kUnlabeled, kAll };

double accuracy(const ClassVector& predicted, const ClassVector& truth, const LabelState& state,
                AccuracyScope scope = AccuracyScope::kUnlabeled);

}  // namespace gssl
