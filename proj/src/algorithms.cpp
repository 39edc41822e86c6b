#include "gssl/algorithms.hpp"

#include "gssl/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gssl {
namespace {

/// Unlabeled vertices whose connected component holds no labeled vertex.
std::vector<Index> unreachable_vertices(const AffinityGraph& graph, const LabelState& state) {
  const std::vector<int> component = graph.components();
  const int count = component.empty() ? 0 : *std::ranges::max_element(component) + 1;
  std::vector<bool> has_label(static_cast<std::size_t>(count), false);
  for (Index i = 0; i < state.size(); ++i) {
    if (state.is_labeled(i)) has_label[component[i]] = true;
  }
  std::vector<Index> out;
  for (Index i = 0; i < state.size(); ++i) {
    if (!state.is_labeled(i) && !has_label[component[i]]) out.push_back(i);
  }
  return out;
}

void resolve_to_majority(ScoreMatrix& result, const LabelState& state,
                         std::vector<Index> unreachable) {
  const int majority = state.majority_class();
  for (const Index i : unreachable) {
    result.scores.row(i).setZero();
    result.scores(i, majority) = 1.0;
  }
  result.unresolved = std::move(unreachable);
}

void require_matching(const AffinityGraph& graph, const LabelState& state) {
  if (graph.size() != state.size())
    throw ValidationError("label state size " + std::to_string(state.size()) +
                          " does not match graph size " + std::to_string(graph.size()));
  state.validate();
}

double max_abs_change(const Matrix& a, const Matrix& b) {
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

GtamResult greedy_transduction(const GtamOperator& op, const LabelState& state, Index max_steps) {
  const int c = state.class_count;
  const auto m = static_cast<Index>(op.vertices.size());
  const Matrix& g = op.response;
  const double half_mu = 0.5 * op.mu;

  // Per class: v = D y restricted to active vertices, its mass s, and G v.
  Matrix v = Matrix::Zero(m, c);
  Matrix gv = Matrix::Zero(m, c);
  Vector mass = Vector::Zero(c);
  Vector vv = Vector::Zero(c);
  Vector vgv = Vector::Zero(c);
  Vector column_q = Vector::Zero(c);
  std::vector<bool> labeled(static_cast<std::size_t>(m), false);
  for (Index r = 0; r < m; ++r) {
    const auto& o = state.observed[op.vertices[r]];
    if (o) {
      labeled[r] = true;
      v(r, *o) = op.degree[r];
    }
  }
  for (int j = 0; j < c; ++j) {
    gv.col(j) = g * v.col(j);
    mass[j] = v.col(j).sum();
    vv[j] = v.col(j).squaredNorm();
    vgv[j] = v.col(j).dot(gv.col(j));
    column_q[j] = mass[j] > 0.0 ? half_mu * (vv[j] - vgv[j]) / (mass[j] * mass[j]) : 0.0;
  }

  GtamResult result;
  result.augmented = state;
  result.objective.push_back(column_q.sum());

  Index remaining = std::ranges::count(labeled, false);
  Index steps = max_steps < 0 ? remaining : std::min(max_steps, remaining);
  for (Index step = 0; step < steps; ++step) {
    Index best_row = -1;
    int best_class = -1;
    double best_delta = std::numeric_limits<double>::infinity();
    double best_q = 0.0;
    for (Index r = 0; r < m; ++r) {
      if (labeled[r]) continue;
      const double d = op.degree[r];
      for (int j = 0; j < c; ++j) {
        const double numerator = vv[j] + d * d - (vgv[j] + 2.0 * d * gv(r, j) + d * d * g(r, r));
        const double new_mass = mass[j] + d;
        const double q = half_mu * numerator / (new_mass * new_mass);
        const double delta = q - column_q[j];
        // Near-equal candidates count as ties and keep the earlier (vertex, class).
        if (best_row < 0 || delta < best_delta - 1e-12 * std::max(1.0, std::abs(best_delta))) {
          best_delta = delta;
          best_row = r;
          best_class = j;
          best_q = q;
        }
      }
    }
    const double d = op.degree[best_row];
    labeled[best_row] = true;
    v(best_row, best_class) = d;
    gv.col(best_class) += d * g.col(best_row);
    mass[best_class] += d;
    vv[best_class] = v.col(best_class).squaredNorm();
    vgv[best_class] = v.col(best_class).dot(gv.col(best_class));
    column_q[best_class] = best_q;
    const Index vertex = op.vertices[best_row];
    result.augmented.observed[vertex] = best_class;
    result.additions.emplace_back(vertex, best_class);
    result.objective.push_back(column_q.sum());
  }

  result.scores.scores = Matrix::Zero(op.graph_size, c);
  for (int j = 0; j < c; ++j) {
    if (mass[j] <= 0.0) continue;
    for (Index r = 0; r < m; ++r) result.scores.scores(op.vertices[r], j) = gv(r, j) / mass[j];
  }
  result.scores.iterations = static_cast<Index>(result.additions.size());
  return result;
}

}  // namespace

Index LabelState::labeled_count() const {
  return std::ranges::count_if(observed, [](const auto& o) { return o.has_value(); });
}

std::vector<Index> LabelState::labeled_indices() const {
  std::vector<Index> out;
  for (Index i = 0; i < size(); ++i) {
    if (is_labeled(i)) out.push_back(i);
  }
  return out;
}

std::vector<bool> LabelState::labeled_mask() const {
  std::vector<bool> mask(observed.size());
  for (std::size_t i = 0; i < observed.size(); ++i) mask[i] = observed[i].has_value();
  return mask;
}

int LabelState::majority_class() const {
  std::vector<Index> counts(static_cast<std::size_t>(class_count), 0);
  for (const auto& o : observed) {
    if (o) ++counts[*o];
  }
  return static_cast<int>(std::ranges::max_element(counts) - counts.begin());
}

void LabelState::validate() const {
  if (class_count < 2) throw ValidationError("label state needs at least 2 classes");
  for (const auto& o : observed) {
    if (o && (*o < 0 || *o >= class_count))
      throw ValidationError("observed class out of range");
  }
  if (labeled_count() < 1) throw ValidationError("label state needs at least one labeled instance");
  for (std::size_t k = 0; k < flip_record.size(); ++k) {
    const Index id = flip_record[k];
    if (id < 0 || id >= size() || !is_labeled(id))
      throw ValidationError("flip record references an unlabeled instance");
    if (k > 0 && flip_record[k - 1] >= id)
      throw ValidationError("flip record must be strictly ascending");
  }
}

LabelState make_label_state(const ClassVector& truth, int class_count,
                            const std::vector<Index>& labeled) {
  LabelState state;
  state.class_count = class_count;
  state.observed.assign(truth.size(), std::nullopt);
  for (const Index i : labeled) state.observed.at(static_cast<std::size_t>(i)) = truth.at(i);
  return state;
}

Matrix one_hot(const LabelState& state, int classes) {
  Matrix y = Matrix::Zero(state.size(), classes);
  for (Index i = 0; i < state.size(); ++i) {
    if (state.observed[i]) y(i, *state.observed[i]) = 1.0;
  }
  return y;
}

ScoreMatrix gfhf(const AffinityGraph& graph, const LabelState& state, const GfhfOptions& options) {
  require_matching(graph, state);
  const Index n = graph.size();
  const int c = state.class_count;
  const Matrix y = one_hot(state, c);
  std::vector<Index> unreachable = unreachable_vertices(graph, state);

  ScoreMatrix result;
  if (options.mode == SolveMode::kClosed) {
    result.scores = y;
    std::vector<bool> excluded(static_cast<std::size_t>(n), false);
    for (const Index i : unreachable) excluded[i] = true;
    std::vector<Index> position(static_cast<std::size_t>(n), -1);
    std::vector<Index> unknowns;
    for (Index i = 0; i < n; ++i) {
      if (!state.is_labeled(i) && !excluded[i]) {
        position[i] = static_cast<Index>(unknowns.size());
        unknowns.push_back(i);
      }
    }
    if (!unknowns.empty()) {
      const auto u = static_cast<Index>(unknowns.size());
      std::vector<Eigen::Triplet<double>> triplets;
      Matrix rhs = Matrix::Zero(u, c);
      for (Index r = 0; r < u; ++r) {
        const Index i = unknowns[r];
        triplets.emplace_back(r, r, graph.degree()[i]);
        for (SparseMatrix::InnerIterator it(graph.weights(), i); it; ++it) {
          const Index j = it.col();
          if (position[j] >= 0) {
            triplets.emplace_back(r, position[j], -it.value());
          } else if (state.is_labeled(j)) {
            rhs(r, *state.observed[j]) += it.value();
          }
        }
      }
      SparseMatrix l_uu(u, u);
      l_uu.setFromTriplets(triplets.begin(), triplets.end());
      const Matrix f_u = solve_spd(l_uu, rhs);
      for (Index r = 0; r < u; ++r) result.scores.row(unknowns[r]) = f_u.row(r);
    }
  } else {
    const SparseMatrix p = laplacian(graph, LaplacianKind::kRowStochastic);
    const std::vector<Index> labeled = state.labeled_indices();
    Matrix f = y;
    double change = std::numeric_limits<double>::infinity();
    Index iter = 0;
    while (change >= options.tol) {
      if (iter == options.max_iter)
        throw ConvergenceError("gfhf iteration did not converge in " + std::to_string(iter) + " steps",
                               change);
      Matrix next = p * f;
      for (const Index i : labeled) next.row(i) = y.row(i);
      change = max_abs_change(next, f);
      f.swap(next);
      ++iter;
    }
    result.scores = std::move(f);
    result.iterations = iter;
  }
  resolve_to_majority(result, state, std::move(unreachable));
  return result;
}

ScoreMatrix lgc(const AffinityGraph& graph, const LabelState& state, const LgcOptions& options) {
  require_matching(graph, state);
  const double alpha = options.alpha;
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("lgc alpha must lie in (0, 1)");
  const Index n = graph.size();
  const Matrix y = one_hot(state, state.class_count);
  const SparseMatrix s = laplacian(graph, LaplacianKind::kSymmetric);

  ScoreMatrix result;
  if (options.mode == SolveMode::kClosed) {
    SparseMatrix system(n, n);
    system.setIdentity();
    system -= alpha * s;
    result.scores = solve_spd(system, (1.0 - alpha) * y);
  } else {
    Matrix f = y;
    double change = std::numeric_limits<double>::infinity();
    Index iter = 0;
    while (change >= options.tol) {
      if (iter == options.max_iter)
        throw ConvergenceError("lgc iteration did not converge in " + std::to_string(iter) + " steps",
                               change);
      Matrix next = alpha * (s * f) + (1.0 - alpha) * y;
      change = max_abs_change(next, f);
      f.swap(next);
      ++iter;
    }
    result.scores = std::move(f);
    result.iterations = iter;
  }
  resolve_to_majority(result, state, unreachable_vertices(graph, state));
  return result;
}

SpectralBasis spectral_basis(const AffinityGraph& graph, Index p) {
  SpectralBasis basis;
  basis.vertices = active_vertices(graph);
  const auto m = static_cast<Index>(basis.vertices.size());
  if (m == 0) return basis;
  const AffinityGraph sub = induced_subgraph(graph, basis.vertices);
  basis.vertex_component = sub.components();
  const int count = *std::ranges::max_element(basis.vertex_component) + 1;
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(count));
  for (Index r = 0; r < m; ++r) members[basis.vertex_component[r]].push_back(r);

  struct Column {
    double value;
    int component;
    Index rank;  // position within the component's spectrum
    Vector vector;
  };
  std::vector<Column> columns;
  for (int comp = 0; comp < count; ++comp) {
    const auto& rows = members[comp];
    const auto size = static_cast<Index>(rows.size());
    const Index keep = p < 0 ? size : std::min(p, size);
    const Matrix l = Matrix(laplacian(induced_subgraph(sub, rows), LaplacianKind::kUnnormalized));
    const EigenPairs<double> pairs = smallest_eigenpairs(l, keep);
    for (Index k = 0; k < keep; ++k) {
      Vector full = Vector::Zero(m);
      for (Index i = 0; i < size; ++i) full[rows[i]] = pairs.vectors(i, k);
      double value = pairs.values[k];
      if (k == 0) {
        // Connected component: the kernel is exactly the constant vector.
        value = 0.0;
        for (const Index r : rows) full[r] = 1.0 / std::sqrt(static_cast<double>(size));
      }
      columns.push_back({value, comp, k, std::move(full)});
    }
  }
  std::ranges::stable_sort(columns, [](const Column& a, const Column& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.component < b.component;
  });
  const auto total = p < 0 ? static_cast<Index>(columns.size())
                           : std::min(static_cast<Index>(columns.size()), p);
  basis.pairs.values.resize(total);
  basis.pairs.vectors.resize(m, total);
  basis.component.resize(static_cast<std::size_t>(total));
  for (Index k = 0; k < total; ++k) {
    basis.pairs.values[k] = columns[k].value;
    basis.pairs.vectors.col(k) = columns[k].vector;
    basis.component[k] = columns[k].component;
  }
  return basis;
}

ScoreMatrix laplacian_eigenmaps(const AffinityGraph& graph, const LabelState& state, Index p) {
  require_matching(graph, state);
  if (p < 1 || p > graph.size()) throw ValidationError("laplacian eigenmaps p must lie in [1, n]");
  return laplacian_eigenmaps(graph, spectral_basis(graph, p), state, p);
}

ScoreMatrix laplacian_eigenmaps(const AffinityGraph& graph, const SpectralBasis& basis,
                                const LabelState& state, Index p) {
  require_matching(graph, state);
  const Index graph_size = graph.size();
  if (p < 1 || p > graph_size) throw ValidationError("laplacian eigenmaps p must lie in [1, n]");
  const int c = state.class_count;
  ScoreMatrix result;
  result.scores = Matrix::Zero(graph_size, c);
  std::vector<Index> unreachable = unreachable_vertices(graph, state);

  std::vector<Index> rows;
  std::vector<bool> labeled_component(basis.vertex_component.size(), false);
  for (std::size_t r = 0; r < basis.vertices.size(); ++r) {
    if (state.is_labeled(basis.vertices[r])) {
      rows.push_back(static_cast<Index>(r));
      labeled_component[basis.vertex_component[r]] = true;
    }
  }
  // Eigenvectors on label-free components have an all-zero design column.
  std::vector<Index> columns;
  for (Index k = 0; k < basis.pairs.count() && static_cast<Index>(columns.size()) < p; ++k) {
    if (labeled_component[basis.component[k]]) columns.push_back(k);
  }
  if (rows.empty() || columns.empty()) {
    resolve_to_majority(result, state, std::move(unreachable));
    return result;
  }

  const Matrix eigvecs = basis.pairs.vectors(Eigen::all, columns);
  const auto l = static_cast<Index>(rows.size());
  Matrix design(l, eigvecs.cols());
  Matrix targets = Matrix::Constant(l, c, -1.0);
  for (Index k = 0; k < l; ++k) {
    design.row(k) = eigvecs.row(rows[k]);
    targets(k, *state.observed[basis.vertices[rows[k]]]) = 1.0;
  }
  const Matrix coeffs = least_squares(design, targets);
  const Matrix fitted = eigvecs * coeffs;
  for (std::size_t r = 0; r < basis.vertices.size(); ++r)
    result.scores.row(basis.vertices[r]) = fitted.row(static_cast<Index>(r));
  resolve_to_majority(result, state, std::move(unreachable));
  return result;
}

Matrix normalize_labels(const Matrix& labels, const Vector& degree) {
  Matrix out = Matrix::Zero(labels.rows(), labels.cols());
  for (Index j = 0; j < labels.cols(); ++j) {
    const double mass = degree.dot(labels.col(j));
    if (mass > 0.0) out.col(j) = degree.cwiseProduct(labels.col(j)) / mass;
  }
  return out;
}

double gtam_objective(const SparseMatrix& normalized_laplacian, const Matrix& scores,
                      const Matrix& normalized_labels, double mu) {
  const double smooth = (scores.transpose() * (normalized_laplacian * scores)).trace();
  const double fit = (scores - normalized_labels).squaredNorm();
  return 0.5 * (smooth + mu * fit);
}

GtamOperator make_gtam_operator(const AffinityGraph& graph, double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ValidationError("gtam mu must be positive");
  GtamOperator op;
  op.mu = mu;
  op.graph_size = graph.size();
  op.vertices = active_vertices(graph);
  const auto m = static_cast<Index>(op.vertices.size());
  op.degree.resize(m);
  for (Index r = 0; r < m; ++r) op.degree[r] = graph.degree()[op.vertices[r]];
  if (m == 0) return op;
  const AffinityGraph sub = induced_subgraph(graph, op.vertices);
  // Lsym + mu I = (1 + mu) I - S
  Matrix system = -Matrix(laplacian(sub, LaplacianKind::kSymmetric));
  system.diagonal().array() += 1.0 + mu;
  op.response = mu * solve_spd(system, Matrix::Identity(m, m));
  // The inverse is symmetric in exact arithmetic.
  op.response = 0.5 * (op.response + op.response.transpose()).eval();
  return op;
}

GtamResult gtam(const AffinityGraph& graph, const LabelState& state, const GtamOptions& options) {
  require_matching(graph, state);
  return gtam(graph, make_gtam_operator(graph, options.mu), state, options.max_steps);
}

GtamResult gtam(const AffinityGraph& graph, const GtamOperator& op, const LabelState& state,
                Index max_steps) {
  require_matching(graph, state);
  if (op.graph_size != graph.size()) throw ValidationError("gtam operator does not match graph");
  GtamResult result = greedy_transduction(op, state, max_steps);
  resolve_to_majority(result.scores, result.augmented,
                      unreachable_vertices(graph, result.augmented));
  return result;
}

ClassVector predict(const ScoreMatrix& scores, const LabelState& state, const AffinityGraph& graph) {
  const Index n = scores.scores.rows();
  if (n != state.size() || n != graph.size())
    throw ValidationError("predict: scores, state and graph sizes differ");
  const int majority = state.majority_class();
  ClassVector out(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    if (graph.is_isolated(i)) {
      out[i] = state.observed[i] ? *state.observed[i] : majority;
      continue;
    }
    Index best = 0;
    for (Index j = 1; j < scores.scores.cols(); ++j) {
      if (scores.scores(i, j) > scores.scores(i, best)) best = j;
    }
    out[i] = static_cast<int>(best);
  }
  return out;
}

double accuracy(const ClassVector& predicted, const ClassVector& truth, const LabelState& state,
                AccuracyScope scope) {
  if (predicted.size() != truth.size() || static_cast<Index>(truth.size()) != state.size())
    throw ValidationError("accuracy: length mismatch");
  Index total = 0;
  Index correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (scope == AccuracyScope::kUnlabeled && state.observed[i]) continue;
    ++total;
    if (predicted[i] == truth[i]) ++correct;
  }
  if (total == 0) throw ValidationError("accuracy: evaluation scope is empty");
  return static_cast<double>(correct) / static_cast<double>(total);
}

}  // namespace gssl
