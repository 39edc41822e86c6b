#include "gssl/bench.hpp"

#include "gssl/error.hpp"
#include "gssl/random.hpp"
#include "text.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace gssl {
namespace {

double require_number(const text::Call& call, const std::string& key) {
  const auto value = text::to_double(call.args.at(key));
  if (!value) throw ValidationError("'" + key + "' in '" + call.name + "' must be numeric");
  return *value;
}

long long require_integer(const text::Call& call, const std::string& key) {
  const auto value = text::to_integer(call.args.at(key));
  if (!value) throw ValidationError("'" + key + "' in '" + call.name + "' must be an integer");
  return *value;
}

void reject_unknown(const text::Call& call, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : call.args) {
    if (std::ranges::find(allowed, key) == allowed.end())
      throw ValidationError("unknown argument '" + key + "' for '" + call.name + "'");
  }
}

std::vector<double> parse_number_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& part : text::split_top_level(value)) {
    const auto number = text::to_double(part);
    if (!number) throw ValidationError("'" + key + "' expects numbers, got '" + part + "'");
    out.push_back(*number);
  }
  return out;
}

std::vector<Seed> parse_seed_list(const std::string& value) {
  std::vector<Seed> out;
  for (const auto& part : text::split_top_level(value)) {
    const auto dots = part.find("..");
    if (dots != std::string::npos) {
      const auto lo = text::to_integer(std::string_view(part).substr(0, dots));
      const auto hi = text::to_integer(std::string_view(part).substr(dots + 2));
      if (!lo || !hi || *lo < 0 || *hi < *lo) throw ValidationError("bad seed range '" + part + "'");
      for (long long s = *lo; s <= *hi; ++s) out.push_back(static_cast<Seed>(s));
    } else {
      const auto s = text::to_integer(part);
      if (!s || *s < 0) throw ValidationError("bad seed '" + part + "'");
      out.push_back(static_cast<Seed>(*s));
    }
  }
  return out;
}

/// Everything derived once per (dataset, affinity) and shared by its cells.
struct GraphContext {
  const LabeledDataset* dataset = nullptr;
  std::string dataset_label;
  std::string affinity_label;
  AffinityGraph graph;
  std::optional<SpectralBasis> basis;
  std::string basis_error;
  std::map<double, GtamOperator> gtam_ops;
  std::map<double, std::string> gtam_errors;
};

struct CellResult {
  double accuracy;
  Index iterations;
  Index unresolved;
};

CellResult run_cell(const GraphContext& ctx, const AlgorithmSpec& algorithm, const LabelState& state,
                    AccuracyScope scope) {
  const AffinityGraph& graph = ctx.graph;
  ScoreMatrix scores;
  switch (algorithm.kind) {
    case AlgorithmKind::kGfhf:
      scores = gfhf(graph, state);
      break;
    case AlgorithmKind::kLgc:
      scores = lgc(graph, state, {.alpha = *algorithm.alpha});
      break;
    case AlgorithmKind::kLe: {
      if (!ctx.basis) throw NumericalError(ctx.basis_error);
      const Index p = std::min(le_eigenvector_count(*algorithm.p, state.labeled_count()), graph.size());
      scores = laplacian_eigenmaps(graph, *ctx.basis, state, p);
      break;
    }
    case AlgorithmKind::kGtam: {
      const auto it = ctx.gtam_ops.find(*algorithm.mu);
      if (it == ctx.gtam_ops.end()) throw NumericalError(ctx.gtam_errors.at(*algorithm.mu));
      scores = gtam(graph, it->second, state).scores;
      break;
    }
  }
  const ClassVector predicted = predict(scores, state, graph);
  return {accuracy(predicted, ctx.dataset->truth, state, scope), scores.iterations,
          static_cast<Index>(scores.unresolved.size())};
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "NA";
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, end);
}

std::string DatasetSpec::label() const {
  std::string args;
  const auto add = [&](const std::string& key, const std::string& value) {
    args += (args.empty() ? "" : ",") + key + "=" + value;
  };
  std::string name;
  switch (kind) {
    case DatasetKind::kG241c: name = "g241c"; break;
    case DatasetKind::kG241n: name = "g241n"; break;
    case DatasetKind::kDigit1: name = "digit1"; break;
    case DatasetKind::kCsv: return "csv(path=" + path.string() + ")";
  }
  if (seed != 0) add("seed", std::to_string(seed));
  if (n != 1500) add("n", std::to_string(n));
  if (d != 241) add("d", std::to_string(d));
  if (kind == DatasetKind::kG241c && separation != kG241cSeparation)
    add("separation", format_number(separation));
  return args.empty() ? name : name + "(" + args + ")";
}

LabeledDataset DatasetSpec::materialize() const {
  LabeledDataset out;
  switch (kind) {
    case DatasetKind::kG241c: out = gen_g241c(seed, n, d, separation); break;
    case DatasetKind::kG241n: out = gen_g241n(seed, n, d); break;
    case DatasetKind::kDigit1: out = gen_digit1_like(seed, n, d); break;
    case DatasetKind::kCsv: out = load_csv(path); break;
  }
  out.name = label();
  return out;
}

std::string AffinitySpec::label() const {
  std::string out = "knn(k=" + std::to_string(k);
  if (weights == WeightKind::kRbf) out += ",weights=rbf,sigma=" + format_number(sigma);
  return out + ")";
}

AffinityGraph AffinitySpec::build(const LabeledDataset& dataset) const {
  const Matrix dist = pairwise_sq_euclidean(dataset.features);
  AffinityGraph graph = mutual_knn_graph(knn_index(dist, k));
  if (weights == WeightKind::kRbf) graph = rbf_weights(dist, graph, sigma);
  return graph;
}

std::string AlgorithmSpec::name() const {
  switch (kind) {
    case AlgorithmKind::kGfhf: return "GFHF";
    case AlgorithmKind::kGtam: return "GTAM";
    case AlgorithmKind::kLgc: return "LGC";
    case AlgorithmKind::kLe: return "LE";
  }
  return {};
}

std::string AlgorithmSpec::label() const {
  switch (kind) {
    case AlgorithmKind::kGfhf: return "GFHF";
    case AlgorithmKind::kGtam: return "GTAM(mu=" + format_number(mu.value_or(NAN)) + ")";
    case AlgorithmKind::kLgc: return "LGC(alpha=" + format_number(alpha.value_or(NAN)) + ")";
    case AlgorithmKind::kLe: return "LE(p=" + format_number(p.value_or(NAN)) + ")";
  }
  return {};
}

void AlgorithmSpec::validate() const {
  const bool want_alpha = kind == AlgorithmKind::kLgc;
  const bool want_mu = kind == AlgorithmKind::kGtam;
  const bool want_p = kind == AlgorithmKind::kLe;
  if (alpha.has_value() != want_alpha || mu.has_value() != want_mu || p.has_value() != want_p)
    throw ValidationError(name() + " has the wrong set of hyperparameters");
  if (alpha && !(*alpha > 0.0 && *alpha < 1.0)) throw ValidationError("LGC alpha must lie in (0, 1)");
  if (mu && !(*mu > 0.0 && std::isfinite(*mu))) throw ValidationError("GTAM mu must be positive");
  if (p && !(*p > 0.0 && std::isfinite(*p))) throw ValidationError("LE p must be positive");
}

bool algorithm_less(const AlgorithmSpec& a, const AlgorithmSpec& b) {
  const auto key = [](const AlgorithmSpec& s) {
    return std::tuple(static_cast<int>(s.kind), s.alpha.value_or(0.0), s.mu.value_or(0.0),
                      s.p.value_or(0.0));
  };
  return key(a) < key(b);
}

Index le_eigenvector_count(double p_fraction, Index labeled) {
  return std::max<Index>(1, round_half_up(p_fraction * static_cast<double>(labeled)));
}

AlgorithmSpec parse_algorithm(const std::string& s) {
  const text::Call call = text::parse_call(s);
  AlgorithmSpec spec;
  if (call.name == "gfhf") {
    spec.kind = AlgorithmKind::kGfhf;
    reject_unknown(call, {});
  } else if (call.name == "lgc") {
    spec.kind = AlgorithmKind::kLgc;
    reject_unknown(call, {"alpha"});
    spec.alpha = call.args.contains("alpha") ? require_number(call, "alpha") : 0.9;
  } else if (call.name == "gtam") {
    spec.kind = AlgorithmKind::kGtam;
    reject_unknown(call, {"mu", "lambda"});
    if (call.args.contains("mu") && call.args.contains("lambda"))
      throw ValidationError("gtam takes mu or lambda, not both");
    spec.mu = call.args.contains("mu")       ? require_number(call, "mu")
              : call.args.contains("lambda") ? require_number(call, "lambda")
                                             : 99.0;
  } else if (call.name == "le") {
    spec.kind = AlgorithmKind::kLe;
    reject_unknown(call, {"p"});
    spec.p = call.args.contains("p") ? require_number(call, "p") : 0.2;
  } else {
    throw ValidationError("unknown algorithm '" + call.name + "'");
  }
  spec.validate();
  return spec;
}

DatasetSpec parse_dataset(const std::string& s) {
  const text::Call call = text::parse_call(s);
  DatasetSpec spec;
  if (call.name == "csv") {
    reject_unknown(call, {"path"});
    if (!call.args.contains("path")) throw ValidationError("csv dataset needs path=...");
    spec.kind = DatasetKind::kCsv;
    spec.path = call.args.at("path");
    return spec;
  }
  if (call.name == "g241c") {
    spec.kind = DatasetKind::kG241c;
    reject_unknown(call, {"seed", "n", "d", "separation"});
  } else if (call.name == "g241n") {
    spec.kind = DatasetKind::kG241n;
    reject_unknown(call, {"seed", "n", "d"});
  } else if (call.name == "digit1") {
    spec.kind = DatasetKind::kDigit1;
    reject_unknown(call, {"seed", "n", "d"});
  } else {
    throw ValidationError("unknown dataset '" + call.name + "'");
  }
  if (call.args.contains("seed")) {
    const auto v = require_integer(call, "seed");
    if (v < 0) throw ValidationError("dataset seed must be nonnegative");
    spec.seed = static_cast<Seed>(v);
  }
  if (call.args.contains("n")) spec.n = require_integer(call, "n");
  if (call.args.contains("d")) spec.d = require_integer(call, "d");
  if (call.args.contains("separation")) spec.separation = require_number(call, "separation");
  return spec;
}

AffinitySpec parse_affinity(const std::string& s) {
  const text::Call call = text::parse_call(s);
  if (call.name != "knn" && call.name != "mutual_knn")
    throw ValidationError("unknown affinity '" + call.name + "'");
  reject_unknown(call, {"k", "weights", "sigma"});
  AffinitySpec spec;
  if (call.args.contains("k")) spec.k = require_integer(call, "k");
  if (call.args.contains("weights")) {
    const auto w = text::lower(call.args.at("weights"));
    if (w == "constant") {
      spec.weights = WeightKind::kConstant;
    } else if (w == "rbf") {
      spec.weights = WeightKind::kRbf;
    } else {
      throw ValidationError("unknown weights '" + w + "'");
    }
  }
  if (call.args.contains("sigma")) spec.sigma = require_number(call, "sigma");
  if (spec.k < 1) throw ValidationError("affinity k must be positive");
  if (!(spec.sigma > 0.0)) throw ValidationError("affinity sigma must be positive");
  return spec;
}

GridConfig GridConfig::defaults() {
  GridConfig config;
  for (Seed s = 0; s < 20; ++s) config.seeds.push_back(s);
  for (const auto kind : {DatasetKind::kDigit1, DatasetKind::kG241c, DatasetKind::kG241n}) {
    DatasetSpec spec;
    spec.kind = kind;
    config.datasets.push_back(spec);
  }
  config.label_fractions = {0.10, 0.05, 0.025, 0.01};
  config.noise_rates = {0.0, 0.05, 0.10, 0.20, 0.35};
  config.affinities = {AffinitySpec{}};
  config.algorithms = {parse_algorithm("gfhf"),          parse_algorithm("gtam(mu=0.0101)"),
                       parse_algorithm("gtam(mu=99)"),   parse_algorithm("lgc(alpha=0.1)"),
                       parse_algorithm("lgc(alpha=0.9)"), parse_algorithm("lgc(alpha=0.99)"),
                       parse_algorithm("le(p=0.2)")};
  return config;
}

std::size_t GridConfig::cell_count() const {
  return seeds.size() * datasets.size() * label_fractions.size() * noise_rates.size() *
         affinities.size() * algorithms.size();
}

void GridConfig::validate() const {
  const auto nonempty = [](bool ok, const char* what) {
    if (!ok) throw ValidationError(std::string("config list '") + what + "' is empty");
  };
  nonempty(!seeds.empty(), "seeds");
  nonempty(!datasets.empty(), "datasets");
  nonempty(!label_fractions.empty(), "label_fractions");
  nonempty(!noise_rates.empty(), "noise_rates");
  nonempty(!affinities.empty(), "affinities");
  nonempty(!algorithms.empty(), "algorithms");
  for (const double f : label_fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw ValidationError("label fractions must lie in (0, 1]");
  }
  for (const double r : noise_rates) {
    if (!(r >= 0.0 && r < 1.0)) throw ValidationError("noise rates must lie in [0, 1)");
  }
  for (const auto& a : algorithms) a.validate();
  for (const auto& a : affinities) {
    if (a.k < 1) throw ValidationError("affinity k must be positive");
  }
  if (workers < 0) throw ValidationError("workers must be nonnegative");
}

std::vector<ExperimentRecord> run_grid(const GridConfig& config, const ProgressCallback& progress) {
  config.validate();

  std::vector<LabeledDataset> datasets;
  for (const auto& spec : config.datasets) {
    datasets.push_back(spec.materialize());
    datasets.back().validate();
    for (const double f : config.label_fractions) {
      NoiseSpec probe{.label_fraction = f};
      probe.validate(datasets.back().size(), datasets.back().class_count);
    }
    for (const auto& a : config.affinities) {
      if (a.k > datasets.back().size() - 1)
        throw ValidationError("affinity k=" + std::to_string(a.k) + " exceeds n-1 for " +
                              datasets.back().name);
    }
    if (datasets.back().class_count > 2)
      throw ValidationError("dataset " + datasets.back().name +
                            " has more than two classes; the flip noise model is binary");
  }

  std::vector<GraphContext> contexts;
  for (std::size_t di = 0; di < datasets.size(); ++di) {
    for (const auto& affinity : config.affinities) {
      GraphContext ctx;
      ctx.dataset = &datasets[di];
      ctx.dataset_label = config.datasets[di].label();
      ctx.affinity_label = affinity.label();
      ctx.graph = affinity.build(datasets[di]);
      for (const auto& alg : config.algorithms) {
        try {
          if (alg.kind == AlgorithmKind::kLe && !ctx.basis && ctx.basis_error.empty()) {
            ctx.basis = spectral_basis(ctx.graph);
          } else if (alg.kind == AlgorithmKind::kGtam && !ctx.gtam_ops.contains(*alg.mu) &&
                     !ctx.gtam_errors.contains(*alg.mu)) {
            ctx.gtam_ops.emplace(*alg.mu, make_gtam_operator(ctx.graph, *alg.mu));
          }
        } catch (const std::exception& e) {
          if (alg.kind == AlgorithmKind::kLe) ctx.basis_error = e.what();
          else ctx.gtam_errors.emplace(*alg.mu, e.what());
        }
      }
      contexts.push_back(std::move(ctx));
    }
  }

  const std::size_t n_aff = config.affinities.size();
  const std::size_t n_frac = config.label_fractions.size();
  const std::size_t n_rate = config.noise_rates.size();
  const std::size_t n_seed = config.seeds.size();
  const std::size_t n_alg = config.algorithms.size();
  const std::size_t total = config.cell_count();
  std::vector<ExperimentRecord> records(total);

  // Canonical cell order: dataset, affinity, label fraction, noise rate, seed, algorithm.
  const auto run_one = [&](std::size_t cell) {
    std::size_t rest = cell;
    const std::size_t ai = rest % n_alg; rest /= n_alg;
    const std::size_t si = rest % n_seed; rest /= n_seed;
    const std::size_t ri = rest % n_rate; rest /= n_rate;
    const std::size_t fi = rest % n_frac; rest /= n_frac;
    const std::size_t ci = rest;  // context index = dataset * n_aff + affinity
    (void)n_aff;
    const GraphContext& ctx = contexts[ci];
    ExperimentRecord& rec = records[cell];
    rec.seed = config.seeds[si];
    rec.dataset = ctx.dataset_label;
    rec.affinity = ctx.affinity_label;
    rec.algorithm = config.algorithms[ai];
    rec.label_fraction = config.label_fractions[fi];
    rec.noise_rate = config.noise_rates[ri];
    rec.isolated = ctx.graph.isolated_count();
    const auto start = std::chrono::steady_clock::now();
    try {
      NoiseSpec spec{.seed = derive_seed(config.seed_root, rec.seed),
                     .label_fraction = rec.label_fraction,
                     .noise_rate = rec.noise_rate,
                     .coupling = config.coupling};
      const LabelState state = inject_noise(spec, sample_labeled(spec, *ctx.dataset), ctx.dataset->truth);
      rec.labeled = state.labeled_count();
      rec.flipped = static_cast<Index>(state.flip_record.size());
      const CellResult result = run_cell(ctx, rec.algorithm, state, config.scope);
      rec.accuracy = result.accuracy;
      rec.iterations = result.iterations;
      rec.unresolved = result.unresolved;
    } catch (const std::exception& e) {
      rec.accuracy = std::nan("");
      rec.error = e.what();
      if (rec.error.empty()) rec.error = "unknown failure";
    }
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<std::size_t>(config.workers > 0 ? config.workers : static_cast<int>(hw));
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  const auto worker = [&] {
    for (std::size_t cell = next++; cell < total; cell = next++) {
      run_one(cell);
      const std::size_t finished = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(finished, total);
      }
    }
  };
  const std::size_t thread_count = std::min(workers, total);
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < thread_count; ++t) pool.emplace_back(worker);
  }
  return records;
}

std::vector<AggregateRow> aggregate(const std::vector<ExperimentRecord>& records) {
  if (records.empty()) throw ValidationError("aggregate needs at least one record");
  struct Key {
    std::string dataset;
    std::string affinity;
    AlgorithmSpec algorithm;
    double label_fraction;
    double noise_rate;
  };
  const auto key_less = [](const Key& a, const Key& b) {
    if (a.dataset != b.dataset) return a.dataset < b.dataset;
    if (a.affinity != b.affinity) return a.affinity < b.affinity;
    if (a.label_fraction != b.label_fraction) return a.label_fraction > b.label_fraction;
    if (a.noise_rate != b.noise_rate) return a.noise_rate < b.noise_rate;
    return algorithm_less(a.algorithm, b.algorithm);
  };
  std::map<Key, std::vector<const ExperimentRecord*>, decltype(key_less)> groups(key_less);
  for (const auto& r : records)
    groups[{r.dataset, r.affinity, r.algorithm, r.label_fraction, r.noise_rate}].push_back(&r);

  std::vector<AggregateRow> rows;
  for (auto& [key, members] : groups) {
    // Summation order fixed by seed so record order never changes the bits.
    std::ranges::sort(members, [](const auto* a, const auto* b) { return a->seed < b->seed; });
    AggregateRow row;
    row.dataset = key.dataset;
    row.affinity = key.affinity;
    row.algorithm = key.algorithm;
    row.label_fraction = key.label_fraction;
    row.noise_rate = key.noise_rate;
    std::vector<double> values;
    for (const auto* r : members) {
      if (r->failed()) ++row.failed_count;
      else values.push_back(r->accuracy);
    }
    row.seed_count = static_cast<Index>(values.size());
    if (!values.empty()) {
      double sum = 0.0;
      for (const double v : values) sum += v;
      const double mean = sum / static_cast<double>(values.size());
      double ss = 0.0;
      for (const double v : values) ss += (v - mean) * (v - mean);
      row.mean = mean;
      row.std_dev = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void apply_config_entry(GridConfig& config, const std::string& raw_key, const std::string& value) {
  const std::string key = text::lower(text::trim(raw_key));
  if (key == "seeds") {
    config.seeds = parse_seed_list(value);
  } else if (key == "seed_root") {
    const auto v = text::to_integer(value);
    if (!v || *v < 0) throw ValidationError("seed_root must be a nonnegative integer");
    config.seed_root = static_cast<Seed>(*v);
  } else if (key == "datasets") {
    config.datasets.clear();
    for (const auto& part : text::split_top_level(value)) config.datasets.push_back(parse_dataset(part));
  } else if (key == "label_fractions") {
    config.label_fractions = parse_number_list(key, value);
  } else if (key == "noise_rates") {
    config.noise_rates = parse_number_list(key, value);
  } else if (key == "affinities" || key == "affinity") {
    config.affinities.clear();
    for (const auto& part : text::split_top_level(value)) config.affinities.push_back(parse_affinity(part));
  } else if (key == "algorithms") {
    config.algorithms.clear();
    for (const auto& part : text::split_top_level(value)) config.algorithms.push_back(parse_algorithm(part));
  } else if (key == "coupling") {
    const auto v = text::lower(text::trim(value));
    if (v == "nested") config.coupling = NoiseCoupling::kNested;
    else if (v == "independent") config.coupling = NoiseCoupling::kIndependent;
    else throw ValidationError("coupling must be nested or independent");
  } else if (key == "scope") {
    const auto v = text::lower(text::trim(value));
    if (v == "unlabeled") config.scope = AccuracyScope::kUnlabeled;
    else if (v == "all") config.scope = AccuracyScope::kAll;
    else throw ValidationError("scope must be unlabeled or all");
  } else if (key == "workers") {
    const auto v = text::to_integer(value);
    if (!v || *v < 0) throw ValidationError("workers must be a nonnegative integer");
    config.workers = static_cast<int>(*v);
  } else {
    throw ValidationError("unknown config key '" + key + "'");
  }
}

GridConfig parse_config(std::istream& in) {
  GridConfig config = GridConfig::defaults();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const auto body = text::trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no, 1);
    try {
      apply_config_entry(config, std::string(body.substr(0, eq)), std::string(text::trim(body.substr(eq + 1))));
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no, eq + 2);
    }
  }
  return config;
}

GridConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  return parse_config(in);
}

}  // namespace gssl
