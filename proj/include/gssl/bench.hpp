#pragma once

#include "gssl/algorithms.hpp"
#include "gssl/dataset.hpp"
#include "gssl/noise.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gssl {

enum class DatasetKind { kG241c, kG241n, kDigit1, kCsv };

struct DatasetSpec {
  DatasetKind kind = DatasetKind::kG241c;
  Seed seed = 0;  // generator seed
  Index n = 1500;
  Index d = 241;
  double separation = kG241cSeparation;  // g241c only
  std::filesystem::path path;            // csv only

  /// Canonical text form, also the dataset column of every record.
  std::string label() const;
  LabeledDataset materialize() const;
};

enum class WeightKind { kConstant, kRbf };

struct AffinitySpec {
  Index k = 15;
  WeightKind weights = WeightKind::kConstant;
  double sigma = 1.0;

  std::string label() const;
  AffinityGraph build(const LabeledDataset& dataset) const;
};

enum class AlgorithmKind { kGfhf, kGtam, kLgc, kLe };

/// One classifier with its hyperparameters. Unused hyperparameters are empty.
struct AlgorithmSpec {
  AlgorithmKind kind = AlgorithmKind::kGfhf;
  std::optional<double> alpha;  // LGC
  std::optional<double> mu;     // GTAM
  std::optional<double> p;      // LE: fraction of the labeled count

  std::string name() const;   // "GFHF", "GTAM", "LGC", "LE"
  std::string label() const;  // e.g. "LGC(alpha=0.9)"
  void validate() const;

  friend bool operator==(const AlgorithmSpec&, const AlgorithmSpec&) = default;
};

/// Canonical ordering used by reports: GFHF, GTAM, LGC, LE, then by hyperparameters.
bool algorithm_less(const AlgorithmSpec& a, const AlgorithmSpec& b);

/// Eigenvector count used by LE for a labeled count l: max(1, round(p * l)).
Index le_eigenvector_count(double p_fraction, Index labeled);

struct GridConfig {
  std::vector<Seed> seeds;
  std::vector<DatasetSpec> datasets;
  std::vector<double> label_fractions;
  std::vector<double> noise_rates;
  std::vector<AffinitySpec> affinities;
  std::vector<AlgorithmSpec> algorithms;
  Seed seed_root = 0;
  NoiseCoupling coupling = NoiseCoupling::kNested;
  AccuracyScope scope = AccuracyScope::kUnlabeled;
  int workers = 0;  // 0 = hardware concurrency

  /// Seeds 0..19, fractions {0.10, 0.05, 0.025, 0.01}, rates {0, 0.05, 0.10,
  /// 0.20, 0.35}, mutual kNN k=15 with constant weights, and GFHF, GTAM
  /// mu={0.0101, 99}, LGC alpha={0.1, 0.9, 0.99}, LE p=0.2.
  static GridConfig defaults();

  /// Product of all list lengths.
  std::size_t cell_count() const;
  void validate() const;
};

struct ExperimentRecord {
  Seed seed = 0;
  std::string dataset;
  std::string affinity;
  AlgorithmSpec algorithm;
  double label_fraction = 0.0;
  double noise_rate = 0.0;
  double accuracy = 0.0;  // NaN when the cell failed
  double wall_time = 0.0;
  Index iterations = 0;
  Index labeled = 0;
  Index flipped = 0;
  Index isolated = 0;
  Index unresolved = 0;
  std::string error;  // empty on success

  bool failed() const { return !error.empty(); }
};

struct AggregateRow {
  std::string dataset;
  std::string affinity;
  AlgorithmSpec algorithm;
  double label_fraction = 0.0;
  double noise_rate = 0.0;
  std::optional<double> mean;  // empty when every cell of the group failed
  double std_dev = 0.0;        // sample standard deviation; 0 for a single seed
  Index seed_count = 0;        // valid cells
  Index failed_count = 0;

  friend bool operator==(const AggregateRow&, const AggregateRow&) = default;
};

using ProgressCallback = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every cell of the grid. Graphs and their spectral/GTAM operators are
/// built once per (dataset, affinity). Failed cells carry an error message.
/// Records come back in canonical order regardless of worker count.
std::vector<ExperimentRecord> run_grid(const GridConfig& config, const ProgressCallback& progress = {});

/// Groups by every coordinate except the seed.
std::vector<AggregateRow> aggregate(const std::vector<ExperimentRecord>& records);

/// Parses the flat `key = value, value` config grammar; see docs/config.md.
GridConfig parse_config(std::istream& in);
GridConfig load_config(const std::filesystem::path& path);

/// Applies one `key = value` assignment to a config (used for CLI overrides).
void apply_config_entry(GridConfig& config, const std::string& key, const std::string& value);

void write_records(const std::vector<ExperimentRecord>& records, std::ostream& out);
std::vector<ExperimentRecord> read_records(std::istream& in);
void write_timings(const std::vector<ExperimentRecord>& records, std::ostream& out);

void write_aggregate_csv(const std::vector<AggregateRow>& rows, std::ostream& out);
std::vector<AggregateRow> read_aggregate_csv(std::istream& in);

void write_markdown(const std::vector<AggregateRow>& rows, std::ostream& out);
void write_svg(const std::vector<AggregateRow>& rows, std::ostream& out);

enum class ReportFormat { kCsv, kMarkdown, kSvg };

void emit_report(const std::vector<AggregateRow>& rows, ReportFormat format,
                 const std::filesystem::path& path);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

/// Parses specs like `lgc(alpha=0.9)`, `g241c(seed=3)`, `knn(k=15,weights=rbf,sigma=2)`.
AlgorithmSpec parse_algorithm(const std::string& text);
DatasetSpec parse_dataset(const std::string& text);
AffinitySpec parse_affinity(const std::string& text);

}  // namespace gssl
