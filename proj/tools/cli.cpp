#include "cli.hpp"

#include "CLI11.hpp"
#include "gssl/bench.hpp"
#include "gssl/error.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

namespace gssl::cli {
namespace {

namespace fs = std::filesystem;

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : ", ") + p;
  return out;
}

ReportFormat to_format(const std::string& name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "markdown" || name == "md") return ReportFormat::kMarkdown;
  if (name == "svg") return ReportFormat::kSvg;
  throw ValidationError("unknown format '" + name + "'");
}

std::string format_extension(ReportFormat f) {
  switch (f) {
    case ReportFormat::kCsv: return "aggregate.csv";
    case ReportFormat::kMarkdown: return "report.md";
    case ReportFormat::kSvg: return "report.svg";
  }
  return {};
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory '" + dir.string() + "'");
}

template <class Fn>
void write_file(const fs::path& path, Fn&& fill) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  fill(out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

/// File-safe name for a dataset label such as "g241c(seed=3,n=100)".
std::string file_stem(const std::string& label) {
  std::string out;
  for (const char ch : label) {
    if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-') out += ch;
    else if (!out.empty() && out.back() != '_') out += '_';
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

struct Flags {
  // generate
  std::vector<std::string> datasets;
  // run
  std::string config;
  std::vector<std::string> sets;
  std::optional<std::string> seeds, run_datasets, fractions, rates, affinities, algorithms, coupling, scope;
  // report
  std::string records;
  // verify
  std::string only;
  // shared
  std::optional<Seed> seed_root;
  std::string out_dir;
  std::vector<std::string> formats;
  std::optional<int> workers;
  bool dry_run = false;
  bool quiet = false;
};

int do_generate(const Flags& f, std::ostream& out) {
  const fs::path dir = f.out_dir.empty() ? fs::path("data") : fs::path(f.out_dir);
  std::vector<DatasetSpec> specs;
  for (const auto& text : f.datasets) {
    DatasetSpec spec = parse_dataset(text);
    if (f.seed_root && text.find("seed") == std::string::npos) spec.seed = *f.seed_root;
    specs.push_back(spec);
  }
  if (!f.dry_run) ensure_dir(dir);
  for (const auto& spec : specs) {
    const fs::path path = dir / (file_stem(spec.label()) + ".csv");
    if (f.dry_run) {
      out << "would write " << path.string() << '\n';
      continue;
    }
    const LabeledDataset data = spec.materialize();
    save_csv(data, path);
    out << "wrote " << path.string() << " (" << data.size() << " x " << data.dimension() << ")\n";
  }
  return kExitOk;
}

GridConfig build_config(const Flags& f) {
  GridConfig config = f.config.empty() ? GridConfig::defaults() : load_config(f.config);
  const auto apply = [&](const char* key, const std::optional<std::string>& value) {
    if (value) apply_config_entry(config, key, *value);
  };
  for (const auto& entry : f.sets) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + entry + "'");
    apply_config_entry(config, entry.substr(0, eq), entry.substr(eq + 1));
  }
  apply("seeds", f.seeds);
  apply("datasets", f.run_datasets);
  apply("label_fractions", f.fractions);
  apply("noise_rates", f.rates);
  apply("affinities", f.affinities);
  apply("algorithms", f.algorithms);
  apply("coupling", f.coupling);
  apply("scope", f.scope);
  if (f.seed_root) config.seed_root = *f.seed_root;
  if (f.workers) config.workers = *f.workers;
  config.validate();
  return config;
}

int do_run(const Flags& f, std::ostream& out, std::ostream& err) {
  const GridConfig config = build_config(f);
  std::vector<std::string> algs;
  for (const auto& a : config.algorithms) algs.push_back(a.label());
  out << "seeds: " << config.seeds.size() << '\n'
      << "datasets: " << config.datasets.size() << '\n'
      << "label_fractions: " << config.label_fractions.size() << '\n'
      << "noise_rates: " << config.noise_rates.size() << '\n'
      << "affinities: " << config.affinities.size() << '\n'
      << "algorithms: " << config.algorithms.size() << " (" << join(algs) << ")\n"
      << "cells: " << config.cell_count() << '\n';
  if (f.dry_run) return kExitOk;

  std::vector<ReportFormat> formats;
  for (const auto& name : f.formats) formats.push_back(to_format(name));
  const fs::path dir = f.out_dir.empty() ? fs::path("results") : fs::path(f.out_dir);
  ensure_dir(dir);

  std::size_t last_pct = 101;
  const auto progress = [&](std::size_t done, std::size_t total) {
    if (f.quiet) return;
    const std::size_t pct = done * 100 / total;
    if (pct != last_pct && (pct % 10 == 0 || done == total)) {
      err << "progress: " << done << "/" << total << " cells\n";
      last_pct = pct;
    }
  };
  const auto records = run_grid(config, progress);
  const auto failed = std::ranges::count_if(records, [](const ExperimentRecord& r) { return r.failed(); });
  write_file(dir / "records.csv", [&](std::ostream& o) { write_records(records, o); });
  write_file(dir / "timings.csv", [&](std::ostream& o) { write_timings(records, o); });
  const auto rows = aggregate(records);
  emit_report(rows, ReportFormat::kCsv, dir / "aggregate.csv");
  for (const auto format : formats)
    if (format != ReportFormat::kCsv) emit_report(rows, format, dir / format_extension(format));
  out << "wrote " << records.size() << " records to " << (dir / "records.csv").string() << '\n';
  if (failed > 0) err << failed << " cell(s) failed; see the error column of records.csv\n";
  return kExitOk;
}

int do_report(const Flags& f, std::ostream& out) {
  const fs::path records_path =
      !f.records.empty() ? fs::path(f.records) : (f.out_dir.empty() ? fs::path("results") : fs::path(f.out_dir)) / "records.csv";
  const fs::path dir = !f.out_dir.empty() ? fs::path(f.out_dir) : records_path.parent_path();
  std::ifstream in(records_path);
  if (!in) throw IoError("cannot open records '" + records_path.string() + "'");
  const auto records = read_records(in);
  if (records.empty()) throw ValidationError("no records in '" + records_path.string() + "'");
  const auto rows = aggregate(records);
  if (!dir.empty()) ensure_dir(dir);
  const std::vector<std::string> names = f.formats.empty() ? std::vector<std::string>{"markdown"} : f.formats;
  for (const auto& name : names) {
    const ReportFormat format = to_format(name);
    const fs::path path = dir / format_extension(format);
    emit_report(rows, format, path);
    out << "wrote " << path.string() << " (" << rows.size() << " rows)\n";
  }
  return kExitOk;
}

int do_verify(const Flags& f, std::ostream& out, const VerifyHook& verify) {
  if (!verify) throw ValidationError("verify is not available in this build");
  std::set<int> only;
  if (!f.only.empty()) {
    std::stringstream ss(f.only);
    std::string item;
    while (std::getline(ss, item, ',')) {
      int id = 0;
      try {
        std::size_t used = 0;
        id = std::stoi(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ValidationError("--only expects criterion numbers, got '" + item + "'");
      }
      if (id < 1 || id > 9) throw ValidationError("criterion numbers run from 1 to 9");
      only.insert(id);
    }
  }
  const int failed = verify(only, f.workers.value_or(0), out);
  return failed == 0 ? kExitOk : kExitRuntime;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const VerifyHook& verify) {
  CLI::App app{"Graph-based semi-supervised learning under label noise: data generation, grid runs, reports."};
  app.name("gssl");
  app.require_subcommand(1);
  Flags f;

  auto* generate = app.add_subcommand("generate", "Write synthetic datasets as CSV files");
  generate->add_option("--dataset,-d", f.datasets, "Dataset spec, repeatable, e.g. g241c(seed=3)")
      ->default_val(std::vector<std::string>{"g241c", "g241n", "digit1"});
  generate->add_option("--seed-root", f.seed_root, "Generator seed for specs without seed=");
  generate->add_option("--out-dir,-o", f.out_dir, "Output directory (default: data)");
  generate->add_flag("--dry-run", f.dry_run, "List the files without writing them");

  auto* run_cmd = app.add_subcommand("run", "Run an experiment grid");
  run_cmd->add_option("--config,-c", f.config, "Config file; see docs/config.md")->check(CLI::ExistingFile);
  run_cmd->add_option("--set", f.sets, "Override one config entry, key=value (repeatable)");
  run_cmd->add_option("--seeds", f.seeds, "Seed list, e.g. 0..19");
  run_cmd->add_option("--datasets", f.run_datasets, "Dataset list");
  run_cmd->add_option("--label-fractions", f.fractions, "Label fraction list");
  run_cmd->add_option("--noise-rates", f.rates, "Noise rate list");
  run_cmd->add_option("--affinities", f.affinities, "Affinity graph list");
  run_cmd->add_option("--algorithms", f.algorithms, "Algorithm list");
  run_cmd->add_option("--coupling", f.coupling, "nested or independent");
  run_cmd->add_option("--scope", f.scope, "unlabeled or all");
  run_cmd->add_option("--seed-root", f.seed_root, "Root of all per-seed substreams");
  run_cmd->add_option("--workers,-j", f.workers, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--out-dir,-o", f.out_dir, "Output directory (default: results)");
  run_cmd->add_option("--format,-f", f.formats, "Extra report formats: csv, markdown, svg")
      ->check(CLI::IsMember({"csv", "markdown", "md", "svg"}));
  run_cmd->add_flag("--dry-run", f.dry_run, "Print the cell count and exit");
  run_cmd->add_flag("--quiet,-q", f.quiet, "No progress output");

  auto* report = app.add_subcommand("report", "Aggregate records and emit reports");
  report->add_option("--records,-r", f.records, "Records CSV (default: <out-dir>/records.csv)");
  report->add_option("--out-dir,-o", f.out_dir, "Output directory (default: next to the records)");
  report->add_option("--format,-f", f.formats, "csv, markdown or svg (repeatable; default markdown)")
      ->check(CLI::IsMember({"csv", "markdown", "md", "svg"}));

  auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance suite");
  verify_cmd->add_option("--only", f.only, "Comma-separated criterion numbers");
  verify_cmd->add_option("--workers,-j", f.workers, "Worker threads for grid criteria")->check(CLI::NonNegativeNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  try {
    if (generate->parsed()) return do_generate(f, out);
    if (run_cmd->parsed()) return do_run(f, out, err);
    if (report->parsed()) return do_report(f, out);
    if (verify_cmd->parsed()) return do_verify(f, out, verify);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitValidation;
}

}  // namespace gssl::cli
