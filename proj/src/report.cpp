#include "gssl/bench.hpp"

#include "gssl/error.hpp"
#include "text.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace gssl {
namespace {

constexpr std::string_view kRecordsVersion = "# gssl-records v1";
constexpr std::string_view kRecordsHeader =
    "seed,dataset,affinity,algorithm,alpha,mu,p,label_fraction,noise_rate,accuracy,iterations,"
    "labeled,flipped,isolated,unresolved,error";
constexpr std::string_view kAggregateHeader =
    "dataset,affinity,algorithm,alpha,mu,p,label_fraction,noise_rate,mean_accuracy,std_accuracy,"
    "seed_count,failed_count";

std::string optional_field(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

std::optional<double> parse_optional(const std::string& field, std::size_t row, std::size_t column) {
  if (field == "NA") return std::nullopt;
  const auto v = text::to_double(field);
  if (!v) throw ParseError("expected a number or NA, got '" + field + "'", row, column);
  return *v;
}

double parse_number(const std::string& field, std::size_t row, std::size_t column) {
  const auto v = text::to_double(field);
  if (!v) throw ParseError("expected a number, got '" + field + "'", row, column);
  return *v;
}

long long parse_int(const std::string& field, std::size_t row, std::size_t column) {
  const auto v = text::to_integer(field);
  if (!v) throw ParseError("expected an integer, got '" + field + "'", row, column);
  return *v;
}

AlgorithmSpec algorithm_from_fields(const std::string& name, const std::optional<double>& alpha,
                                    const std::optional<double>& mu, const std::optional<double>& p,
                                    std::size_t row) {
  AlgorithmSpec spec;
  const std::string key = text::lower(name);
  if (key == "gfhf") spec.kind = AlgorithmKind::kGfhf;
  else if (key == "gtam") spec.kind = AlgorithmKind::kGtam;
  else if (key == "lgc") spec.kind = AlgorithmKind::kLgc;
  else if (key == "le") spec.kind = AlgorithmKind::kLe;
  else throw ParseError("unknown algorithm '" + name + "'", row, 1);
  spec.alpha = alpha;
  spec.mu = mu;
  spec.p = p;
  try {
    spec.validate();
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), row, 1);
  }
  return spec;
}

/// Reads data lines after skipping comments, blank lines and the expected header.
template <class RowFn>
void read_table(std::istream& in, std::string_view header, RowFn&& on_row) {
  std::string line;
  std::size_t row = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || line.front() == '#') continue;
    if (!seen_header) {
      if (line != header) throw ParseError("unexpected header", row, 1);
      seen_header = true;
      continue;
    }
    on_row(text::csv_split(line), row);
  }
  if (!seen_header) throw ParseError("missing header", row, 1);
}

/// Fixed five-decimal rounding with trailing zeros removed, as in "0.9663".
std::string table_number(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.5f", v);
  std::string s = buffer;
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

std::string percent(double fraction) { return table_number(fraction * 100.0) + "%"; }

std::string xml_escape(std::string_view s) {
  std::string out;
  for (const char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

void require_rows(const std::vector<AggregateRow>& rows) {
  if (rows.empty()) throw ValidationError("report needs at least one aggregate row");
}

using Panel = std::pair<std::string, std::string>;  // (dataset, affinity)

std::vector<Panel> panels_of(const std::vector<AggregateRow>& rows) {
  std::vector<Panel> out;
  for (const auto& r : rows) {
    Panel key{r.dataset, r.affinity};
    if (std::ranges::find(out, key) == out.end()) out.push_back(key);
  }
  return out;
}

template <class T, class Less>
std::vector<T> distinct(const std::vector<T>& values, Less less) {
  std::vector<T> out;
  for (const auto& v : values) {
    if (std::ranges::none_of(out, [&](const T& o) { return !less(o, v) && !less(v, o); })) out.push_back(v);
  }
  std::ranges::sort(out, less);
  return out;
}

}  // namespace

void write_records(const std::vector<ExperimentRecord>& records, std::ostream& out) {
  out << kRecordsVersion << '\n' << kRecordsHeader << '\n';
  for (const auto& r : records) {
    out << r.seed << ',' << text::csv_field(r.dataset) << ',' << text::csv_field(r.affinity) << ','
        << r.algorithm.name() << ',' << optional_field(r.algorithm.alpha) << ','
        << optional_field(r.algorithm.mu) << ',' << optional_field(r.algorithm.p) << ','
        << format_number(r.label_fraction) << ',' << format_number(r.noise_rate) << ','
        << format_number(r.accuracy) << ',' << r.iterations << ',' << r.labeled << ',' << r.flipped << ','
        << r.isolated << ',' << r.unresolved << ',' << text::csv_field(r.error) << '\n';
  }
}

std::vector<ExperimentRecord> read_records(std::istream& in) {
  std::vector<ExperimentRecord> records;
  read_table(in, kRecordsHeader, [&](const std::vector<std::string>& f, std::size_t row) {
    if (f.size() != 16) throw ParseError("expected 16 fields", row, f.size());
    ExperimentRecord r;
    const auto seed = parse_int(f[0], row, 1);
    if (seed < 0) throw ParseError("seed must be nonnegative", row, 1);
    r.seed = static_cast<Seed>(seed);
    r.dataset = f[1];
    r.affinity = f[2];
    r.algorithm = algorithm_from_fields(f[3], parse_optional(f[4], row, 5), parse_optional(f[5], row, 6),
                                        parse_optional(f[6], row, 7), row);
    r.label_fraction = parse_number(f[7], row, 8);
    r.noise_rate = parse_number(f[8], row, 9);
    const auto acc = parse_optional(f[9], row, 10);
    r.accuracy = acc.value_or(std::nan(""));
    r.iterations = parse_int(f[10], row, 11);
    r.labeled = parse_int(f[11], row, 12);
    r.flipped = parse_int(f[12], row, 13);
    r.isolated = parse_int(f[13], row, 14);
    r.unresolved = parse_int(f[14], row, 15);
    r.error = f[15];
    if (!acc && r.error.empty()) throw ParseError("missing accuracy without an error", row, 10);
    if (acc && !(*acc >= 0.0 && *acc <= 1.0)) throw ParseError("accuracy outside [0, 1]", row, 10);
    records.push_back(std::move(r));
  });
  return records;
}

void write_timings(const std::vector<ExperimentRecord>& records, std::ostream& out) {
  out << "seed,dataset,affinity,algorithm,alpha,mu,p,label_fraction,noise_rate,wall_time_s\n";
  for (const auto& r : records) {
    out << r.seed << ',' << text::csv_field(r.dataset) << ',' << text::csv_field(r.affinity) << ','
        << r.algorithm.name() << ',' << optional_field(r.algorithm.alpha) << ','
        << optional_field(r.algorithm.mu) << ',' << optional_field(r.algorithm.p) << ','
        << format_number(r.label_fraction) << ',' << format_number(r.noise_rate) << ','
        << format_number(r.wall_time) << '\n';
  }
}

void write_aggregate_csv(const std::vector<AggregateRow>& rows, std::ostream& out) {
  out << kAggregateHeader << '\n';
  for (const auto& r : rows) {
    out << text::csv_field(r.dataset) << ',' << text::csv_field(r.affinity) << ',' << r.algorithm.name()
        << ',' << optional_field(r.algorithm.alpha) << ',' << optional_field(r.algorithm.mu) << ','
        << optional_field(r.algorithm.p) << ',' << format_number(r.label_fraction) << ','
        << format_number(r.noise_rate) << ',' << optional_field(r.mean) << ','
        << (r.mean ? format_number(r.std_dev) : "NA") << ',' << r.seed_count << ',' << r.failed_count
        << '\n';
  }
}

std::vector<AggregateRow> read_aggregate_csv(std::istream& in) {
  std::vector<AggregateRow> rows;
  read_table(in, kAggregateHeader, [&](const std::vector<std::string>& f, std::size_t row) {
    if (f.size() != 12) throw ParseError("expected 12 fields", row, f.size());
    AggregateRow r;
    r.dataset = f[0];
    r.affinity = f[1];
    r.algorithm = algorithm_from_fields(f[2], parse_optional(f[3], row, 4), parse_optional(f[4], row, 5),
                                        parse_optional(f[5], row, 6), row);
    r.label_fraction = parse_number(f[6], row, 7);
    r.noise_rate = parse_number(f[7], row, 8);
    r.mean = parse_optional(f[8], row, 9);
    r.std_dev = parse_optional(f[9], row, 10).value_or(0.0);
    r.seed_count = parse_int(f[10], row, 11);
    r.failed_count = parse_int(f[11], row, 12);
    if (r.std_dev < 0.0) throw ParseError("negative standard deviation", row, 10);
    rows.push_back(std::move(r));
  });
  return rows;
}

void write_markdown(const std::vector<AggregateRow>& rows, std::ostream& out) {
  require_rows(rows);
  const auto dbl_desc = [](double a, double b) { return a > b; };
  const auto dbl_asc = [](double a, double b) { return a < b; };
  bool first = true;
  for (const auto& [dataset, affinity] : panels_of(rows)) {
    std::vector<const AggregateRow*> group;
    std::vector<double> fractions, rates;
    std::vector<AlgorithmSpec> algorithms;
    for (const auto& r : rows) {
      if (r.dataset != dataset || r.affinity != affinity) continue;
      group.push_back(&r);
      fractions.push_back(r.label_fraction);
      rates.push_back(r.noise_rate);
      algorithms.push_back(r.algorithm);
    }
    fractions = distinct(fractions, dbl_desc);
    rates = distinct(rates, dbl_asc);
    algorithms = distinct(algorithms, algorithm_less);

    if (!first) out << '\n';
    first = false;
    out << "### " << dataset << ", " << affinity << "\n\n";
    out << "| Algorithm | α | μ | p | Noise |";
    for (const double f : fractions) out << " Acc. (" << percent(f) << " labeled) |";
    out << "\n|---|---|---|---|---|";
    for (std::size_t i = 0; i < fractions.size(); ++i) out << "---|";
    out << '\n';
    const auto hyper = [](const std::optional<double>& v) { return v ? table_number(*v) : std::string("---"); };
    for (const double rate : rates) {
      for (const auto& alg : algorithms) {
        out << "| " << alg.name() << " | " << hyper(alg.alpha) << " | " << hyper(alg.mu) << " | "
            << hyper(alg.p) << " | " << percent(rate) << " |";
        for (const double f : fractions) {
          const auto it = std::ranges::find_if(group, [&](const AggregateRow* r) {
            return r->label_fraction == f && r->noise_rate == rate && r->algorithm == alg;
          });
          std::string cell = "---";
          if (it != group.end()) {
            cell = (*it)->mean ? table_number(*(*it)->mean) + "±" + table_number((*it)->std_dev) : "NA";
          }
          out << ' ' << cell << " |";
        }
        out << '\n';
      }
    }
  }
}

void write_svg(const std::vector<AggregateRow>& rows, std::ostream& out) {
  require_rows(rows);
  const auto panels = panels_of(rows);
  std::vector<double> fractions, rates;
  std::vector<AlgorithmSpec> algorithms;
  for (const auto& r : rows) {
    fractions.push_back(r.label_fraction);
    rates.push_back(r.noise_rate);
    algorithms.push_back(r.algorithm);
  }
  fractions = distinct(fractions, [](double a, double b) { return a > b; });
  rates = distinct(rates, [](double a, double b) { return a < b; });
  algorithms = distinct(algorithms, algorithm_less);

  constexpr double kPanelW = 260, kPanelH = 200, kMargin = 40, kLegendW = 170;
  const double width = kMargin + static_cast<double>(fractions.size()) * (kPanelW + kMargin) + kLegendW;
  const double height = kMargin + static_cast<double>(panels.size()) * (kPanelH + 2 * kMargin);
  static constexpr const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  const double rate_max = std::max(rates.back(), 1e-12);
  const double rate_min = rates.front();

  const auto fmt = [](double v) { return table_number(v); };
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t pi = 0; pi < panels.size(); ++pi) {
    for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
      const double x0 = kMargin + static_cast<double>(fi) * (kPanelW + kMargin);
      const double y0 = kMargin + static_cast<double>(pi) * (kPanelH + 2 * kMargin);
      const auto sx = [&](double rate) {
        return rate_max == rate_min ? x0 + kPanelW / 2 : x0 + (rate - rate_min) / (rate_max - rate_min) * kPanelW;
      };
      const auto sy = [&](double acc) { return y0 + (1.0 - std::clamp(acc, 0.0, 1.0)) * kPanelH; };
      out << "<g>\n<text x=\"" << fmt(x0) << "\" y=\"" << fmt(y0 - 8) << "\">"
          << xml_escape(panels[pi].first) << ", " << percent(fractions[fi]) << " labeled</text>\n";
      out << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y0) << "\" width=\"" << fmt(kPanelW)
          << "\" height=\"" << fmt(kPanelH) << "\" fill=\"none\" stroke=\"#444\"/>\n";
      for (const double tick : {0.0, 0.5, 1.0}) {
        out << "<text x=\"" << fmt(x0 - 4) << "\" y=\"" << fmt(sy(tick) + 4) << "\" text-anchor=\"end\">"
            << fmt(tick) << "</text>\n";
      }
      for (const double rate : rates) {
        out << "<text x=\"" << fmt(sx(rate)) << "\" y=\"" << fmt(y0 + kPanelH + 14)
            << "\" text-anchor=\"middle\">" << percent(rate) << "</text>\n";
      }
      for (std::size_t ai = 0; ai < algorithms.size(); ++ai) {
        const char* color = kColors[ai % std::size(kColors)];
        std::string points;
        for (const double rate : rates) {
          const auto it = std::ranges::find_if(rows, [&](const AggregateRow& r) {
            return r.dataset == panels[pi].first && r.affinity == panels[pi].second &&
                   r.label_fraction == fractions[fi] && r.noise_rate == rate && r.algorithm == algorithms[ai];
          });
          if (it == rows.end() || !it->mean) continue;
          const double x = sx(rate);
          points += fmt(x) + "," + fmt(sy(*it->mean)) + " ";
          out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(sy(*it->mean - it->std_dev)) << "\" x2=\""
              << fmt(x) << "\" y2=\"" << fmt(sy(*it->mean + it->std_dev)) << "\" stroke=\"" << color
              << "\"/>\n";
        }
        if (!points.empty()) {
          points.pop_back();
          out << "<polyline points=\"" << points << "\" fill=\"none\" stroke=\"" << color << "\"/>\n";
        }
      }
      out << "</g>\n";
    }
  }
  const double lx = width - kLegendW + 10;
  for (std::size_t ai = 0; ai < algorithms.size(); ++ai) {
    const double y = kMargin + 14.0 * static_cast<double>(ai);
    out << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(lx + 20) << "\" y2=\""
        << fmt(y) << "\" stroke=\"" << kColors[ai % std::size(kColors)] << "\"/>\n";
    out << "<text x=\"" << fmt(lx + 26) << "\" y=\"" << fmt(y + 4) << "\">" << xml_escape(algorithms[ai].label())
        << "</text>\n";
  }
  out << "</svg>\n";
}

void emit_report(const std::vector<AggregateRow>& rows, ReportFormat format, const std::filesystem::path& path) {
  require_rows(rows);
  std::ostringstream buffer;
  switch (format) {
    case ReportFormat::kCsv: write_aggregate_csv(rows, buffer); break;
    case ReportFormat::kMarkdown: write_markdown(rows, buffer); break;
    case ReportFormat::kSvg: write_svg(rows, buffer); break;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << buffer.str();
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace gssl
