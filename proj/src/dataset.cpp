#include "gssl/dataset.hpp"

#include "gssl/error.hpp"
#include "gssl/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string_view>

namespace gssl {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view cell) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (cell.empty() || ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

/// Assigns instances to components in equal shares, in seeded random order.
std::vector<int> balanced_assignment(Rng& rng, Index n, int components) {
  std::vector<int> assignment(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) assignment[i] = static_cast<int>(i % components);
  rng.shuffle(assignment.begin(), assignment.end());
  return assignment;
}

LabeledDataset sample_mixture(const MixtureLayout& layout, Seed seed, std::string name) {
  const Index n = static_cast<Index>(layout.component.size());
  const Index d = layout.means.cols();
  Rng rng(derive_seed(seed, "mixture/noise"));
  LabeledDataset out;
  out.name = std::move(name);
  out.features.resize(n, d);
  out.truth.resize(layout.component.size());
  for (Index i = 0; i < n; ++i) {
    const int comp = layout.component[i];
    out.features.row(i) = layout.means.row(comp) + rng.normal_vector(d).transpose();
    out.truth[i] = layout.component_class[comp];
  }
  out.class_count = 2;
  return out;
}

}  // namespace

void LabeledDataset::validate() const {
  const Index n = features.rows();
  if (n < 2) throw ValidationError("dataset '" + name + "' needs at least 2 instances");
  if (features.cols() < 1) throw ValidationError("dataset '" + name + "' needs at least 1 feature");
  if (static_cast<Index>(truth.size()) != n)
    throw ValidationError("dataset '" + name + "': truth length does not match row count");
  if (class_count < 2) throw ValidationError("dataset '" + name + "' needs at least 2 classes");
  std::vector<Index> counts(static_cast<std::size_t>(class_count), 0);
  for (const int t : truth) {
    if (t < 0 || t >= class_count)
      throw ValidationError("dataset '" + name + "': class index out of range");
    ++counts[t];
  }
  for (int c = 0; c < class_count; ++c) {
    if (counts[c] == 0)
      throw ValidationError("dataset '" + name + "': class " + std::to_string(c) + " is empty");
  }
  if (!features.allFinite())
    throw ValidationError("dataset '" + name + "' contains non-finite feature values");
}

MixtureLayout g241c_layout(Seed seed, Index n, Index d, double separation) {
  if (n < 2 || n % 2 != 0) throw ValidationError("g241c requires an even instance count >= 2");
  if (d < 1) throw ValidationError("g241c requires at least one dimension");
  if (!(separation >= 0.0)) throw ValidationError("g241c separation must be nonnegative");
  Rng direction_rng(derive_seed(seed, "g241c/means"));
  const Vector mean = 0.5 * separation * direction_rng.unit_vector(d);
  MixtureLayout layout;
  layout.means.resize(2, d);
  layout.means.row(0) = mean.transpose();
  layout.means.row(1) = -mean.transpose();
  layout.component_class = {0, 1};
  Rng order_rng(derive_seed(seed, "g241c/order"));
  layout.component = balanced_assignment(order_rng, n, 2);
  return layout;
}

MixtureLayout g241n_layout(Seed seed, Index n, Index d) {
  if (n < 4 || n % 4 != 0) throw ValidationError("g241n requires an instance count divisible by 4");
  if (d < 2) throw ValidationError("g241n requires at least two dimensions");
  Rng direction_rng(derive_seed(seed, "g241n/means"));
  // Orthonormal pair: u separates the two pairs, v separates the classes within a pair.
  const Vector u = direction_rng.unit_vector(d);
  Vector v = direction_rng.normal_vector(d);
  v -= v.dot(u) * u;
  v.normalize();
  const double half_far = 0.5 * kG241nIntraClassDistance;
  const double half_gap = 0.5 * kG241nInterClassGap;
  MixtureLayout layout;
  layout.means.resize(4, d);
  // Component order: A1, B1, A2, B2.
  layout.means.row(0) = (-half_far * u - half_gap * v).transpose();
  layout.means.row(1) = (-half_far * u + half_gap * v).transpose();
  layout.means.row(2) = (half_far * u - half_gap * v).transpose();
  layout.means.row(3) = (half_far * u + half_gap * v).transpose();
  layout.component_class = {0, 1, 0, 1};
  Rng order_rng(derive_seed(seed, "g241n/order"));
  layout.component = balanced_assignment(order_rng, n, 4);
  return layout;
}

LabeledDataset gen_g241c(Seed seed, Index n, Index d, double separation) {
  return sample_mixture(g241c_layout(seed, n, d, separation), derive_seed(seed, "g241c"), "g241c");
}

LabeledDataset gen_g241n(Seed seed, Index n, Index d) {
  return sample_mixture(g241n_layout(seed, n, d), derive_seed(seed, "g241n"), "g241n");
}

Matrix digit1_latent(Seed seed, Index n) {
  Rng rng(derive_seed(seed, "digit1/latent"));
  Matrix latent(n, kDigit1LatentDim);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < kDigit1LatentDim; ++j) latent(i, j) = rng.uniform();
  return latent;
}

LabeledDataset gen_digit1_like(Seed seed, Index n, Index d) {
  if (n < 4) throw ValidationError("digit1 surrogate requires at least 4 instances");
  if (d < 6) throw ValidationError("digit1 surrogate requires at least 6 dimensions");
  constexpr int kHarmonics = 3;
  constexpr Index kFeatures = 2 * kHarmonics * kDigit1LatentDim;
  // The class-bearing coordinate is stretched so its direction dominates local geometry.
  constexpr double kClassAxisGain = 2.0;

  const Matrix latent = digit1_latent(seed, n);
  Rng map_rng(derive_seed(seed, "digit1/map"));
  Matrix embedding(d, kFeatures);
  for (Index r = 0; r < d; ++r)
    for (Index c = 0; c < kFeatures; ++c) embedding(r, c) = map_rng.normal();
  embedding /= std::sqrt(static_cast<double>(kFeatures));

  Rng noise_rng(derive_seed(seed, "digit1/noise"));
  LabeledDataset out;
  out.name = "digit1";
  out.class_count = 2;
  out.features.resize(n, d);
  out.truth.resize(static_cast<std::size_t>(n));
  Vector trig(kFeatures);
  for (Index i = 0; i < n; ++i) {
    Index f = 0;
    for (Index j = 0; j < kDigit1LatentDim; ++j) {
      const double gain = j == 0 ? kClassAxisGain : 1.0;
      for (int k = 1; k <= kHarmonics; ++k) {
        const double phase = std::numbers::pi * k * latent(i, j);
        trig[f++] = gain * std::sin(phase) / k;
        trig[f++] = gain * std::cos(phase) / k;
      }
    }
    out.features.row(i) = (embedding * trig).transpose();
    for (Index c = 0; c < d; ++c) out.features(i, c) += kDigit1NoiseSigma * noise_rng.normal();
    out.truth[i] = digit1_class(latent(i, 0));
  }
  // Tiny n can leave a class empty; the invariant demands both.
  if (std::ranges::count(out.truth, 0) == 0 || std::ranges::count(out.truth, 1) == 0)
    throw ValidationError("digit1 surrogate: seed produced a single class; increase n");
  return out;
}

LabeledDataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");

  std::vector<std::vector<double>> rows;
  std::vector<double> raw_labels;
  std::size_t width = 0;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (trim(view).empty()) continue;
    const auto cells = split(view);
    std::vector<double> values;
    values.reserve(cells.size());
    std::optional<std::size_t> bad_column;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto value = parse_double(cells[c]);
      if (!value) {
        bad_column = c;
        break;
      }
      values.push_back(*value);
    }
    if (first_content) {
      first_content = false;
      if (bad_column) {
        width = cells.size();  // header row
        continue;
      }
    }
    if (bad_column)
      throw ParseError("non-numeric cell '" + std::string(trim(cells[*bad_column])) + "'", line_no,
                       *bad_column + 1);
    if (width == 0) width = cells.size();
    if (cells.size() != width)
      throw ParseError("expected " + std::to_string(width) + " columns, found " +
                           std::to_string(cells.size()),
                       line_no, std::min(cells.size(), width) + 1);
    if (width < 2) throw ParseError("need at least one feature column and a class column", line_no, 1);
    for (std::size_t c = 0; c < values.size(); ++c) {
      if (!std::isfinite(values[c]))
        throw ParseError("non-finite cell '" + std::string(trim(cells[c])) + "'", line_no, c + 1);
    }
    const double label = values.back();
    if (label != std::floor(label))
      throw ParseError("class label must be an integer", line_no, width);
    raw_labels.push_back(label);
    values.pop_back();
    rows.push_back(std::move(values));
  }

  std::map<double, int> dense;
  for (const double label : raw_labels) dense.emplace(label, 0);
  int next = 0;
  for (auto& [label, index] : dense) index = next++;

  LabeledDataset out;
  out.name = path.stem().string();
  out.class_count = static_cast<int>(dense.size());
  if (rows.empty()) throw ValidationError("'" + path.string() + "' contains no data rows");
  out.features.resize(static_cast<Index>(rows.size()), static_cast<Index>(width - 1));
  out.truth.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c + 1 < width; ++c) out.features(r, c) = rows[r][c];
    out.truth.push_back(dense.at(raw_labels[r]));
  }
  if (out.class_count < 2)
    throw ValidationError("'" + path.string() + "' has a single class; at least two are required");
  out.validate();
  return out;
}

void save_csv(const LabeledDataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  std::string buffer;
  for (Index c = 0; c < dataset.dimension(); ++c) buffer += "f" + std::to_string(c) + ",";
  buffer += "class\n";
  char number[64];
  for (Index i = 0; i < dataset.size(); ++i) {
    for (Index c = 0; c < dataset.dimension(); ++c) {
      const auto [end, ec] = std::to_chars(number, number + sizeof number, dataset.features(i, c));
      buffer.append(number, end);
      buffer += ',';
    }
    buffer += std::to_string(dataset.truth[i]);
    buffer += '\n';
  }
  out << buffer;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace gssl
