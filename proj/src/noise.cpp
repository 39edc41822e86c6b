#include "gssl/noise.hpp"

#include "gssl/error.hpp"
#include "gssl/random.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

namespace gssl {
namespace {

constexpr int kMaxSamplingAttempts = 10000;

}  // namespace

Index round_half_up(double x) {
  return static_cast<Index>(std::floor(x + 0.5 + 1e-9));
}

void NoiseSpec::validate(Index n, int class_count) const {
  if (!(label_fraction > 0.0 && label_fraction <= 1.0))
    throw ValidationError("label fraction must lie in (0, 1]");
  if (!(noise_rate >= 0.0 && noise_rate < 1.0)) throw ValidationError("noise rate must lie in [0, 1)");
  if (round_half_up(label_fraction * static_cast<double>(n)) < class_count)
    throw ValidationError("label fraction " + std::to_string(label_fraction) + " of " +
                          std::to_string(n) + " instances cannot cover " +
                          std::to_string(class_count) + " classes");
}

LabelState sample_labeled(const NoiseSpec& spec, const LabeledDataset& dataset) {
  const Index n = dataset.size();
  const int c = dataset.class_count;
  spec.validate(n, c);
  const Index count = round_half_up(spec.label_fraction * static_cast<double>(n));
  const Seed stream = derive_seed(spec.seed, "sampling");

  std::vector<Index> order(static_cast<std::size_t>(n));
  for (int attempt = 0; attempt < kMaxSamplingAttempts; ++attempt) {
    Rng rng(derive_seed(stream, static_cast<std::uint64_t>(attempt)));
    std::iota(order.begin(), order.end(), Index{0});
    // Partial Fisher-Yates: the first `count` slots form the sample.
    for (Index i = 0; i < count; ++i) {
      const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - i)));
      std::swap(order[i], order[j]);
    }
    std::vector<Index> chosen(order.begin(), order.begin() + count);
    std::vector<bool> seen(static_cast<std::size_t>(c), false);
    for (const Index i : chosen) seen[dataset.truth[i]] = true;
    if (std::ranges::all_of(seen, [](bool b) { return b; })) {
      std::ranges::sort(chosen);
      return make_label_state(dataset.truth, c, chosen);
    }
  }
  throw ValidationError("could not draw a labeled set covering every class");
}

LabelState inject_noise(const NoiseSpec& spec, const LabelState& state, const ClassVector& truth) {
  if (static_cast<Index>(truth.size()) != state.size())
    throw ValidationError("inject_noise: truth length does not match state");
  state.validate();
  const int c = state.class_count;
  if (c > 2 && !spec.multiclass_flips)
    throw ValidationError("binary flip noise needs exactly 2 classes; enable multiclass flips for " +
                          std::to_string(c));
  if (!(spec.noise_rate >= 0.0 && spec.noise_rate < 1.0))
    throw ValidationError("noise rate must lie in [0, 1)");

  Seed stream = derive_seed(spec.seed, "corruption");
  if (spec.coupling == NoiseCoupling::kIndependent)
    stream = derive_seed(stream, std::bit_cast<std::uint64_t>(spec.noise_rate));

  LabelState out = state;
  for (int cls = 0; cls < c; ++cls) {
    std::vector<Index> members;
    for (Index i = 0; i < state.size(); ++i) {
      if (state.observed[i] == cls) members.push_back(i);
    }
    const Index flips = round_half_up(spec.noise_rate * static_cast<double>(members.size()));
    Rng rng(derive_seed(stream, static_cast<std::uint64_t>(cls)));
    rng.shuffle(members.begin(), members.end());
    for (Index k = 0; k < flips; ++k) {
      const Index i = members[k];
      int target = 1 - cls;
      if (c > 2) {
        target = static_cast<int>(rng.below(static_cast<std::uint64_t>(c - 1)));
        if (target >= cls) ++target;
      }
      out.observed[i] = target;
    }
  }
  // Corrupted means the observed class disagrees with the clean one.
  std::vector<Index> record;
  for (Index i = 0; i < out.size(); ++i) {
    if (out.observed[i] && *out.observed[i] != truth[i]) record.push_back(i);
  }
  out.flip_record = std::move(record);
  return out;
}

}  // namespace gssl
