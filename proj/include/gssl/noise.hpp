#pragma once

#include "gssl/algorithms.hpp"
#include "gssl/dataset.hpp"

namespace gssl {

/// How corruption draws relate across noise rates for one seed.
enum class NoiseCoupling {
  /// One corruption stream per seed: the flipped set at a lower rate is a
  /// subset of the flipped set at a higher rate.
  kNested,
  /// The corruption stream also depends on the rate.
  kIndependent
};

struct NoiseSpec {
  Seed seed = 0;
  double label_fraction = 0.1;
  double noise_rate = 0.0;
  NoiseCoupling coupling = NoiseCoupling::kNested;
  /// Allow c > 2 by flipping to a uniformly drawn other class.
  bool multiclass_flips = false;

  void validate(Index n, int class_count) const;
};

/// round(x) with halves rounded up, robust to representation error near .5.
Index round_half_up(double x);

/// Uniformly samples round(fraction * n) instances without replacement,
/// redrawing from a fresh substream until every class holds a label.
LabelState sample_labeled(const NoiseSpec& spec, const LabeledDataset& dataset);

/// Flips round(rate * l_class) labeled instances of each observed class.
LabelState inject_noise(const NoiseSpec& spec, const LabelState& state, const ClassVector& truth);

}  // namespace gssl
