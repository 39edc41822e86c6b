#pragma once

#include "gssl/types.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace gssl {

/// Derives an independent substream seed from a root seed and a tag.
Seed derive_seed(Seed root, std::string_view tag);
Seed derive_seed(Seed root, std::uint64_t tag);

/// Seeded generator with platform-independent variate transforms.
///
/// The standard distribution classes are implementation-defined, so uniform and
/// normal variates are derived here directly from the 64-bit engine output.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double normal();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  template <typename It>
  void shuffle(It first, It last) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      const auto j = below(i);
      std::iter_swap(first + (i - 1), first + j);
    }
  }

  Vector normal_vector(Index size);
  Vector unit_vector(Index size);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace gssl
