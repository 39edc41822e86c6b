#include "doctest.h"
#include "gssl/random.hpp"

#include <cmath>
#include <set>

using namespace gssl;

TEST_CASE("substream seeds differ by tag and root") {
  CHECK(derive_seed(1, "sampling") != derive_seed(1, "corruption"));
  CHECK(derive_seed(1, "sampling") != derive_seed(2, "sampling"));
  CHECK(derive_seed(1, std::uint64_t{3}) != derive_seed(1, std::uint64_t{4}));
  CHECK(derive_seed(5, "x") == derive_seed(5, "x"));
}

TEST_CASE("generator is reproducible") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.uniform() == b.uniform());
    CHECK(a.normal() == b.normal());
  }
}

TEST_CASE("uniform and bounded draws stay in range") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK((u >= 0.0 && u < 1.0));
    CHECK(rng.below(13) < 13u);
  }
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(rng.below(5));
  CHECK(seen.size() == 5);
}

TEST_CASE("normal variates have unit moments") {
  Rng rng(11);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sq / n - 1.0) < 0.02);
}

TEST_CASE("shuffle is a permutation and unit vectors are normalized") {
  Rng rng(3);
  std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7};
  rng.shuffle(v.begin(), v.end());
  CHECK(std::set<int>(v.begin(), v.end()).size() == 8);
  CHECK(std::abs(rng.unit_vector(241).norm() - 1.0) < 1e-12);
}
