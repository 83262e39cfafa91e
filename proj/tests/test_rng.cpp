#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <vector>

#include "consvm/rng.hpp"

using consvm::SplitMix64;

TEST_CASE("splitmix64 is deterministic and seed-sensitive") {
  SplitMix64 a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next();
    REQUIRE(va == b.next());
    if (va != c.next()) SUCCEED();
  }
}

TEST_CASE("split streams do not advance the parent") {
  SplitMix64 parent(7);
  const auto before = SplitMix64(7).next();
  SplitMix64 child = parent.split(3);
  REQUIRE(parent.next() == before);
  REQUIRE(child.next() != before);
  // Splitting twice with the same lane gives the same stream.
  REQUIRE(SplitMix64(7).split(3).next() == SplitMix64(7).split(3).next());
  REQUIRE(SplitMix64(7).split(3).next() != SplitMix64(7).split(4).next());
}

TEST_CASE("next_below stays in range and covers values") {
  SplitMix64 rng(123);
  std::vector<int> counts(10, 0);
  for (int i = 0; i < 10000; ++i) {
    const auto v = rng.next_below(10);
    REQUIRE(v < 10);
    ++counts[static_cast<std::size_t>(v)];
  }
  for (const int c : counts) REQUIRE(c > 800);
}

TEST_CASE("fisher yates produces a permutation, deterministically") {
  std::vector<int> values(100);
  std::iota(values.begin(), values.end(), 0);
  SplitMix64 rng(5);
  consvm::fisher_yates_shuffle(values, rng);

  std::vector<int> copy(100);
  std::iota(copy.begin(), copy.end(), 0);
  SplitMix64 rng2(5);
  consvm::fisher_yates_shuffle(copy, rng2);
  REQUIRE(values == copy);

  std::sort(copy.begin(), copy.end());
  for (int i = 0; i < 100; ++i) REQUIRE(copy[static_cast<std::size_t>(i)] == i);
}

TEST_CASE("gaussian draws have roughly standard moments") {
  SplitMix64 rng(99);
  double sum = 0.0, sum_sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double g = rng.next_gaussian();
    sum += g;
    sum_sq += g * g;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  REQUIRE(std::abs(mean) < 0.02);
  REQUIRE(std::abs(var - 1.0) < 0.03);
}
