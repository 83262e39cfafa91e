#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "consvm/errors.hpp"
#include "consvm/rng.hpp"

namespace consvm {

// One sparse entry; feature indices are 1-based as in the LIBSVM format.
struct Feature {
  std::int32_t index;
  double value;

  friend bool operator==(const Feature& a, const Feature& b) {
    return a.index == b.index && a.value == b.value;
  }
};

// A labeled sparse example. Features are kept sorted by strictly
// increasing index; the label is +1 or -1.
struct LabeledExample {
  std::vector<Feature> features;
  int label = 1;

  std::int32_t max_index() const {
    return features.empty() ? 0 : features.back().index;
  }

  friend bool operator==(const LabeledExample& a, const LabeledExample& b) {
    return a.label == b.label && a.features == b.features;
  }
};

// An ordered collection of examples plus the feature-slot count d. After
// bias augmentation the last slot (index d) holds the constant 1 and
// `augmented` is set.
struct LabeledDataset {
  std::vector<LabeledExample> examples;
  std::int32_t dimension = 0;
  bool augmented = false;

  std::size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }
};

// An M-way split of a parent dataset: M disjoint index lists of equal
// length L. Indices the floor division could not place are dropped and
// counted.
struct Partitioning {
  std::vector<std::vector<std::int32_t>> partitions;
  std::uint64_t seed = 0;
  std::int32_t dropped = 0;

  std::int32_t group_count() const {
    return static_cast<std::int32_t>(partitions.size());
  }
  std::int32_t group_size() const {
    return partitions.empty() ? 0
                              : static_cast<std::int32_t>(partitions[0].size());
  }
};

namespace detail {

inline bool parse_double(std::string_view token, double& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

inline bool parse_int(std::string_view token, std::int32_t& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

// Shortest decimal form that round-trips to the same double.
inline std::string format_shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace detail

// Parses LIBSVM text: one example per nonempty line,
// `<label> <idx>:<val> ...` with strictly increasing indices. Labels
// "+1", "1" and "-1" are accepted; anything after '#' is a comment.
// Dimension is the maximum index seen.
inline LabeledDataset parse_libsvm(std::istream& input) {
  LabeledDataset out;
  std::string line;
  long line_number = 0;
  while (std::getline(input, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }

    std::string_view rest(line);
    auto next_token = [&rest]() -> std::string_view {
      const auto begin = rest.find_first_not_of(" \t");
      if (begin == std::string_view::npos) return {};
      auto end = rest.find_first_of(" \t", begin);
      if (end == std::string_view::npos) end = rest.size();
      std::string_view token = rest.substr(begin, end - begin);
      rest.remove_prefix(end);
      return token;
    };

    const std::string_view label_token = next_token();
    if (label_token.empty()) continue;  // blank or comment-only line

    LabeledExample example;
    if (label_token == "+1" || label_token == "1") {
      example.label = 1;
    } else if (label_token == "-1") {
      example.label = -1;
    } else {
      throw parse_error(line_number,
                        "label '" + std::string(label_token) +
                            "' is not one of +1, 1, -1");
    }

    std::int32_t previous_index = 0;
    for (std::string_view token = next_token(); !token.empty();
         token = next_token()) {
      const auto colon = token.find(':');
      if (colon == std::string_view::npos) {
        throw parse_error(line_number,
                          "expected idx:val, got '" + std::string(token) + "'");
      }
      std::int32_t index = 0;
      double value = 0.0;
      if (!detail::parse_int(token.substr(0, colon), index) || index <= 0) {
        throw parse_error(line_number, "bad feature index in '" +
                                           std::string(token) + "'");
      }
      if (!detail::parse_double(token.substr(colon + 1), value)) {
        throw parse_error(line_number, "bad feature value in '" +
                                           std::string(token) + "'");
      }
      if (index <= previous_index) {
        throw parse_error(line_number,
                          "feature indices must be strictly increasing");
      }
      previous_index = index;
      example.features.push_back({index, value});
    }

    out.dimension = std::max(out.dimension, example.max_index());
    out.examples.push_back(std::move(example));
  }
  return out;
}

inline LabeledDataset parse_libsvm(std::string_view text) {
  std::istringstream stream{std::string(text)};
  return parse_libsvm(stream);
}

// Emits `%+d idx:val ...` lines with values in shortest round-trip form.
inline void serialize_libsvm(const LabeledDataset& dataset,
                             std::ostream& output) {
  for (const LabeledExample& example : dataset.examples) {
    output << (example.label > 0 ? "+1" : "-1");
    for (const Feature& f : example.features) {
      output << ' ' << f.index << ':' << detail::format_shortest(f.value);
    }
    output << '\n';
  }
}

inline std::string serialize_libsvm(const LabeledDataset& dataset) {
  std::ostringstream stream;
  serialize_libsvm(dataset, stream);
  return stream.str();
}

// Appends the constant bias slot: dimension grows by one and every
// example gains feature (d+1) -> 1.
inline LabeledDataset augment_bias(const LabeledDataset& dataset) {
  if (dataset.augmented) {
    throw contract_violation("dataset is already bias-augmented");
  }
  LabeledDataset out = dataset;
  out.dimension = dataset.dimension + 1;
  out.augmented = true;
  for (LabeledExample& example : out.examples) {
    example.features.push_back({out.dimension, 1.0});
  }
  return out;
}

// Deterministic M-way split: Fisher-Yates shuffle of [0, n) seeded with
// `seed`, then M consecutive blocks of L = floor(n/M); the n - M*L tail
// indices are dropped and reported.
inline Partitioning partition(const LabeledDataset& dataset, std::int32_t m,
                              std::uint64_t seed) {
  const auto n = static_cast<std::int32_t>(dataset.size());
  if (m < 1) throw std::invalid_argument("partition: M must be >= 1");
  if (m > n) throw std::invalid_argument("partition: M exceeds dataset size");

  std::vector<std::int32_t> order(static_cast<std::size_t>(n));
  for (std::int32_t i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  SplitMix64 rng(seed);
  fisher_yates_shuffle(order, rng);

  const std::int32_t group_size = n / m;
  Partitioning out;
  out.seed = seed;
  out.dropped = n - m * group_size;
  out.partitions.resize(static_cast<std::size_t>(m));
  for (std::int32_t g = 0; g < m; ++g) {
    auto& list = out.partitions[static_cast<std::size_t>(g)];
    list.assign(order.begin() + g * group_size,
                order.begin() + (g + 1) * group_size);
  }
  return out;
}

// Fixed parameters of the 2-D three-blob toy distribution: one blue blob
// (label -1) and two red blobs (label +1), all isotropic unit variance.
// The upper red blob receives `minority_fraction` of the red mass.
struct ToyMixture {
  static constexpr double kBlueMeanX = 0.0, kBlueMeanY = -2.0;
  static constexpr double kRedMajorMeanX = 0.0, kRedMajorMeanY = 0.5;
  static constexpr double kRedMinorMeanX = 0.0, kRedMinorMeanY = 3.0;
};

// Per-blob draw counts of one generator run.
struct ToyMixtureTally {
  std::int32_t blue = 0;
  std::int32_t red_major = 0;
  std::int32_t red_minor = 0;
};

// Draws one example from the toy mixture. Consumes a fixed number of
// draws per call (class coin, blob coin if red, two gaussians).
inline LabeledExample toy_mixture_example(SplitMix64& rng,
                                          double minority_fraction,
                                          ToyMixtureTally* tally = nullptr) {
  LabeledExample example;
  double mean_x = ToyMixture::kBlueMeanX;
  double mean_y = ToyMixture::kBlueMeanY;
  if (rng.next_double() < 0.5) {
    example.label = -1;
    if (tally) ++tally->blue;
  } else {
    example.label = 1;
    const bool minor = rng.next_double() < minority_fraction;
    mean_x = minor ? ToyMixture::kRedMinorMeanX : ToyMixture::kRedMajorMeanX;
    mean_y = minor ? ToyMixture::kRedMinorMeanY : ToyMixture::kRedMajorMeanY;
    if (tally) ++(minor ? tally->red_minor : tally->red_major);
  }
  const double gx = rng.next_gaussian();
  const double gy = rng.next_gaussian();
  example.features = {{1, mean_x + gx}, {2, mean_y + gy}};
  return example;
}

// n samples from the toy mixture; 2-D, not bias-augmented, deterministic
// in `seed`. The optional tally reports how many points each blob
// actually received.
inline LabeledDataset toy_gaussian_mixture(std::int32_t n,
                                           double minority_fraction,
                                           std::uint64_t seed,
                                           ToyMixtureTally* tally = nullptr) {
  if (!(minority_fraction > 0.0 && minority_fraction < 1.0)) {
    throw std::invalid_argument(
        "toy_gaussian_mixture: minority_fraction must lie in (0, 1)");
  }
  if (n < 4) {
    throw std::invalid_argument("toy_gaussian_mixture: n must be >= 4");
  }
  LabeledDataset out;
  out.dimension = 2;
  out.examples.reserve(static_cast<std::size_t>(n));
  SplitMix64 rng(seed);
  for (std::int32_t i = 0; i < n; ++i) {
    out.examples.push_back(
        toy_mixture_example(rng, minority_fraction, tally));
  }
  return out;
}

}  // namespace consvm
