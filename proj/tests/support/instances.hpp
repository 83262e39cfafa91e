#pragma once

// Randomized test-instance generators, all driven by the library RNG so
// test runs are reproducible.

#include <Eigen/Dense>
#include <vector>

#include "consvm/dataset.hpp"
#include "consvm/rng.hpp"

namespace instances {

// Dense gaussian features; labels follow a random hyperplane with a
// fraction of flips so the duals are not degenerate.
inline consvm::LabeledDataset random_dataset(consvm::SplitMix64& rng, int n,
                                             int d, double flip_prob = 0.2) {
  consvm::LabeledDataset out;
  out.dimension = d;
  Eigen::VectorXd plane(d);
  for (int j = 0; j < d; ++j) plane[j] = rng.next_gaussian();
  for (int i = 0; i < n; ++i) {
    consvm::LabeledExample example;
    double margin = 0.0;
    for (int j = 0; j < d; ++j) {
      const double value = rng.next_gaussian();
      example.features.push_back({j + 1, value});
      margin += plane[j] * value;
    }
    example.label = margin >= 0.0 ? 1 : -1;
    if (rng.next_double() < flip_prob) example.label = -example.label;
    out.examples.push_back(std::move(example));
  }
  return out;
}

// Sparse variant: each feature present with probability `density`.
inline consvm::LabeledDataset random_sparse_dataset(consvm::SplitMix64& rng,
                                                    int n, int d,
                                                    double density = 0.5) {
  consvm::LabeledDataset out;
  out.dimension = d;
  for (int i = 0; i < n; ++i) {
    consvm::LabeledExample example;
    for (int j = 0; j < d; ++j) {
      if (rng.next_double() < density) {
        example.features.push_back({j + 1, rng.next_gaussian()});
      }
    }
    example.label = rng.next_double() < 0.5 ? 1 : -1;
    out.examples.push_back(std::move(example));
  }
  return out;
}

inline Eigen::MatrixXd random_matrix(consvm::SplitMix64& rng, int rows,
                                     int cols) {
  Eigen::MatrixXd out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) out(r, c) = rng.next_gaussian();
  }
  return out;
}

inline Eigen::VectorXd random_vector(consvm::SplitMix64& rng, int size) {
  Eigen::VectorXd out(size);
  for (int i = 0; i < size; ++i) out[i] = rng.next_gaussian();
  return out;
}

}  // namespace instances
