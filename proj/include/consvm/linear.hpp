#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "consvm/dataset.hpp"
#include "consvm/errors.hpp"

namespace consvm {

using WeightVector = Eigen::VectorXd;

// w'x over the sparse features of x. Requires max feature index <= dim(w).
inline double dot(const WeightVector& w, const LabeledExample& x) {
  if (x.max_index() > w.size()) {
    throw contract_violation("dot: example index exceeds weight dimension");
  }
  double sum = 0.0;
  for (const Feature& f : x.features) sum += w[f.index - 1] * f.value;
  return sum;
}

inline double squared_norm(const LabeledExample& x) {
  double sum = 0.0;
  for (const Feature& f : x.features) sum += f.value * f.value;
  return sum;
}

// Mean hinge loss (1/n) * sum_i max(0, 1 - y_i w'x_i); 0 for an empty set.
inline double hinge_loss(const WeightVector& w, const LabeledDataset& dataset) {
  if (dataset.dimension > w.size()) {
    throw contract_violation("hinge_loss: dataset dimension exceeds weights");
  }
  if (dataset.empty()) return 0.0;
  double sum = 0.0;
  for (const LabeledExample& x : dataset.examples) {
    sum += std::max(0.0, 1.0 - x.label * dot(w, x));
  }
  return sum / static_cast<double>(dataset.size());
}

// Regularized objective lambda*||w||^2 + mean hinge loss.
inline double objective(const WeightVector& w, const LabeledDataset& dataset,
                        double lambda) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("objective: lambda must be positive");
  }
  return lambda * w.squaredNorm() + hinge_loss(w, dataset);
}

// sign(w'x); the tie w'x = 0 resolves to +1.
inline int predict(const WeightVector& w, const LabeledExample& x) {
  return dot(w, x) >= 0.0 ? 1 : -1;
}

// Fraction of examples with predict(w, x) == y.
inline double accuracy(const WeightVector& w, const LabeledDataset& dataset) {
  if (dataset.empty()) {
    throw std::invalid_argument("accuracy: dataset is empty");
  }
  std::size_t correct = 0;
  for (const LabeledExample& x : dataset.examples) {
    if (predict(w, x) == x.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

}  // namespace consvm
