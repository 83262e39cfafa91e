#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "consvm/box_qp.hpp"
#include "consvm/dataset.hpp"
#include "consvm/errors.hpp"
#include "consvm/linear.hpp"

namespace consvm {

struct SolverSettings {
  double lambda = 1e-3;     // regularizer weight
  double tolerance = 1e-6;  // duality-gap stop, in objective units
  int max_epochs = 1000;
  std::uint64_t seed = 0;
};

inline void validate(const SolverSettings& settings) {
  if (!(settings.lambda > 0.0)) {
    throw std::invalid_argument("solver: lambda must be positive");
  }
  if (!(settings.tolerance > 0.0)) {
    throw std::invalid_argument("solver: tolerance must be positive");
  }
  if (settings.max_epochs < 1) {
    throw std::invalid_argument("solver: max_epochs must be >= 1");
  }
}

struct TrainResult {
  WeightVector w;
  Eigen::VectorXd alpha;  // duals in [0, 1/(2 lambda n)]
  double objective = 0.0;
  double gap = 0.0;
  int epochs = 0;
  bool converged = false;
};

namespace detail {

inline void require_finite(const LabeledDataset& dataset,
                           const std::vector<std::int32_t>& indices) {
  for (const std::int32_t i : indices) {
    for (const Feature& f : dataset.examples[i].features) {
      if (!std::isfinite(f.value)) {
        throw numeric_error("training data contains non-finite features");
      }
    }
  }
}

}  // namespace detail

// Trains min_w lambda ||w||^2 + (1/n) sum_i max(0, 1 - y_i w'x_i) over the
// subset selected by `indices`, by dual coordinate descent on
//
//     max  sum_i alpha_i - 1/2 ||sum_i alpha_i y_i x_i||^2,
//     s.t. 0 <= alpha_i <= 1/(2 lambda n),
//
// with w = sum_i alpha_i y_i x_i. Coordinates are visited in a fresh
// random permutation each epoch; the solver stops once the duality gap of
// the original objective drops below settings.tolerance.
inline TrainResult train_linear_svm_detailed(
    const LabeledDataset& dataset, const std::vector<std::int32_t>& indices,
    const SolverSettings& settings) {
  validate(settings);
  if (indices.empty()) {
    throw std::invalid_argument("train_linear_svm: empty training set");
  }
  detail::require_finite(dataset, indices);

  const auto n = static_cast<double>(indices.size());
  const double lambda = settings.lambda;
  const double upper = 1.0 / (2.0 * lambda * n);

  SparseSignedRows rows(dataset, indices, +1.0);
  BoxQpOptions options;
  options.upper = upper;
  options.rho = 1.0;
  // The core works on the (1/(2 lambda))-scaled problem; rescale the stop
  // tolerance so the certified gap is in original objective units.
  options.tolerance = settings.tolerance / (2.0 * lambda);
  options.max_epochs = settings.max_epochs;
  options.seed = settings.seed;

  auto primal = [&](const Eigen::VectorXd& t,
                    const Eigen::VectorXd& /*nu*/) -> double {
    double hinge_sum = 0.0;
    for (std::size_t l = 0; l < indices.size(); ++l) {
      const LabeledExample& x = dataset.examples[indices[l]];
      double margin = 0.0;
      for (const Feature& f : x.features) margin += t[f.index - 1] * f.value;
      hinge_sum += std::max(0.0, 1.0 - x.label * margin);
    }
    return 0.5 * t.squaredNorm() + upper * hinge_sum;
  };

  BoxQpResult qp = box_qp_maximize(rows, Eigen::VectorXd::Ones(rows.count()),
                                   options, primal);

  TrainResult result;
  result.w = std::move(qp.t);
  result.alpha = std::move(qp.nu);
  result.gap = qp.gap * 2.0 * lambda;
  result.epochs = qp.epochs;
  result.converged = qp.converged;

  double hinge_sum = 0.0;
  for (const std::int32_t i : indices) {
    const LabeledExample& x = dataset.examples[i];
    hinge_sum += std::max(0.0, 1.0 - x.label * dot(result.w, x));
  }
  result.objective = lambda * result.w.squaredNorm() + hinge_sum / n;
  return result;
}

inline TrainResult train_linear_svm_detailed(const LabeledDataset& dataset,
                                             const SolverSettings& settings) {
  std::vector<std::int32_t> all(dataset.size());
  std::iota(all.begin(), all.end(), 0);
  return train_linear_svm_detailed(dataset, all, settings);
}

inline WeightVector train_linear_svm(const LabeledDataset& dataset,
                                     const SolverSettings& settings) {
  return train_linear_svm_detailed(dataset, settings).w;
}

inline WeightVector train_linear_svm(const LabeledDataset& dataset,
                                     const std::vector<std::int32_t>& indices,
                                     const SolverSettings& settings) {
  return train_linear_svm_detailed(dataset, indices, settings).w;
}

}  // namespace consvm
