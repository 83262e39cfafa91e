#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "consvm/box_qp.hpp"
#include "consvm/dataset.hpp"
#include "consvm/errors.hpp"
#include "consvm/model_bank.hpp"
#include "consvm/svm.hpp"

namespace consvm {

struct WpaSolution {
  WeightCombination beta;
  Eigen::VectorXd alpha;  // duals over all ML points, in [0, 1/(ML)]
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;
  int epochs = 0;
  bool converged = false;
};

namespace detail {

// Symmetric inverse square root of the (optionally ridged) gram.
inline Eigen::MatrixXd gram_inverse_sqrt(const Eigen::MatrixXd& gram,
                                         double ridge) {
  Eigen::MatrixXd k = gram;
  k.diagonal().array() += ridge;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(k);
  if (eigen.info() != Eigen::Success) {
    throw numeric_error("gram eigendecomposition failed");
  }
  const Eigen::VectorXd& values = eigen.eigenvalues();
  if (values.minCoeff() <= 1e-12 * std::abs(values.maxCoeff())) {
    throw singular_gram_error(
        "gram matrix is rank deficient; pass ridge > 0");
  }
  return eigen.eigenvectors() *
         values.cwiseSqrt().cwiseInverse().asDiagonal() *
         eigen.eigenvectors().transpose();
}

}  // namespace detail

// Learns the combination weights beta minimizing
//
//     lambda ||W beta||^2 + (1/(ML)) sum_{m,l} max(0, 1 - y_ml beta'W'x_ml)
//
// over the partitioned sample. Solved in the dual: each point is mapped
// to z = (W'W)^{-1/2} W' x, which turns the problem into a plain SVM dual
// with box 0 <= alpha <= 1/(ML) and quadratic weight 1/(4 lambda); beta
// is recovered from the closed form beta = (1/(2 lambda)) (W'W)^{-1/2} t
// with t = sum alpha y z.
inline WpaSolution solve_wpa_central(const ModelBank& bank,
                                     const LabeledDataset& dataset,
                                     const Partitioning& parts, double lambda,
                                     const SolverSettings& settings,
                                     double ridge = 0.0) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("solve_wpa_central: lambda must be positive");
  }
  if (bank.count() != parts.group_count()) {
    throw contract_violation("solve_wpa_central: bank/partition count mismatch");
  }
  if (bank.dimension() != dataset.dimension) {
    throw contract_violation("solve_wpa_central: bank/dataset dimension mismatch");
  }

  const int group_count = parts.group_count();
  const int group_size = parts.group_size();
  const int n = group_count * group_size;
  if (n == 0) {
    throw std::invalid_argument("solve_wpa_central: empty partitioning");
  }

  const Eigen::MatrixXd inv_sqrt =
      detail::gram_inverse_sqrt(bank.gram(), ridge);

  // Rows y_ml z_ml in fixed (m, l) order.
  Eigen::MatrixXd rows(n, group_count);
  int r = 0;
  for (const auto& indices : parts.partitions) {
    for (const std::int32_t i : indices) {
      const LabeledExample& x = dataset.examples[i];
      Eigen::VectorXd projected = Eigen::VectorXd::Zero(group_count);
      for (const Feature& f : x.features) {
        projected += f.value * bank.columns().row(f.index - 1).transpose();
      }
      rows.row(r++) = (x.label * (inv_sqrt * projected)).transpose();
    }
  }

  const double upper = 1.0 / static_cast<double>(n);
  BoxQpOptions options;
  options.upper = upper;
  options.rho = 2.0 * lambda;
  options.tolerance = settings.tolerance;
  options.max_epochs = settings.max_epochs;
  options.seed = settings.seed;

  const double half_inv_lambda = 1.0 / (2.0 * lambda);
  auto primal = [&](const Eigen::VectorXd& t,
                    const Eigen::VectorXd& /*nu*/) -> double {
    double hinge_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      hinge_sum +=
          std::max(0.0, 1.0 - half_inv_lambda * rows.row(i).dot(t));
    }
    return t.squaredNorm() / (4.0 * lambda) + upper * hinge_sum;
  };

  DenseRows dense(rows);
  BoxQpResult qp = box_qp_maximize(dense, Eigen::VectorXd::Ones(n), options,
                                   primal);

  WpaSolution solution;
  solution.beta = half_inv_lambda * (inv_sqrt * qp.t);
  solution.alpha = std::move(qp.nu);
  solution.primal_objective = qp.primal_objective;
  solution.dual_objective = qp.dual_objective;
  solution.gap = qp.gap;
  solution.epochs = qp.epochs;
  solution.converged = qp.converged;
  return solution;
}

// Objective of the combination problem evaluated directly at beta over
// the partitioned points; agrees with objective(combine(bank, beta), ...)
// when the partitioning covers the whole dataset.
inline double wpa_objective(const ModelBank& bank, const LabeledDataset& dataset,
                            const Partitioning& parts,
                            const WeightCombination& beta, double lambda) {
  const WeightVector w = combine(bank, beta);
  const int n = parts.group_count() * parts.group_size();
  double hinge_sum = 0.0;
  for (const auto& indices : parts.partitions) {
    for (const std::int32_t i : indices) {
      const LabeledExample& x = dataset.examples[i];
      hinge_sum += std::max(0.0, 1.0 - x.label * dot(w, x));
    }
  }
  return lambda * w.squaredNorm() + hinge_sum / static_cast<double>(n);
}

}  // namespace consvm
