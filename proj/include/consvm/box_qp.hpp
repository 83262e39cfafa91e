#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "consvm/dataset.hpp"
#include "consvm/errors.hpp"
#include "consvm/linear.hpp"
#include "consvm/rng.hpp"

namespace consvm {

// Dual coordinate ascent for the box-constrained concave quadratic
//
//     maximize   b'nu - (1/(2 rho)) ||A' nu||^2
//     subject to 0 <= nu_l <= upper,
//
// maintaining t = A' nu incrementally. Rows of A are abstracted behind a
// Rows policy so the same loop serves sparse SVM duals and dense hinge
// proximal subproblems:
//
//   int count()                                  number of rows L
//   int dim()                                    length of t
//   double dot(l, t)                             a_l ' t
//   void axpy(l, coef, t)                        t += coef * a_l
//   double squared_norm(l)                       ||a_l||^2
//
// One epoch visits all coordinates in a fresh random permutation. The
// stop test compares the caller-supplied primal value against the dual
// value; both must be expressed in the same units as `tolerance`.

struct BoxQpOptions {
  double upper = 1.0;
  double rho = 1.0;
  double tolerance = 1e-6;
  int max_epochs = 1000;
  std::uint64_t seed = 0;
};

struct BoxQpResult {
  Eigen::VectorXd nu;  // duals, clipped into [0, upper]
  Eigen::VectorXd t;   // A' nu at exit
  double dual_objective = 0.0;
  double primal_objective = 0.0;
  double gap = 0.0;
  int epochs = 0;
  bool converged = false;
};

template <typename Rows, typename PrimalFn>
BoxQpResult box_qp_maximize(const Rows& rows, const Eigen::VectorXd& linear,
                            const BoxQpOptions& options, PrimalFn&& primal_of_t,
                            Eigen::VectorXd warm_start = Eigen::VectorXd()) {
  const int count = rows.count();
  if (linear.size() != count) {
    throw contract_violation("box_qp: linear term length mismatch");
  }
  if (!(options.upper > 0.0) || !(options.rho > 0.0)) {
    throw std::invalid_argument("box_qp: upper and rho must be positive");
  }

  BoxQpResult result;
  result.t = Eigen::VectorXd::Zero(rows.dim());
  if (warm_start.size() == count) {
    result.nu = warm_start.cwiseMax(0.0).cwiseMin(options.upper);
    for (int l = 0; l < count; ++l) {
      if (result.nu[l] != 0.0) rows.axpy(l, result.nu[l], result.t);
    }
  } else {
    result.nu = Eigen::VectorXd::Zero(count);
  }

  std::vector<std::int32_t> order(static_cast<std::size_t>(count));
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 rng(options.seed);

  const double inv_rho = 1.0 / options.rho;
  for (int epoch = 1; epoch <= options.max_epochs; ++epoch) {
    fisher_yates_shuffle(order, rng);
    for (const std::int32_t l : order) {
      const double q = rows.squared_norm(l) * inv_rho;
      if (q <= 0.0) {
        // Zero row: the dual is linear in nu_l, so pin it to the
        // maximizing box face.
        result.nu[l] = linear[l] > 0.0 ? options.upper : 0.0;
        continue;
      }
      const double g = linear[l] - rows.dot(l, result.t) * inv_rho;
      const double nu_new =
          std::min(std::max(result.nu[l] + g / q, 0.0), options.upper);
      const double delta = nu_new - result.nu[l];
      if (delta != 0.0) {
        rows.axpy(l, delta, result.t);
        result.nu[l] = nu_new;
      }
    }
    result.epochs = epoch;
    result.dual_objective =
        linear.dot(result.nu) - result.t.squaredNorm() * (0.5 * inv_rho);
    result.primal_objective = primal_of_t(result.t, result.nu);
    result.gap = result.primal_objective - result.dual_objective;
    if (result.gap <= options.tolerance) {
      result.converged = true;
      break;
    }
  }
  return result;
}

// Rows of a dense matrix.
class DenseRows {
 public:
  explicit DenseRows(const Eigen::MatrixXd& matrix)
      : matrix_(matrix), squared_norms_(matrix.rows()) {
    for (Eigen::Index l = 0; l < matrix.rows(); ++l) {
      squared_norms_[l] = matrix.row(l).squaredNorm();
    }
  }

  int count() const { return static_cast<int>(matrix_.rows()); }
  int dim() const { return static_cast<int>(matrix_.cols()); }
  double dot(int l, const Eigen::VectorXd& t) const {
    return matrix_.row(l).dot(t);
  }
  void axpy(int l, double coef, Eigen::VectorXd& t) const {
    t += coef * matrix_.row(l).transpose();
  }
  double squared_norm(int l) const { return squared_norms_[l]; }

 private:
  const Eigen::MatrixXd& matrix_;
  Eigen::VectorXd squared_norms_;
};

// Rows c_i * x_i over a subset of a sparse dataset, where c_i is
// sign * y_i. sign = +1 yields SVM rows y_i x_i; sign = -1 yields the
// hinge-proximal rows -y_i x_i.
class SparseSignedRows {
 public:
  SparseSignedRows(const LabeledDataset& dataset,
                   const std::vector<std::int32_t>& indices, double sign)
      : dataset_(dataset), indices_(indices), sign_(sign),
        squared_norms_(indices.size()) {
    for (std::size_t l = 0; l < indices.size(); ++l) {
      squared_norms_[l] = consvm::squared_norm(dataset.examples[indices[l]]);
    }
  }

  int count() const { return static_cast<int>(indices_.size()); }
  int dim() const { return dataset_.dimension; }

  double dot(int l, const Eigen::VectorXd& t) const {
    const LabeledExample& x = example(l);
    double sum = 0.0;
    for (const Feature& f : x.features) sum += t[f.index - 1] * f.value;
    return sum * coefficient(l);
  }

  void axpy(int l, double coef, Eigen::VectorXd& t) const {
    const LabeledExample& x = example(l);
    const double c = coef * coefficient(l);
    for (const Feature& f : x.features) t[f.index - 1] += c * f.value;
  }

  double squared_norm(int l) const {
    return squared_norms_[static_cast<std::size_t>(l)];
  }

  const LabeledExample& example(int l) const {
    return dataset_.examples[indices_[static_cast<std::size_t>(l)]];
  }
  double coefficient(int l) const { return sign_ * example(l).label; }

 private:
  const LabeledDataset& dataset_;
  const std::vector<std::int32_t>& indices_;
  double sign_;
  std::vector<double> squared_norms_;
};

}  // namespace consvm
