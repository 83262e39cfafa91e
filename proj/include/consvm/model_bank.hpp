#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <vector>

#include "consvm/dataset.hpp"
#include "consvm/errors.hpp"
#include "consvm/linear.hpp"

namespace consvm {

using WeightCombination = Eigen::VectorXd;

// The d x M column stack of per-partition weight vectors, with the M x M
// gram computed once at construction. Immutable afterwards, so instances
// are safe to share across threads.
class ModelBank {
 public:
  explicit ModelBank(const std::vector<WeightVector>& models) {
    if (models.empty()) {
      throw std::invalid_argument("ModelBank: no columns");
    }
    const Eigen::Index dim = models.front().size();
    columns_.resize(dim, static_cast<Eigen::Index>(models.size()));
    for (std::size_t m = 0; m < models.size(); ++m) {
      if (models[m].size() != dim) {
        throw contract_violation("ModelBank: ragged column lengths");
      }
      columns_.col(static_cast<Eigen::Index>(m)) = models[m];
    }
    gram_ = columns_.transpose() * columns_;
  }

  ModelBank(Eigen::MatrixXd columns)
      : columns_(std::move(columns)) {
    if (columns_.cols() == 0) {
      throw std::invalid_argument("ModelBank: no columns");
    }
    gram_ = columns_.transpose() * columns_;
  }

  const Eigen::MatrixXd& columns() const { return columns_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  int dimension() const { return static_cast<int>(columns_.rows()); }
  int count() const { return static_cast<int>(columns_.cols()); }

  // Numerical rank of the gram (duplicate columns make it deficient;
  // that is reported, never rejected).
  int gram_rank(double relative_tolerance = 1e-12) const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(gram_);
    const auto& values = eigen.eigenvalues();
    const double cutoff = values.cwiseAbs().maxCoeff() * relative_tolerance;
    int rank = 0;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      if (values[i] > cutoff) ++rank;
    }
    return rank;
  }

 private:
  Eigen::MatrixXd columns_;  // d x M
  Eigen::MatrixXd gram_;     // M x M
};

inline ModelBank build_bank(const std::vector<WeightVector>& models) {
  return ModelBank(models);
}

// Uniform averaging weights (1/M, ..., 1/M).
inline WeightCombination pa_weights(int m) {
  if (m < 1) throw std::invalid_argument("pa_weights: M must be >= 1");
  return WeightCombination::Constant(m, 1.0 / static_cast<double>(m));
}

// The combined model W * beta.
inline WeightVector combine(const ModelBank& bank,
                            const WeightCombination& beta) {
  if (beta.size() != bank.count()) {
    throw contract_violation("combine: beta length != column count");
  }
  return bank.columns() * beta;
}

// Default Cholesky jitter for nearly rank-deficient grams.
inline double default_gram_ridge(const ModelBank& bank) {
  return 1e-10 * bank.gram().trace() / static_cast<double>(bank.count());
}

// Applies H = W (W'W + ridge I)^-1 W' through an M x M solve; the d x d
// projector is never materialized. With ridge = 0 the gram must be
// numerically nonsingular.
class ProjectionOperator {
 public:
  ProjectionOperator(const ModelBank& bank, double ridge = 0.0)
      : bank_(bank) {
    if (ridge < 0.0) {
      throw std::invalid_argument("ProjectionOperator: ridge must be >= 0");
    }
    Eigen::MatrixXd k = bank.gram();
    k.diagonal().array() += ridge;
    llt_.compute(k);
    if (llt_.info() != Eigen::Success) {
      throw singular_gram_error(
          "gram matrix is numerically singular; pass ridge > 0");
    }
    // LLT may succeed on barely indefinite input; reject grams whose
    // conditioning makes the ridge-free solve meaningless.
    if (ridge == 0.0) {
      const Eigen::VectorXd d = llt_.matrixL().toDenseMatrix().diagonal();
      if (d.minCoeff() <= 1e-9 * d.maxCoeff()) {
        throw singular_gram_error(
            "gram matrix is numerically singular; pass ridge > 0");
      }
    }
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
    if (x.size() != bank_.dimension()) {
      throw contract_violation("projection: vector dimension mismatch");
    }
    return bank_.columns() * llt_.solve(bank_.columns().transpose() * x);
  }

  Eigen::VectorXd apply(const LabeledExample& x) const {
    if (x.max_index() > bank_.dimension()) {
      throw contract_violation("projection: example dimension mismatch");
    }
    Eigen::VectorXd projected = Eigen::VectorXd::Zero(bank_.count());
    for (const Feature& f : x.features) {
      projected += f.value * bank_.columns().row(f.index - 1).transpose();
    }
    return bank_.columns() * llt_.solve(projected);
  }

 private:
  const ModelBank& bank_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

inline Eigen::VectorXd projection_apply(const ModelBank& bank,
                                        const LabeledExample& x,
                                        double ridge = 0.0) {
  return ProjectionOperator(bank, ridge).apply(x);
}

}  // namespace consvm
