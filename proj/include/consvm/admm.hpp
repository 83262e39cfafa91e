#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "consvm/box_qp.hpp"
#include "consvm/dataset.hpp"
#include "consvm/errors.hpp"
#include "consvm/linear.hpp"
#include "consvm/model_bank.hpp"
#include "consvm/parallel.hpp"
#include "consvm/rng.hpp"
#include "consvm/svm.hpp"

namespace consvm {

struct AdmmConfig {
  double rho = 1.0;
  double lambda = 1e-3;
  int max_iters = 500;
  std::optional<double> overrelax_alpha;  // absent = plain ADMM
  double residual_stop = 0.0;             // 0 disables the residual stop
  SolverSettings subproblem;              // slave prox tolerance/epochs/seed
  bool unit_loss_scale = false;           // hinge scale 1 instead of 1/(ML)
  bool ones_init = false;                 // all-ones start instead of 1/M
  int threads = 1;
};

inline void validate(const AdmmConfig& config) {
  if (!(config.rho > 0.0)) {
    throw std::invalid_argument("admm: rho must be positive");
  }
  if (!(config.lambda > 0.0)) {
    throw std::invalid_argument("admm: lambda must be positive");
  }
  if (config.max_iters < 1) {
    throw std::invalid_argument("admm: max_iters must be >= 1");
  }
  if (config.overrelax_alpha &&
      !(*config.overrelax_alpha >= 1.0 && *config.overrelax_alpha <= 2.0)) {
    throw std::invalid_argument("admm: overrelax alpha must lie in [1, 2]");
  }
  if (config.residual_stop < 0.0) {
    throw std::invalid_argument("admm: residual_stop must be >= 0");
  }
  if (config.threads < 1) {
    throw std::invalid_argument("admm: threads must be >= 1");
  }
}

struct IterationRecord {
  int iteration = 0;  // 1-based
  double primal_residual = 0.0;
  double objective = 0.0;
  std::optional<double> train_accuracy;
  std::optional<double> test_accuracy;
  std::int64_t bytes_communicated = 0;  // exchange volume of this iteration
  double wall_clock_ms = 0.0;
};

struct HingeProxResult {
  Eigen::VectorXd x;
  Eigen::VectorXd nu;  // duals in [0, scale]
  double gap = 0.0;
  int epochs = 0;
  bool converged = false;
};

// Solves the hinge proximal subproblem
//
//     minimize  scale * sum_l max(0, a_l'x + 1) + (rho/2) ||x - v||^2
//
// in its dual: x(nu) = v - (1/rho) A'nu with nu_l in [0, scale], by
// coordinate ascent to the requested duality gap.
template <typename Rows>
HingeProxResult hinge_prox(const Rows& rows, const Eigen::VectorXd& v,
                           double rho, double scale,
                           const SolverSettings& settings,
                           Eigen::VectorXd warm_start = Eigen::VectorXd()) {
  if (v.size() != rows.dim()) {
    throw contract_violation("hinge_prox: center length mismatch");
  }
  if (!v.allFinite()) {
    throw numeric_error("hinge_prox: non-finite center vector");
  }
  if (!(rho > 0.0) || !(scale > 0.0)) {
    throw std::invalid_argument("hinge_prox: rho and scale must be positive");
  }

  const int count = rows.count();
  Eigen::VectorXd linear(count);
  for (int l = 0; l < count; ++l) {
    linear[l] = rows.dot(l, v) + 1.0;
    if (!std::isfinite(linear[l]) || !std::isfinite(rows.squared_norm(l))) {
      throw numeric_error("hinge_prox: non-finite row data");
    }
  }

  BoxQpOptions options;
  options.upper = scale;
  options.rho = rho;
  options.tolerance = settings.tolerance;
  options.max_epochs = settings.max_epochs;
  options.seed = settings.seed;

  const double inv_rho = 1.0 / rho;
  auto primal = [&](const Eigen::VectorXd& t,
                    const Eigen::VectorXd& /*nu*/) -> double {
    double hinge_sum = 0.0;
    for (int l = 0; l < count; ++l) {
      hinge_sum += std::max(0.0, linear[l] - rows.dot(l, t) * inv_rho);
    }
    return scale * hinge_sum + (0.5 * inv_rho) * t.squaredNorm();
  };

  BoxQpResult qp =
      box_qp_maximize(rows, linear, options, primal, std::move(warm_start));

  HingeProxResult result;
  result.x = v - inv_rho * qp.t;
  result.nu = std::move(qp.nu);
  result.gap = qp.gap;
  result.epochs = qp.epochs;
  result.converged = qp.converged;
  return result;
}

// Slave step of the combination-weight consensus algorithm: the argmin of
// scale * sum_l max(0, (A gamma)_l + 1) + (rho/2) ||gamma - v||^2, with
// v = beta_prev - u_prev.
inline Eigen::VectorXd gamma_update(const Eigen::MatrixXd& a,
                                    const Eigen::VectorXd& v, double rho,
                                    double scale,
                                    const SolverSettings& settings) {
  if (!a.allFinite()) throw numeric_error("gamma_update: non-finite matrix");
  return hinge_prox(DenseRows(a), v, rho, scale, settings).x;
}

// Master step: the exact minimizer of
// lambda ||W beta||^2 + (M rho / 2) ||beta - a||^2, i.e.
// beta = (2 lambda W'W + M rho I)^-1 M rho a, by SPD solve with one
// refinement pass.
inline Eigen::VectorXd beta_update(const Eigen::MatrixXd& gram,
                                   const Eigen::VectorXd& gbar_plus_ubar,
                                   int m, double rho, double lambda) {
  if (gram.rows() != gram.cols() || gram.rows() != gbar_plus_ubar.size()) {
    throw contract_violation("beta_update: dimension mismatch");
  }
  const double mass = static_cast<double>(m) * rho;
  if (lambda == 0.0 || gram.isZero(0.0)) {
    return gbar_plus_ubar;  // pure proximal identity
  }
  Eigen::MatrixXd k = 2.0 * lambda * gram;
  k.diagonal().array() += mass;
  Eigen::LLT<Eigen::MatrixXd> llt(k);
  if (llt.info() != Eigen::Success) {
    throw numeric_error("beta_update: system matrix is not positive definite");
  }
  const Eigen::VectorXd rhs = mass * gbar_plus_ubar;
  Eigen::VectorXd beta = llt.solve(rhs);
  beta += llt.solve(rhs - k * beta);
  return beta;
}

// Norm of the normal-equations residual of beta_update's optimality
// condition; an exact minimizer gives 0.
inline double beta_stationarity(const Eigen::MatrixXd& gram,
                                const Eigen::VectorXd& gbar_plus_ubar, int m,
                                double rho, double lambda,
                                const Eigen::VectorXd& beta) {
  const double mass = static_cast<double>(m) * rho;
  return (2.0 * lambda * (gram * beta) + mass * (beta - gbar_plus_ubar))
      .norm();
}

// Scaled dual ascent: u + (local - consensus). Grouped so that a slave
// already at consensus leaves u untouched bit for bit.
inline Eigen::VectorXd dual_update(const Eigen::VectorXd& u_prev,
                                   const Eigen::VectorXd& local_new,
                                   const Eigen::VectorXd& consensus_new) {
  if (u_prev.size() != local_new.size() ||
      u_prev.size() != consensus_new.size()) {
    throw contract_violation("dual_update: length mismatch");
  }
  return u_prev + (local_new - consensus_new);
}

// Relaxed local iterate alpha*local + (1-alpha)*consensus_prev. alpha = 1
// returns local_new unchanged (bit for bit).
inline Eigen::VectorXd overrelax_step(const Eigen::VectorXd& local_new,
                                      const Eigen::VectorXd& consensus_prev,
                                      double alpha) {
  if (!(alpha >= 1.0 && alpha <= 2.0)) {
    throw std::invalid_argument("overrelax_step: alpha must lie in [1, 2]");
  }
  if (local_new.size() != consensus_prev.size()) {
    throw contract_violation("overrelax_step: length mismatch");
  }
  if (alpha == 1.0) return local_new;
  return alpha * local_new + (1.0 - alpha) * consensus_prev;
}

// Aggregate disagreement sqrt(sum_m ||local_m - consensus||^2).
inline double primal_residual(const std::vector<Eigen::VectorXd>& locals,
                              const Eigen::VectorXd& consensus) {
  double sum = 0.0;
  for (const Eigen::VectorXd& local : locals) {
    if (local.size() != consensus.size()) {
      throw contract_violation("primal_residual: length mismatch");
    }
    sum += (local - consensus).squaredNorm();
  }
  return std::sqrt(sum);
}

// Master step of the full-dimension consensus algorithm:
// z = M rho / (2 lambda + M rho) * (wbar + ubar).
inline Eigen::VectorXd dsvm_z_update(const Eigen::VectorXd& wbar_plus_ubar,
                                     int m, double rho, double lambda) {
  const double mass = static_cast<double>(m) * rho;
  return (mass / (2.0 * lambda + mass)) * wbar_plus_ubar;
}

namespace detail {

// Margins and labels of a point set against the bank columns: row i of
// `products` is x_i'W, so model W*beta scores points as products * beta.
struct BankMargins {
  Eigen::MatrixXd products;  // n x M
  Eigen::VectorXi labels;

  static BankMargins over_partitions(const LabeledDataset& dataset,
                                     const Partitioning& parts,
                                     const ModelBank& bank) {
    BankMargins out;
    const int n = parts.group_count() * parts.group_size();
    out.products.resize(n, bank.count());
    out.labels.resize(n);
    int r = 0;
    for (const auto& indices : parts.partitions) {
      for (const std::int32_t i : indices) {
        fill_row(out, r, dataset.examples[i], bank);
        ++r;
      }
    }
    return out;
  }

  static BankMargins over_dataset(const LabeledDataset& dataset,
                                  const ModelBank& bank) {
    BankMargins out;
    const auto n = static_cast<int>(dataset.size());
    out.products.resize(n, bank.count());
    out.labels.resize(n);
    for (int i = 0; i < n; ++i) {
      fill_row(out, i, dataset.examples[static_cast<std::size_t>(i)], bank);
    }
    return out;
  }

  double mean_hinge(const Eigen::VectorXd& beta) const {
    const Eigen::VectorXd margins = products * beta;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < margins.size(); ++i) {
      sum += std::max(0.0, 1.0 - labels[i] * margins[i]);
    }
    return sum / static_cast<double>(margins.size());
  }

  double accuracy(const Eigen::VectorXd& beta) const {
    const Eigen::VectorXd margins = products * beta;
    Eigen::Index correct = 0;
    for (Eigen::Index i = 0; i < margins.size(); ++i) {
      if ((margins[i] >= 0.0 ? 1 : -1) == labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(margins.size());
  }

 private:
  static void fill_row(BankMargins& out, int row, const LabeledExample& x,
                       const ModelBank& bank) {
    Eigen::VectorXd projected = Eigen::VectorXd::Zero(bank.count());
    for (const Feature& f : x.features) {
      projected += f.value * bank.columns().row(f.index - 1).transpose();
    }
    out.products.row(row) = projected.transpose();
    out.labels[row] = x.label;
  }
};

inline std::uint64_t slave_seed(std::uint64_t base, int slave, int iteration) {
  return SplitMix64(base)
      .split(static_cast<std::uint64_t>(slave))
      .split(static_cast<std::uint64_t>(iteration))
      .next();
}

}  // namespace detail

// Simulated star-topology execution of consensus ADMM over the
// combination weights: M logical slaves solve hinge proximal subproblems
// on their partition, a master recombines, all barrier-synchronized per
// iteration. Slave results are reduced in fixed partition order, so
// traces are identical for every worker-thread count.
class DwpaEngine {
 public:
  DwpaEngine(const LabeledDataset& dataset, const Partitioning& parts,
             const ModelBank& bank, const AdmmConfig& config,
             const LabeledDataset* test_set = nullptr)
      : config_(config),
        group_count_(parts.group_count()),
        gram_(bank.gram()),
        train_margins_(
            detail::BankMargins::over_partitions(dataset, parts, bank)) {
    validate(config);
    if (bank.count() != parts.group_count()) {
      throw contract_violation("dwpa: bank/partition count mismatch");
    }
    if (bank.dimension() != dataset.dimension) {
      throw contract_violation("dwpa: bank/dataset dimension mismatch");
    }
    if (test_set) {
      test_margins_ = detail::BankMargins::over_dataset(*test_set, bank);
    }

    const int m = group_count_;
    const int group_size = parts.group_size();
    scale_ = config.unit_loss_scale
                 ? 1.0
                 : 1.0 / static_cast<double>(m * group_size);

    // A_m = -diag(y_m) X_m W, one L x M block per slave.
    slave_rows_.reserve(static_cast<std::size_t>(m));
    for (const auto& indices : parts.partitions) {
      Eigen::MatrixXd block(group_size, m);
      for (int l = 0; l < group_size; ++l) {
        const LabeledExample& x = dataset.examples[indices[l]];
        Eigen::VectorXd projected = Eigen::VectorXd::Zero(m);
        for (const Feature& f : x.features) {
          projected += f.value * bank.columns().row(f.index - 1).transpose();
        }
        block.row(l) = (-x.label * projected).transpose();
      }
      slave_rows_.push_back(std::move(block));
    }

    const double init = config.ones_init ? 1.0 : 1.0 / static_cast<double>(m);
    beta_ = Eigen::VectorXd::Constant(m, init);
    gammas_.assign(m, beta_);
    duals_.assign(
        m, config.ones_init ? Eigen::VectorXd::Ones(m).eval()
                            : Eigen::VectorXd::Zero(m).eval());
    warm_nu_.assign(m, Eigen::VectorXd());
  }

  void step() {
    const auto started = std::chrono::steady_clock::now();
    const int m = group_count_;
    const Eigen::VectorXd beta_prev = beta_;
    ++iteration_;

    std::vector<Eigen::VectorXd> locals(m);
    parallel_for(m, config_.threads, [&](int slave) {
      SolverSettings settings = config_.subproblem;
      settings.seed =
          detail::slave_seed(config_.subproblem.seed, slave, iteration_);
      HingeProxResult prox = hinge_prox(
          DenseRows(slave_rows_[static_cast<std::size_t>(slave)]),
          Eigen::VectorXd(beta_prev - duals_[static_cast<std::size_t>(slave)]),
          config_.rho, scale_, settings,
          std::move(warm_nu_[static_cast<std::size_t>(slave)]));
      warm_nu_[static_cast<std::size_t>(slave)] = std::move(prox.nu);
      locals[static_cast<std::size_t>(slave)] = std::move(prox.x);
    });

    // The relaxed iterates drive the master and dual updates; the raw
    // prox outputs stay the reported local models.
    std::vector<Eigen::VectorXd> relaxed(m);
    for (int slave = 0; slave < m; ++slave) {
      relaxed[static_cast<std::size_t>(slave)] =
          config_.overrelax_alpha
              ? overrelax_step(locals[static_cast<std::size_t>(slave)],
                               beta_prev, *config_.overrelax_alpha)
              : locals[static_cast<std::size_t>(slave)];
    }

    // Reductions in fixed slave order.
    Eigen::VectorXd local_mean = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd dual_mean = Eigen::VectorXd::Zero(m);
    for (int slave = 0; slave < m; ++slave) {
      local_mean += relaxed[static_cast<std::size_t>(slave)];
      dual_mean += duals_[static_cast<std::size_t>(slave)];
    }
    local_mean /= static_cast<double>(m);
    dual_mean /= static_cast<double>(m);

    const Eigen::VectorXd target = local_mean + dual_mean;
    beta_ = beta_update(gram_, target, m, config_.rho, config_.lambda);
    max_stationarity_ =
        std::max(max_stationarity_,
                 beta_stationarity(gram_, target, m, config_.rho,
                                   config_.lambda, beta_));

    for (int slave = 0; slave < m; ++slave) {
      duals_[static_cast<std::size_t>(slave)] = dual_update(
          duals_[static_cast<std::size_t>(slave)],
          relaxed[static_cast<std::size_t>(slave)], beta_);
    }
    gammas_ = std::move(locals);

    IterationRecord record;
    record.iteration = iteration_;
    record.primal_residual = primal_residual(gammas_, beta_);
    record.objective =
        config_.lambda * beta_.dot(gram_ * beta_) +
        scale_ * static_cast<double>(train_margins_.labels.size()) *
            train_margins_.mean_hinge(beta_);
    record.train_accuracy = train_margins_.accuracy(beta_);
    if (test_margins_) record.test_accuracy = test_margins_->accuracy(beta_);
    record.bytes_communicated = bytes_per_iteration();
    record.wall_clock_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - started)
            .count();
    trace_.push_back(record);
  }

  const WeightCombination& run() {
    while (iteration_ < config_.max_iters) {
      step();
      if (config_.residual_stop > 0.0 &&
          trace_.back().primal_residual <= config_.residual_stop) {
        break;
      }
    }
    return beta_;
  }

  const WeightCombination& beta() const { return beta_; }
  const std::vector<Eigen::VectorXd>& gammas() const { return gammas_; }
  const std::vector<Eigen::VectorXd>& duals() const { return duals_; }
  int iteration() const { return iteration_; }
  const std::vector<IterationRecord>& trace() const { return trace_; }
  double max_beta_stationarity() const { return max_stationarity_; }

  // Per-slave exchange of one iteration: consensus down, local up.
  std::int64_t bytes_per_iteration() const {
    return static_cast<std::int64_t>(2) * group_count_ * group_count_ * 8;
  }

  // Overrides the iterates; used to probe fixed points.
  void set_state(const Eigen::VectorXd& beta,
                 const std::vector<Eigen::VectorXd>& gammas,
                 const std::vector<Eigen::VectorXd>& duals) {
    beta_ = beta;
    gammas_ = gammas;
    duals_ = duals;
  }

 private:
  AdmmConfig config_;
  int group_count_;
  double scale_ = 1.0;
  Eigen::MatrixXd gram_;
  std::vector<Eigen::MatrixXd> slave_rows_;  // A_m blocks
  detail::BankMargins train_margins_;
  std::optional<detail::BankMargins> test_margins_;

  Eigen::VectorXd beta_;
  std::vector<Eigen::VectorXd> gammas_;
  std::vector<Eigen::VectorXd> duals_;
  std::vector<Eigen::VectorXd> warm_nu_;
  int iteration_ = 0;
  double max_stationarity_ = 0.0;
  std::vector<IterationRecord> trace_;
};

// Full-dimension consensus ADMM: slaves carry d-dimensional models, the
// master holds the consensus z with its closed-form shrink update.
class DsvmEngine {
 public:
  DsvmEngine(const LabeledDataset& dataset, const Partitioning& parts,
             const AdmmConfig& config,
             const LabeledDataset* test_set = nullptr)
      : config_(config),
        dataset_(dataset),
        parts_(parts),
        test_set_(test_set),
        group_count_(parts.group_count()),
        dimension_(dataset.dimension) {
    validate(config);
    const int m = group_count_;
    const int group_size = parts.group_size();
    scale_ = config.unit_loss_scale
                 ? 1.0
                 : 1.0 / static_cast<double>(m * group_size);

    slave_rows_.reserve(static_cast<std::size_t>(m));
    for (const auto& indices : parts_.partitions) {
      slave_rows_.emplace_back(dataset_, indices, -1.0);
    }

    const double init =
        config.ones_init ? 1.0 : 1.0 / static_cast<double>(m);
    z_ = Eigen::VectorXd::Constant(dimension_, init);
    locals_.assign(m, z_);
    duals_.assign(m, config.ones_init
                         ? Eigen::VectorXd::Ones(dimension_).eval()
                         : Eigen::VectorXd::Zero(dimension_).eval());
    warm_nu_.assign(m, Eigen::VectorXd());
  }

  void step() {
    const auto started = std::chrono::steady_clock::now();
    const int m = group_count_;
    const Eigen::VectorXd z_prev = z_;
    ++iteration_;

    std::vector<Eigen::VectorXd> locals(m);
    parallel_for(m, config_.threads, [&](int slave) {
      SolverSettings settings = config_.subproblem;
      settings.seed =
          detail::slave_seed(config_.subproblem.seed, slave, iteration_);
      HingeProxResult prox = hinge_prox(
          slave_rows_[static_cast<std::size_t>(slave)],
          Eigen::VectorXd(z_prev - duals_[static_cast<std::size_t>(slave)]),
          config_.rho, scale_, settings,
          std::move(warm_nu_[static_cast<std::size_t>(slave)]));
      warm_nu_[static_cast<std::size_t>(slave)] = std::move(prox.nu);
      locals[static_cast<std::size_t>(slave)] = std::move(prox.x);
    });

    std::vector<Eigen::VectorXd> relaxed(m);
    for (int slave = 0; slave < m; ++slave) {
      relaxed[static_cast<std::size_t>(slave)] =
          config_.overrelax_alpha
              ? overrelax_step(locals[static_cast<std::size_t>(slave)],
                               z_prev, *config_.overrelax_alpha)
              : locals[static_cast<std::size_t>(slave)];
    }

    Eigen::VectorXd local_mean = Eigen::VectorXd::Zero(dimension_);
    Eigen::VectorXd dual_mean = Eigen::VectorXd::Zero(dimension_);
    for (int slave = 0; slave < m; ++slave) {
      local_mean += relaxed[static_cast<std::size_t>(slave)];
      dual_mean += duals_[static_cast<std::size_t>(slave)];
    }
    local_mean /= static_cast<double>(m);
    dual_mean /= static_cast<double>(m);

    z_ = dsvm_z_update(local_mean + dual_mean, m, config_.rho,
                       config_.lambda);

    for (int slave = 0; slave < m; ++slave) {
      duals_[static_cast<std::size_t>(slave)] = dual_update(
          duals_[static_cast<std::size_t>(slave)],
          relaxed[static_cast<std::size_t>(slave)], z_);
    }
    locals_ = std::move(locals);

    IterationRecord record;
    record.iteration = iteration_;
    record.primal_residual = primal_residual(locals_, z_);
    record.objective = train_objective();
    record.train_accuracy = train_accuracy();
    if (test_set_) record.test_accuracy = consvm::accuracy(z_, *test_set_);
    record.bytes_communicated = bytes_per_iteration();
    record.wall_clock_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - started)
            .count();
    trace_.push_back(record);
  }

  const WeightVector& run() {
    while (iteration_ < config_.max_iters) {
      step();
      if (config_.residual_stop > 0.0 &&
          trace_.back().primal_residual <= config_.residual_stop) {
        break;
      }
    }
    return z_;
  }

  const WeightVector& z() const { return z_; }
  const std::vector<Eigen::VectorXd>& locals() const { return locals_; }
  const std::vector<Eigen::VectorXd>& duals() const { return duals_; }
  int iteration() const { return iteration_; }
  const std::vector<IterationRecord>& trace() const { return trace_; }

  std::int64_t bytes_per_iteration() const {
    return static_cast<std::int64_t>(2) * group_count_ * dimension_ * 8;
  }

  void set_state(const Eigen::VectorXd& z,
                 const std::vector<Eigen::VectorXd>& locals,
                 const std::vector<Eigen::VectorXd>& duals) {
    z_ = z;
    locals_ = locals;
    duals_ = duals;
  }

 private:
  double train_objective() const {
    double hinge_sum = 0.0;
    for (const auto& indices : parts_.partitions) {
      for (const std::int32_t i : indices) {
        const LabeledExample& x = dataset_.examples[i];
        hinge_sum += std::max(0.0, 1.0 - x.label * dot(z_, x));
      }
    }
    return config_.lambda * z_.squaredNorm() + scale_ * hinge_sum;
  }

  double train_accuracy() const {
    std::int64_t correct = 0;
    std::int64_t total = 0;
    for (const auto& indices : parts_.partitions) {
      for (const std::int32_t i : indices) {
        const LabeledExample& x = dataset_.examples[i];
        correct += predict(z_, x) == x.label ? 1 : 0;
        ++total;
      }
    }
    return static_cast<double>(correct) / static_cast<double>(total);
  }

  AdmmConfig config_;
  const LabeledDataset& dataset_;
  const Partitioning& parts_;
  const LabeledDataset* test_set_;
  int group_count_;
  int dimension_;
  double scale_ = 1.0;
  std::vector<SparseSignedRows> slave_rows_;

  Eigen::VectorXd z_;
  std::vector<Eigen::VectorXd> locals_;
  std::vector<Eigen::VectorXd> duals_;
  std::vector<Eigen::VectorXd> warm_nu_;
  int iteration_ = 0;
  std::vector<IterationRecord> trace_;
};

inline std::pair<WeightCombination, std::vector<IterationRecord>> run_dwpa(
    const LabeledDataset& dataset, const Partitioning& parts,
    const ModelBank& bank, const AdmmConfig& config,
    const LabeledDataset* test_set = nullptr) {
  DwpaEngine engine(dataset, parts, bank, config, test_set);
  engine.run();
  return {engine.beta(), engine.trace()};
}

inline std::pair<WeightVector, std::vector<IterationRecord>> run_dsvm(
    const LabeledDataset& dataset, const Partitioning& parts,
    const AdmmConfig& config, const LabeledDataset* test_set = nullptr) {
  DsvmEngine engine(dataset, parts, config, test_set);
  engine.run();
  return {engine.z(), engine.trace()};
}

}  // namespace consvm
