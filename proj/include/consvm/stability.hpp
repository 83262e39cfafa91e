#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "consvm/admm.hpp"
#include "consvm/dataset.hpp"
#include "consvm/errors.hpp"
#include "consvm/model_bank.hpp"
#include "consvm/svm.hpp"
#include "consvm/wpa.hpp"

namespace consvm {

// Rescales every column to squared norm exactly 1/M, making the stack's
// Frobenius norm 1.
inline ModelBank normalize_bank(const ModelBank& bank) {
  const double target = 1.0 / static_cast<double>(bank.count());
  Eigen::MatrixXd columns = bank.columns();
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    const double norm = columns.col(c).norm();
    if (norm == 0.0) {
      throw std::invalid_argument("normalize_bank: zero column");
    }
    columns.col(c) *= std::sqrt(target) / norm;
  }
  return ModelBank(std::move(columns));
}

// Swaps in `replacement` for the last point of the last partition; every
// other example and the index structure stay untouched.
inline LabeledDataset perturb_one(const LabeledDataset& dataset,
                                  const Partitioning& parts,
                                  const LabeledExample& replacement) {
  if (replacement.max_index() > dataset.dimension) {
    throw contract_violation("perturb_one: replacement dimension mismatch");
  }
  if (parts.partitions.empty() || parts.partitions.back().empty()) {
    throw std::invalid_argument("perturb_one: empty partitioning");
  }
  LabeledDataset out = dataset;
  const std::int32_t target = parts.partitions.back().back();
  out.examples[static_cast<std::size_t>(target)] = replacement;
  return out;
}

struct StabilityTrial {
  int partition_count = 0;  // M
  int partition_size = 0;   // L
  std::uint64_t seed = 0;
  double theta_distance = 0.0;               // normalized banks
  double theta_distance_unnormalized = 0.0;  // raw banks, for reference
};

struct StabilityOptions {
  double lambda = 0.1;      // per-partition training
  double wpa_lambda = 0.1;  // combination solve
  double minority_fraction = 0.2;
  SolverSettings solver{0.1, 1e-8, 2000, 0};
};

struct StabilityReport {
  std::vector<StabilityTrial> trials;
  int skipped = 0;
  // (M*L, mean normalized distance) per requested size, in input order.
  std::vector<std::pair<double, double>> size_means;
  double slope = 0.0;  // log mean distance vs log(M*L)
};

namespace detail {

inline bool has_single_class_partition(const LabeledDataset& dataset,
                                       const Partitioning& parts) {
  for (const auto& indices : parts.partitions) {
    bool positive = false;
    bool negative = false;
    for (const std::int32_t i : indices) {
      (dataset.examples[static_cast<std::size_t>(i)].label > 0 ? positive
                                                               : negative) =
          true;
    }
    if (!(positive && negative)) return true;
  }
  return false;
}

inline double fit_loglog_slope(
    const std::vector<std::pair<double, double>>& points) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const auto n = static_cast<double>(points.size());
  for (const auto& [x, y] : points) {
    const double lx = std::log(x);
    const double ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

// Measures how far the combined model moves when a single training point
// is replaced, across a range of M*L sample sizes: the empirical
// counterpart of the hypothesis-stability decay rate, summarized by the
// least-squares slope of log(mean distance) against log(M*L).
inline StabilityReport stability_experiment(
    const std::vector<std::pair<int, int>>& sizes, int trials_per_size,
    std::uint64_t seed, const StabilityOptions& options = {}) {
  if (sizes.size() < 3) {
    throw std::invalid_argument(
        "stability_experiment: need at least 3 sizes");
  }
  for (const auto& [m, l] : sizes) {
    if (m * l < 8) {
      throw std::invalid_argument("stability_experiment: M*L must be >= 8");
    }
  }
  if (trials_per_size < 1) {
    throw std::invalid_argument("stability_experiment: trials must be >= 1");
  }

  StabilityReport report;
  const SplitMix64 root(seed);
  for (std::size_t size_index = 0; size_index < sizes.size(); ++size_index) {
    const auto [m, l] = sizes[size_index];
    double distance_sum = 0.0;
    int completed = 0;
    for (int trial = 0; trial < trials_per_size; ++trial) {
      SplitMix64 g = root.split(size_index).split(
          static_cast<std::uint64_t>(trial));
      const std::uint64_t data_seed = g.next();
      const std::uint64_t part_seed = g.next();
      const std::uint64_t model_seed = g.next();
      SplitMix64 replacement_rng(g.next());

      const LabeledDataset sample = augment_bias(
          toy_gaussian_mixture(m * l, options.minority_fraction, data_seed));
      const Partitioning parts = partition(sample, m, part_seed);
      if (detail::has_single_class_partition(sample, parts)) {
        ++report.skipped;
        continue;
      }

      LabeledExample replacement =
          toy_mixture_example(replacement_rng, options.minority_fraction);
      replacement.features.push_back({3, 1.0});
      const LabeledDataset perturbed = perturb_one(sample, parts, replacement);

      SolverSettings settings = options.solver;
      settings.lambda = options.lambda;
      std::vector<WeightVector> models;
      models.reserve(static_cast<std::size_t>(m));
      for (int p = 0; p < m; ++p) {
        SolverSettings s = settings;
        s.seed = SplitMix64(model_seed).split(static_cast<std::uint64_t>(p))
                     .next();
        models.push_back(train_linear_svm(
            sample, parts.partitions[static_cast<std::size_t>(p)], s));
      }
      // Only the last partition changed, so only its model needs
      // retraining for the perturbed sample.
      std::vector<WeightVector> models_perturbed = models;
      {
        SolverSettings s = settings;
        s.seed = SplitMix64(model_seed)
                     .split(static_cast<std::uint64_t>(m - 1))
                     .next();
        models_perturbed.back() = train_linear_svm(
            perturbed, parts.partitions.back(), s);
      }
      if (models.back().isZero(0.0) || models_perturbed.back().isZero(0.0)) {
        ++report.skipped;
        continue;
      }

      const ModelBank raw(models);
      const ModelBank raw_perturbed(models_perturbed);
      const ModelBank normalized = normalize_bank(raw);
      const ModelBank normalized_perturbed = normalize_bank(raw_perturbed);

      SolverSettings wpa_settings = options.solver;
      wpa_settings.lambda = options.wpa_lambda;
      wpa_settings.seed = g.next();
      auto solve_theta = [&](const ModelBank& bank,
                             const LabeledDataset& data) -> WeightVector {
        const WpaSolution solution =
            solve_wpa_central(bank, data, parts, options.wpa_lambda,
                              wpa_settings, default_gram_ridge(bank));
        return combine(bank, solution.beta);
      };

      StabilityTrial row;
      row.partition_count = m;
      row.partition_size = l;
      row.seed = data_seed;
      row.theta_distance =
          (solve_theta(normalized, sample) -
           solve_theta(normalized_perturbed, perturbed))
              .norm();
      row.theta_distance_unnormalized =
          (solve_theta(raw, sample) - solve_theta(raw_perturbed, perturbed))
              .norm();
      report.trials.push_back(row);
      distance_sum += row.theta_distance;
      ++completed;
    }
    if (completed > 0) {
      report.size_means.emplace_back(static_cast<double>(m) * l,
                                     distance_sum / completed);
    }
  }

  if (report.size_means.size() >= 2) {
    report.slope = detail::fit_loglog_slope(report.size_means);
  }
  return report;
}

enum class BiasAlgorithm { pa, dwpa, dsvm };

struct BiasOptions {
  int partitions = 50;
  double lambda = 1e-3;
  double wpa_lambda = 1e-3;
  double minority_fraction = 0.2;
  SolverSettings solver{1e-3, 1e-6, 1000, 0};
  AdmmConfig admm;
  int reference_factor = 50;        // reference sample = factor * max N
  double reference_tolerance = 1e-8;
  double reference_gap_limit = 1e-2;  // train/test objective agreement
};

struct BiasEstimate {
  int sample_size = 0;
  int trials = 0;
  double mean_bias = 0.0;
};

struct BiasTrial {
  int sample_size = 0;
  int trial = 0;
  double distance = 0.0;
};

struct BiasReference {
  WeightVector w;
  double train_objective = 0.0;
  double holdout_objective = 0.0;
};

// Proxy for the generalization-error minimizer: a model trained on a
// sample large enough that train and holdout objectives agree.
inline BiasReference compute_bias_reference(int max_sample_size,
                                            std::uint64_t seed,
                                            const BiasOptions& options) {
  const int reference_size = options.reference_factor * max_sample_size;
  SplitMix64 root(seed);
  const LabeledDataset reference_sample = augment_bias(toy_gaussian_mixture(
      reference_size, options.minority_fraction, root.split(0).next()));
  const LabeledDataset holdout_sample = augment_bias(toy_gaussian_mixture(
      reference_size, options.minority_fraction, root.split(1).next()));

  SolverSettings settings = options.solver;
  settings.lambda = options.lambda;
  settings.tolerance = options.reference_tolerance;
  settings.seed = root.split(2).next();
  const TrainResult trained =
      train_linear_svm_detailed(reference_sample, settings);
  if (!trained.converged) {
    throw setup_error("bias reference model did not converge");
  }

  BiasReference reference;
  reference.w = trained.w;
  reference.train_objective = trained.objective;
  reference.holdout_objective =
      objective(trained.w, holdout_sample, options.lambda);
  if (std::abs(reference.train_objective - reference.holdout_objective) >
      options.reference_gap_limit) {
    throw setup_error(
        "bias reference train/holdout objectives disagree; enlarge the "
        "reference sample");
  }
  return reference;
}

struct BiasReport {
  std::vector<BiasEstimate> estimates;
  std::vector<BiasTrial> trials;
  BiasReference reference;
};

// Mean distance of an algorithm's output from the reference model over
// repeated fresh samples of each size.
inline BiasReport bias_experiment(BiasAlgorithm algorithm,
                                  const std::vector<int>& sample_sizes,
                                  int trials, std::uint64_t seed,
                                  const BiasOptions& options,
                                  const BiasReference* reference = nullptr) {
  if (sample_sizes.empty() || trials < 2) {
    throw std::invalid_argument(
        "bias_experiment: need sample sizes and >= 2 trials");
  }
  int max_sample_size = 0;
  for (const int n : sample_sizes) max_sample_size = std::max(max_sample_size, n);

  BiasReport report;
  report.reference =
      reference ? *reference
                : compute_bias_reference(max_sample_size, seed, options);

  const SplitMix64 root(seed);
  for (std::size_t size_index = 0; size_index < sample_sizes.size();
       ++size_index) {
    const int n = sample_sizes[size_index];
    double distance_sum = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      SplitMix64 g = root.split(100 + size_index)
                         .split(static_cast<std::uint64_t>(trial));
      const LabeledDataset sample = augment_bias(toy_gaussian_mixture(
          n, options.minority_fraction, g.next()));
      const Partitioning parts = partition(sample, options.partitions,
                                           g.next());

      WeightVector w;
      if (algorithm == BiasAlgorithm::dsvm) {
        AdmmConfig admm = options.admm;
        admm.lambda = options.lambda;
        admm.subproblem.seed = g.next();
        DsvmEngine engine(sample, parts, admm);
        w = engine.run();
      } else {
        SolverSettings settings = options.solver;
        settings.lambda = options.lambda;
        const std::uint64_t model_seed = g.next();
        std::vector<WeightVector> models;
        models.reserve(parts.partitions.size());
        for (std::size_t p = 0; p < parts.partitions.size(); ++p) {
          SolverSettings s = settings;
          s.seed = SplitMix64(model_seed).split(p).next();
          models.push_back(train_linear_svm(sample, parts.partitions[p], s));
        }
        const ModelBank bank(models);
        if (algorithm == BiasAlgorithm::pa) {
          w = combine(bank, pa_weights(bank.count()));
        } else {
          AdmmConfig admm = options.admm;
          admm.lambda = options.wpa_lambda;
          admm.subproblem.seed = g.next();
          DwpaEngine engine(sample, parts, bank, admm);
          w = combine(bank, engine.run());
        }
      }

      const double distance = (w - report.reference.w).norm();
      report.trials.push_back(
          {n, trial, distance});
      distance_sum += distance;
    }
    report.estimates.push_back({n, trials, distance_sum / trials});
  }
  return report;
}

}  // namespace consvm
