#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "consvm/stability.hpp"
#include "support/instances.hpp"

using namespace consvm;

TEST_CASE("normalize_bank rescales columns to squared norm 1/M") {
  WeightVector w(2);
  w << 3.0, 4.0;
  const ModelBank unit = normalize_bank(build_bank({w}));
  REQUIRE_THAT(unit.columns()(0, 0), Catch::Matchers::WithinAbs(0.6, 1e-15));
  REQUIRE_THAT(unit.columns()(1, 0), Catch::Matchers::WithinAbs(0.8, 1e-15));

  SplitMix64 rng(81);
  std::vector<WeightVector> models;
  for (int c = 0; c < 4; ++c) models.push_back(instances::random_vector(rng, 6));
  const ModelBank normalized = normalize_bank(build_bank(models));
  for (int c = 0; c < 4; ++c) {
    REQUIRE_THAT(normalized.columns().col(c).squaredNorm(),
                 Catch::Matchers::WithinAbs(0.25, 1e-12));
  }
  REQUIRE_THAT(normalized.columns().norm(),
               Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("normalize_bank is idempotent and rejects zero columns") {
  SplitMix64 rng(82);
  std::vector<WeightVector> models;
  for (int c = 0; c < 3; ++c) models.push_back(instances::random_vector(rng, 5));
  const ModelBank once = normalize_bank(build_bank(models));
  const ModelBank twice = normalize_bank(once);
  REQUIRE((once.columns() - twice.columns()).norm() <= 1e-12);

  models.push_back(WeightVector::Zero(5));
  REQUIRE_THROWS_AS(normalize_bank(build_bank(models)),
                    std::invalid_argument);
}

TEST_CASE("perturb_one replaces exactly the last point of the last group") {
  const LabeledDataset dataset =
      augment_bias(toy_gaussian_mixture(24, 0.2, 7));
  const Partitioning parts = partition(dataset, 4, 11);

  // Replacement equal to the original point: datasets identical.
  const std::int32_t target = parts.partitions.back().back();
  const LabeledDataset same =
      perturb_one(dataset, parts, dataset.examples[target]);
  REQUIRE(same.examples == dataset.examples);

  LabeledExample replacement;
  replacement.label = -1;
  replacement.features = {{1, 9.0}, {2, -9.0}, {3, 1.0}};
  const LabeledDataset perturbed = perturb_one(dataset, parts, replacement);
  int differing = 0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (!(dataset.examples[i] == perturbed.examples[i])) ++differing;
  }
  REQUIRE(differing == 1);
  REQUIRE(perturbed.examples[target] == replacement);

  LabeledExample oversized;
  oversized.features = {{7, 1.0}};
  REQUIRE_THROWS_AS(perturb_one(dataset, parts, oversized),
                    contract_violation);
}

TEST_CASE("models of untouched partitions retrain bit-identically") {
  const LabeledDataset dataset =
      augment_bias(toy_gaussian_mixture(32, 0.2, 9));
  const Partitioning parts = partition(dataset, 4, 13);
  LabeledExample replacement;
  replacement.label = 1;
  replacement.features = {{1, 0.3}, {2, 2.5}, {3, 1.0}};
  const LabeledDataset perturbed = perturb_one(dataset, parts, replacement);

  for (int p = 0; p < 4; ++p) {
    SolverSettings settings;
    settings.lambda = 0.01;
    settings.seed = 1000 + static_cast<std::uint64_t>(p);
    const WeightVector before =
        train_linear_svm(dataset, parts.partitions[p], settings);
    const WeightVector after =
        train_linear_svm(perturbed, parts.partitions[p], settings);
    if (p < 3) {
      REQUIRE((before.array() == after.array()).all());
    } else {
      REQUIRE((before - after).norm() > 0.0);
    }
  }
}

TEST_CASE("replacing a point with itself moves the model nowhere") {
  const LabeledDataset dataset =
      augment_bias(toy_gaussian_mixture(24, 0.2, 15));
  const Partitioning parts = partition(dataset, 3, 17);
  const std::int32_t target = parts.partitions.back().back();
  const LabeledDataset same =
      perturb_one(dataset, parts, dataset.examples[target]);

  auto theta_of = [&](const LabeledDataset& data) {
    std::vector<WeightVector> models;
    for (int p = 0; p < 3; ++p) {
      SolverSettings settings;
      settings.lambda = 0.01;
      settings.seed = 500 + static_cast<std::uint64_t>(p);
      models.push_back(train_linear_svm(data, parts.partitions[p], settings));
    }
    const ModelBank bank = normalize_bank(build_bank(models));
    SolverSettings wpa_settings;
    wpa_settings.lambda = 0.01;
    const WpaSolution solution = solve_wpa_central(
        bank, data, parts, 0.01, wpa_settings, default_gram_ridge(bank));
    return combine(bank, solution.beta);
  };

  REQUIRE((theta_of(dataset) - theta_of(same)).norm() == 0.0);
}

TEST_CASE("stability experiment smoke run") {
  const std::vector<std::pair<int, int>> sizes = {{4, 4}, {4, 8}, {4, 16}};
  StabilityOptions options;
  options.solver.tolerance = 1e-8;
  const StabilityReport report = stability_experiment(sizes, 3, 2024, options);

  REQUIRE(report.trials.size() + static_cast<std::size_t>(report.skipped) ==
          9);
  for (const StabilityTrial& trial : report.trials) {
    REQUIRE(std::isfinite(trial.theta_distance));
    REQUIRE(trial.theta_distance >= 0.0);
    REQUIRE(std::isfinite(trial.theta_distance_unnormalized));
  }
  REQUIRE(std::isfinite(report.slope));

  // Seed-determinism of the whole experiment.
  const StabilityReport again = stability_experiment(sizes, 3, 2024, options);
  REQUIRE(again.trials.size() == report.trials.size());
  for (std::size_t i = 0; i < report.trials.size(); ++i) {
    REQUIRE(again.trials[i].theta_distance == report.trials[i].theta_distance);
  }
  REQUIRE(again.slope == report.slope);
}

TEST_CASE("stability experiment validates its arguments") {
  StabilityOptions options;
  REQUIRE_THROWS_AS(stability_experiment({{4, 4}, {4, 8}}, 2, 1, options),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(
      stability_experiment({{1, 4}, {2, 4}, {4, 4}}, 2, 1, options),
      std::invalid_argument);
}

TEST_CASE("centralized retraining sits at solver-tolerance distance") {
  // Self-comparison bound: two independent solver runs on the same sample
  // both carry duality gap <= tol, and lambda-strong convexity turns that
  // into a distance of at most sqrt(2 tol / lambda) each from the optimum.
  const LabeledDataset sample =
      augment_bias(toy_gaussian_mixture(2000, 0.2, 31));
  SolverSettings settings;
  settings.lambda = 1e-3;
  settings.tolerance = 1e-8;
  settings.max_epochs = 4000;
  settings.seed = 1;
  const WeightVector first = train_linear_svm(sample, settings);
  settings.seed = 2;
  const WeightVector second = train_linear_svm(sample, settings);
  REQUIRE((first - second).norm() <=
          2.0 * std::sqrt(settings.tolerance / settings.lambda));
}

TEST_CASE("bias experiment smoke run") {
  BiasOptions options;
  options.partitions = 4;
  options.lambda = 1e-3;
  options.wpa_lambda = 1e-3;
  options.reference_factor = 10;
  options.solver.tolerance = 1e-6;
  options.admm.max_iters = 200;
  options.admm.residual_stop = 1e-4;
  options.admm.subproblem.tolerance = 1e-6;

  const BiasReport pa_report =
      bias_experiment(BiasAlgorithm::pa, {200, 400}, 2, 77, options);
  REQUIRE(pa_report.estimates.size() == 2);
  for (const BiasEstimate& estimate : pa_report.estimates) {
    REQUIRE(estimate.trials == 2);
    REQUIRE(std::isfinite(estimate.mean_bias));
    REQUIRE(estimate.mean_bias >= 0.0);
  }
  REQUIRE(pa_report.trials.size() == 4);

  // Same seed reproduces the report; the shared reference can be reused.
  const BiasReport again = bias_experiment(BiasAlgorithm::pa, {200, 400}, 2,
                                           77, options,
                                           &pa_report.reference);
  REQUIRE(again.estimates[0].mean_bias == pa_report.estimates[0].mean_bias);

  REQUIRE_THROWS_AS(bias_experiment(BiasAlgorithm::pa, {}, 2, 1, options),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(bias_experiment(BiasAlgorithm::pa, {100}, 1, 1, options),
                    std::invalid_argument);
}
