#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "consvm/model_bank.hpp"
#include "support/instances.hpp"

using namespace consvm;

TEST_CASE("single-column bank gram is the squared norm") {
  WeightVector w(2);
  w << 1.0, 2.0;
  const ModelBank bank = build_bank({w});
  REQUIRE(bank.count() == 1);
  REQUIRE(bank.dimension() == 2);
  REQUIRE(bank.gram()(0, 0) == 5.0);
}

TEST_CASE("duplicate columns are reported as rank deficiency, not rejected") {
  WeightVector w(3);
  w << 1.0, -1.0, 2.0;
  const ModelBank bank = build_bank({w, w});
  REQUIRE(bank.count() == 2);
  REQUIRE(bank.gram_rank() == 1);
}

TEST_CASE("gram matches the double-loop oracle") {
  SplitMix64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 2 + static_cast<int>(rng.next_below(20));
    const int m = 1 + static_cast<int>(rng.next_below(6));
    std::vector<WeightVector> models;
    for (int c = 0; c < m; ++c) {
      models.push_back(instances::random_vector(rng, d));
    }
    const ModelBank bank = build_bank(models);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        double expected = 0.0;
        for (int j = 0; j < d; ++j) expected += models[a][j] * models[b][j];
        REQUIRE_THAT(bank.gram()(a, b),
                     Catch::Matchers::WithinAbs(expected, 1e-12 * d));
      }
    }
  }
}

TEST_CASE("build_bank rejects ragged columns") {
  REQUIRE_THROWS_AS(
      build_bank({WeightVector::Zero(3), WeightVector::Zero(4)}),
      contract_violation);
  REQUIRE_THROWS_AS(build_bank({}), std::invalid_argument);
}

TEST_CASE("pa_weights is the uniform combination") {
  REQUIRE(pa_weights(1).size() == 1);
  REQUIRE(pa_weights(1)[0] == 1.0);
  const WeightCombination quarter = pa_weights(4);
  for (int i = 0; i < 4; ++i) REQUIRE(quarter[i] == 0.25);
  REQUIRE_THROWS_AS(pa_weights(0), std::invalid_argument);
}

TEST_CASE("combining with pa_weights averages the columns") {
  SplitMix64 rng(22);
  const int d = 6, m = 5;
  std::vector<WeightVector> models;
  for (int c = 0; c < m; ++c) models.push_back(instances::random_vector(rng, d));
  const ModelBank bank = build_bank(models);
  const WeightVector averaged = combine(bank, pa_weights(m));
  for (int j = 0; j < d; ++j) {
    double expected = 0.0;
    for (int c = 0; c < m; ++c) expected += models[static_cast<std::size_t>(c)][j];
    expected /= m;
    REQUIRE_THAT(averaged[j], Catch::Matchers::WithinAbs(expected, 1e-12));
  }
}

TEST_CASE("combine selects, zeroes and matches the naive product") {
  SplitMix64 rng(23);
  const int d = 7, m = 4;
  std::vector<WeightVector> models;
  for (int c = 0; c < m; ++c) models.push_back(instances::random_vector(rng, d));
  const ModelBank bank = build_bank(models);

  WeightCombination e2 = WeightCombination::Zero(m);
  e2[1] = 1.0;
  REQUIRE((combine(bank, e2) - models[1]).norm() == 0.0);
  REQUIRE(combine(bank, WeightCombination::Zero(m)).norm() == 0.0);

  const WeightCombination beta = instances::random_vector(rng, m);
  const WeightVector combined = combine(bank, beta);
  for (int j = 0; j < d; ++j) {
    double expected = 0.0;
    for (int c = 0; c < m; ++c) {
      expected += models[static_cast<std::size_t>(c)][j] * beta[c];
    }
    REQUIRE_THAT(combined[j], Catch::Matchers::WithinAbs(expected, 1e-12));
  }

  REQUIRE_THROWS_AS(combine(bank, WeightCombination::Zero(m + 1)),
                    contract_violation);
}

namespace {

LabeledExample dense_example(const Eigen::VectorXd& values) {
  LabeledExample x;
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    x.features.push_back({static_cast<std::int32_t>(j + 1), values[j]});
  }
  return x;
}

}  // namespace

TEST_CASE("projection fixes the column space and kills its complement") {
  // Orthonormal columns e1, e2 in R^4.
  WeightVector c1 = WeightVector::Zero(4), c2 = WeightVector::Zero(4);
  c1[0] = 1.0;
  c2[1] = 1.0;
  const ModelBank bank = build_bank({c1, c2});

  const Eigen::VectorXd fixed = projection_apply(bank, dense_example(c1), 0.0);
  REQUIRE((fixed - c1).norm() <= 1e-12);

  WeightVector orthogonal = WeightVector::Zero(4);
  orthogonal[2] = 3.0;
  orthogonal[3] = -1.0;
  const Eigen::VectorXd killed =
      projection_apply(bank, dense_example(orthogonal), 0.0);
  REQUIRE(killed.norm() <= 1e-12);
}

TEST_CASE("projection is idempotent and symmetric on random banks") {
  SplitMix64 rng(24);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 4 + static_cast<int>(rng.next_below(12));
    const int m = 1 + static_cast<int>(rng.next_below(4));
    std::vector<WeightVector> models;
    for (int c = 0; c < m; ++c) {
      models.push_back(instances::random_vector(rng, d));
    }
    const ModelBank bank = build_bank(models);
    const ProjectionOperator projector(bank, 0.0);

    const Eigen::VectorXd x = instances::random_vector(rng, d);
    const Eigen::VectorXd once = projector.apply(x);
    const Eigen::VectorXd twice = projector.apply(once);
    REQUIRE((twice - once).norm() <= 1e-8 * (1.0 + once.norm()));

    // Symmetry through matrix-free probes: u'Hv == v'Hu.
    const Eigen::VectorXd u = instances::random_vector(rng, d);
    const Eigen::VectorXd v = instances::random_vector(rng, d);
    const double left = u.dot(projector.apply(v));
    const double right = v.dot(projector.apply(u));
    REQUIRE_THAT(left, Catch::Matchers::WithinAbs(
                           right, 1e-9 * (1.0 + std::abs(left))));
  }
}

TEST_CASE("singular gram without ridge is refused, with ridge accepted") {
  WeightVector w(3);
  w << 1.0, 2.0, 3.0;
  const ModelBank bank = build_bank({w, w});
  const LabeledExample x = dense_example(Eigen::VectorXd::Ones(3));
  REQUIRE_THROWS_AS(projection_apply(bank, x, 0.0), singular_gram_error);
  REQUIRE_NOTHROW(projection_apply(bank, x, 1e-8));
}
