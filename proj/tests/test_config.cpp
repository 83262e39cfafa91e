#include <catch2/catch_amalgamated.hpp>

#include "consvm/config.hpp"

using namespace consvm;

TEST_CASE("empty input demands a method for method-driven subcommands") {
  REQUIRE_THROWS_AS(parse_config("", {}, Subcommand::sweep), usage_error);
  REQUIRE_THROWS_AS(parse_config("", {}, Subcommand::trace), usage_error);
  // Stability and bias run without one.
  REQUIRE_NOTHROW(parse_config("", {}, Subcommand::stability));
  REQUIRE_NOTHROW(parse_config("", {}, Subcommand::bias));
}

TEST_CASE("defaults are applied") {
  const ExperimentConfig config = parse_config("", {}, Subcommand::stability);
  REQUIRE(config.lambda == 1e-3);
  REQUIRE(config.rho == 1.0);
  REQUIRE(config.max_iters == 500);
  REQUIRE(config.tolerance == 1e-6);
  REQUIRE(config.alpha == 1.5);
  REQUIRE(config.output == "stability.csv");
}

TEST_CASE("flags override file values") {
  const ExperimentConfig config = parse_config(
      "method = dwpa\nrho = 2\n", {{"rho", "3"}}, Subcommand::trace);
  REQUIRE(config.rho == 3.0);
  REQUIRE(config.methods == std::vector<Method>{Method::dwpa});
}

TEST_CASE("unknown keys and bad values are rejected by name") {
  try {
    parse_config("methd = dwpa\n", {}, Subcommand::stability);
    FAIL("expected usage_error");
  } catch (const usage_error& error) {
    REQUIRE(std::string(error.what()).find("methd") != std::string::npos);
  }

  try {
    parse_config("lambda = -1\n", {}, Subcommand::stability);
    FAIL("expected usage_error");
  } catch (const usage_error& error) {
    REQUIRE(std::string(error.what()).find("lambda") != std::string::npos);
  }

  REQUIRE_THROWS_AS(parse_config("alpha = 2.5\n", {}, Subcommand::stability),
                    usage_error);
  REQUIRE_THROWS_AS(parse_config("rho 3\n", {}, Subcommand::stability),
                    usage_error);
  REQUIRE_THROWS_AS(
      parse_config("method = nosuch\n", {}, Subcommand::sweep), usage_error);
  REQUIRE_THROWS_AS(
      parse_config("toy_fraction = 1.5\n", {}, Subcommand::stability),
      usage_error);
}

TEST_CASE("comment and whitespace handling") {
  const ExperimentConfig config = parse_config(
      "# a comment\n"
      "  method = pa , dwpa  # inline comment\n"
      "\r\n"
      "partitions = 1, 10, 50\n",
      {}, Subcommand::sweep);
  REQUIRE(config.methods == std::vector<Method>{Method::pa, Method::dwpa});
  REQUIRE(config.partitions == std::vector<int>{1, 10, 50});
}

TEST_CASE("trace demands consensus-family methods") {
  REQUIRE_THROWS_AS(parse_config("method = pa\n", {}, Subcommand::trace),
                    usage_error);
  REQUIRE_NOTHROW(parse_config("method = dsvm_acc\n", {}, Subcommand::trace));
}

TEST_CASE("libsvm data source needs a train path") {
  REQUIRE_THROWS_AS(
      parse_config("method = dwpa\ndata = libsvm\n", {}, Subcommand::sweep),
      usage_error);
  REQUIRE_NOTHROW(parse_config(
      "method = dwpa\ndata = libsvm\ntrain_path = x.svm\n", {},
      Subcommand::sweep));
}

TEST_CASE("serialize/parse round-trips a fully populated config") {
  ExperimentConfig config = parse_config(
      "method = dwpa_acc,dsvm\n"
      "data = libsvm\n"
      "train_path = train.svm\n"
      "test_path = test.svm\n"
      "partitions = 2,4\n"
      "lambda = 0.035\n"
      "wpa_lambda = 0.07\n"
      "rho = 2.25\n"
      "max_iters = 123\n"
      "alpha = 1.25\n"
      "residual_stop = 1e-4\n"
      "loss_scale = unit\n"
      "init = ones\n"
      "tolerance = 1e-7\n"
      "max_epochs = 321\n"
      "seeds = 1,2,3\n"
      "output = out.csv\n"
      "threads = 4\n"
      "sizes = 2x8,4x8,8x8\n"
      "trials = 7\n"
      "stability_lambda = 0.02\n"
      "bias_n = 100,200\n"
      "bias_m = 5\n"
      "bias_trials = 3\n"
      "bias_batches = 4\n"
      "ref_factor = 11\n"
      "ref_tolerance = 1e-9\n",
      {}, Subcommand::sweep);
  const std::string text = serialize_config(config);
  const ExperimentConfig reparsed = parse_config(text, {}, Subcommand::sweep);
  REQUIRE(reparsed == config);
}

TEST_CASE("method names round-trip") {
  for (const Method method :
       {Method::pa, Method::wpa_central, Method::dwpa, Method::dwpa_acc,
        Method::dsvm, Method::dsvm_acc, Method::svm_central}) {
    REQUIRE(method_from_string(to_string(method)) == method);
  }
  REQUIRE(!method_from_string("bogus"));
}
