// consensus-svm: experiment harness for distributed linear-SVM training
// strategies (parameter averaging, weighted parameter averaging, and the
// consensus-ADMM variants) on a deterministic simulated cluster.
//
// Usage:
//   consensus-svm <sweep|trace|timing|stability|bias|toyfig>
//                 [--config FILE] [--key value ...]
//
// Every configuration knob is a key; see README.md for the key table.
// Flags override config-file values.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "consvm/consvm.hpp"

namespace {

std::vector<std::pair<std::string, std::string>> key_value_overrides(
    const std::vector<std::string>& extras) {
  std::vector<std::pair<std::string, std::string>> overrides;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    std::string token = extras[i];
    if (token.rfind("--", 0) != 0) {
      throw consvm::usage_error("expected --key, got '" + token + "'");
    }
    token.erase(0, 2);
    if (const auto eq = token.find('='); eq != std::string::npos) {
      overrides.emplace_back(token.substr(0, eq), token.substr(eq + 1));
      continue;
    }
    if (i + 1 >= extras.size()) {
      throw consvm::usage_error("key '" + token + "' is missing a value");
    }
    overrides.emplace_back(token, extras[++i]);
  }
  return overrides;
}

std::string read_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw consvm::usage_error("cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw consvm::setup_error("cannot open output file '" + path + "'");
  }
  file << content;
}

consvm::ExperimentConfig load_config(const std::string& config_path,
                                     const std::vector<std::string>& extras,
                                     consvm::Subcommand subcommand) {
  const std::string file_text =
      config_path.empty() ? std::string() : read_file(config_path);
  return consvm::parse_config(file_text, key_value_overrides(extras),
                              subcommand);
}

int run_sweep(const consvm::ExperimentConfig& config) {
  const consvm::RunReport report = consvm::run_accuracy_sweep(config);
  write_file(config.output, report.to_string());
  std::cout << "wrote " << report.rows.size() << " rows to " << config.output
            << "\n";
  return 0;
}

int run_trace(const consvm::ExperimentConfig& config) {
  const consvm::RunReport report = consvm::run_convergence_trace(config);
  write_file(config.output, report.to_string());
  std::cout << "wrote " << report.rows.size() << " rows to " << config.output
            << "\n";
  return 0;
}

int run_timing(const consvm::ExperimentConfig& config) {
  const consvm::TimingResult result = consvm::run_timing(config);
  write_file(config.output, result.report.to_string());
  std::cout << "wrote " << result.report.rows.size() << " rows to "
            << config.output << "\n";
  for (const consvm::TimingSummary& s : result.summaries) {
    std::cout << s.method << " M=" << s.partition_count << " seed=" << s.seed
              << ": " << consvm::format_real(s.mean_ms_per_iteration, 6)
              << " ms/iteration over " << s.iterations << " iterations\n";
  }
  return 0;
}

int run_stability(const consvm::ExperimentConfig& config) {
  consvm::StabilityOptions options;
  options.lambda = config.stability_lambda;
  options.wpa_lambda = config.stability_lambda;
  options.minority_fraction = config.toy_fraction;
  const consvm::StabilityReport report = consvm::stability_experiment(
      config.sizes, config.trials, config.seeds.front(), options);
  write_file(config.output, consvm::stability_csv(report));
  std::cout << "wrote " << report.trials.size() << " trials to "
            << config.output << " (" << report.skipped << " skipped)\n";
  for (const auto& [ml, mean] : report.size_means) {
    std::cout << "ML=" << ml << ": mean distance "
              << consvm::format_real(mean, 6) << "\n";
  }
  std::cout << "log-log slope: " << consvm::format_real(report.slope, 6)
            << "\n";
  return 0;
}

int run_bias(const consvm::ExperimentConfig& config) {
  std::vector<consvm::BiasAlgorithm> algorithms;
  if (config.methods.empty()) {
    algorithms = {consvm::BiasAlgorithm::pa, consvm::BiasAlgorithm::dwpa};
  } else {
    for (const consvm::Method method : config.methods) {
      switch (method) {
        case consvm::Method::pa:
          algorithms.push_back(consvm::BiasAlgorithm::pa);
          break;
        case consvm::Method::dwpa:
          algorithms.push_back(consvm::BiasAlgorithm::dwpa);
          break;
        case consvm::Method::dsvm:
          algorithms.push_back(consvm::BiasAlgorithm::dsvm);
          break;
        default:
          throw consvm::usage_error(
              "bias supports methods pa, dwpa and dsvm only");
      }
    }
  }

  consvm::BiasOptions options;
  options.partitions = config.bias_m;
  options.lambda = config.lambda;
  options.wpa_lambda = config.wpa_lambda;
  options.minority_fraction = config.toy_fraction;
  options.solver.lambda = config.lambda;
  options.solver.tolerance = config.tolerance;
  options.solver.max_epochs = config.max_epochs;
  options.admm.rho = config.rho;
  options.admm.max_iters = config.max_iters;
  options.admm.residual_stop =
      config.residual_stop > 0.0 ? config.residual_stop : 1e-5;
  options.admm.subproblem.tolerance = config.tolerance;
  options.admm.subproblem.max_epochs = config.max_epochs;
  options.admm.threads = config.threads;
  options.reference_factor = config.ref_factor;
  options.reference_tolerance = config.ref_tolerance;

  int max_n = 0;
  for (const int n : config.bias_n) max_n = std::max(max_n, n);
  const consvm::BiasReference reference = consvm::compute_bias_reference(
      max_n, config.seeds.front(), options);

  std::vector<consvm::BiasBatchResult> batches;
  const consvm::SplitMix64 root(config.seeds.front());
  for (const consvm::BiasAlgorithm algorithm : algorithms) {
    for (int batch = 0; batch < config.bias_batches; ++batch) {
      consvm::BiasBatchResult result;
      result.algorithm = algorithm;
      result.batch = batch;
      result.report = consvm::bias_experiment(
          algorithm, config.bias_n, config.bias_trials,
          root.split(static_cast<std::uint64_t>(batch) + 1).next(), options,
          &reference);
      batches.push_back(std::move(result));
    }
  }
  write_file(config.output, consvm::bias_csv(batches));
  std::cout << "wrote bias rows to " << config.output << "\n";

  for (const consvm::BiasAlgorithm algorithm : algorithms) {
    const char* name = algorithm == consvm::BiasAlgorithm::pa     ? "pa"
                       : algorithm == consvm::BiasAlgorithm::dwpa ? "dwpa"
                                                                  : "dsvm";
    for (const int n : config.bias_n) {
      double sum = 0.0;
      int count = 0;
      for (const consvm::BiasBatchResult& batch : batches) {
        if (batch.algorithm != algorithm) continue;
        for (const consvm::BiasEstimate& estimate : batch.report.estimates) {
          if (estimate.sample_size == n) {
            sum += estimate.mean_bias;
            ++count;
          }
        }
      }
      if (count > 0) {
        std::cout << name << " N=" << n << ": mean bias "
                  << consvm::format_real(sum / count, 6) << "\n";
      }
    }
  }
  return 0;
}

int run_toyfig(const consvm::ExperimentConfig& config) {
  const consvm::ToyfigResult result = consvm::run_toyfig(config);
  write_file(config.output, result.points_csv);
  const std::string lines_path = config.output + ".hyperplanes.gnuplot";
  write_file(lines_path, result.hyperplane_text);
  std::cout << "wrote points to " << config.output << " and hyperplanes to "
            << lines_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Distributed linear-SVM training strategies on a simulated cluster"};
  app.require_subcommand(1);

  struct SubcommandSpec {
    consvm::Subcommand id;
    const char* description;
    int (*runner)(const consvm::ExperimentConfig&);
  };
  const std::vector<SubcommandSpec> specs = {
      {consvm::Subcommand::sweep,
       "final accuracy of each method across partition counts", run_sweep},
      {consvm::Subcommand::trace,
       "per-iteration residual/objective/accuracy traces", run_trace},
      {consvm::Subcommand::timing, "wall clock per iteration", run_timing},
      {consvm::Subcommand::stability,
       "model distance under single-point replacement vs sample size",
       run_stability},
      {consvm::Subcommand::bias,
       "mean distance from a large-sample reference model", run_bias},
      {consvm::Subcommand::toyfig,
       "toy point cloud plus separating hyperplanes", run_toyfig},
  };

  struct SubcommandState {
    CLI::App* app = nullptr;
    std::string config_path;
  };
  std::vector<SubcommandState> states(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    states[i].app = app.add_subcommand(consvm::to_string(specs[i].id),
                                       specs[i].description);
    states[i].app->add_option("--config", states[i].config_path,
                              "key = value config file");
    states[i].app->allow_extras();
  }

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (!states[i].app->parsed()) continue;
    try {
      const consvm::ExperimentConfig config = load_config(
          states[i].config_path, states[i].app->remaining(), specs[i].id);
      return specs[i].runner(config);
    } catch (const consvm::usage_error& error) {
      std::cerr << "usage error: " << error.what() << "\n";
      return 2;
    } catch (const std::exception& error) {
      std::cerr << "error: " << error.what() << "\n";
      return 1;
    }
  }
  return 2;
}
