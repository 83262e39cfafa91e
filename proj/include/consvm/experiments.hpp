#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "consvm/admm.hpp"
#include "consvm/config.hpp"
#include "consvm/csv.hpp"
#include "consvm/dataset.hpp"
#include "consvm/errors.hpp"
#include "consvm/model_bank.hpp"
#include "consvm/stability.hpp"
#include "consvm/svm.hpp"
#include "consvm/wpa.hpp"

namespace consvm {

struct ExperimentData {
  LabeledDataset train;
  std::optional<LabeledDataset> test;
};

// Loads and bias-augments the configured data source. Toy samples are
// drawn per seed from independent generator lanes; LIBSVM train/test
// files are forced to a common dimension before augmentation.
inline ExperimentData load_experiment_data(const ExperimentConfig& config,
                                           std::uint64_t seed) {
  ExperimentData data;
  if (config.data == "toy") {
    const SplitMix64 root(seed);
    data.train = augment_bias(toy_gaussian_mixture(
        config.toy_n, config.toy_fraction, root.split(1).next()));
    data.test = augment_bias(toy_gaussian_mixture(
        config.toy_test_n, config.toy_fraction, root.split(2).next()));
    return data;
  }

  std::ifstream train_file(config.train_path);
  if (!train_file) {
    throw setup_error("cannot open train file '" + config.train_path + "'");
  }
  LabeledDataset train = parse_libsvm(train_file);
  std::optional<LabeledDataset> test;
  if (!config.test_path.empty()) {
    std::ifstream test_file(config.test_path);
    if (!test_file) {
      throw setup_error("cannot open test file '" + config.test_path + "'");
    }
    test = parse_libsvm(test_file);
    const std::int32_t dim = std::max(train.dimension, test->dimension);
    train.dimension = dim;
    test->dimension = dim;
  }
  data.train = augment_bias(train);
  if (test) data.test = augment_bias(*test);
  return data;
}

namespace detail {

inline std::string padded(std::uint64_t value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

inline std::string cell_id(Subcommand subcommand, int m, std::uint64_t seed,
                           const std::string& method = {}) {
  std::string id = std::string(to_string(subcommand)) + "/M" +
                   padded(static_cast<std::uint64_t>(m), 6) + "/seed" +
                   padded(seed, 6);
  if (!method.empty()) id += "/" + method;
  return id;
}

inline bool is_dwpa(Method method) {
  return method == Method::dwpa || method == Method::dwpa_acc;
}

inline bool needs_bank(Method method) {
  return method == Method::pa || method == Method::wpa_central ||
         is_dwpa(method);
}

inline AdmmConfig admm_from(const ExperimentConfig& config, Method method,
                            std::uint64_t seed) {
  AdmmConfig admm;
  admm.rho = config.rho;
  admm.lambda = is_dwpa(method) ? config.wpa_lambda : config.lambda;
  admm.max_iters = config.max_iters;
  if (is_accelerated(method)) admm.overrelax_alpha = config.alpha;
  admm.residual_stop = config.residual_stop;
  admm.subproblem.tolerance = config.tolerance;
  admm.subproblem.max_epochs = config.max_epochs;
  admm.subproblem.seed = seed;
  admm.unit_loss_scale = config.loss_scale == "unit";
  admm.ones_init = config.init == "ones";
  admm.threads = config.threads;
  return admm;
}

// Per-partition models with per-slave derived solver seeds.
inline ModelBank train_bank(const LabeledDataset& train,
                            const Partitioning& parts,
                            const ExperimentConfig& config,
                            std::uint64_t seed) {
  SolverSettings settings;
  settings.lambda = config.lambda;
  settings.tolerance = config.tolerance;
  settings.max_epochs = config.max_epochs;
  std::vector<WeightVector> models;
  models.reserve(parts.partitions.size());
  const SplitMix64 root(seed);
  for (std::size_t p = 0; p < parts.partitions.size(); ++p) {
    SolverSettings s = settings;
    s.seed = root.split(p).next();
    models.push_back(train_linear_svm(train, parts.partitions[p], s));
  }
  return ModelBank(models);
}

inline std::vector<std::int32_t> all_partition_indices(
    const Partitioning& parts) {
  std::vector<std::int32_t> indices;
  for (const auto& list : parts.partitions) {
    indices.insert(indices.end(), list.begin(), list.end());
  }
  return indices;
}

// Objective / accuracy of a final model, evaluated uniformly at the
// configured lambda over the partitioned training points.
inline void fill_model_metrics(ReportRow& row, const WeightVector& w,
                               const ExperimentData& data,
                               const Partitioning& parts, double lambda) {
  double hinge_sum = 0.0;
  std::int64_t correct = 0;
  std::int64_t total = 0;
  for (const auto& indices : parts.partitions) {
    for (const std::int32_t i : indices) {
      const LabeledExample& x = data.train.examples[i];
      hinge_sum += std::max(0.0, 1.0 - x.label * dot(w, x));
      correct += predict(w, x) == x.label ? 1 : 0;
      ++total;
    }
  }
  row.objective =
      lambda * w.squaredNorm() + hinge_sum / static_cast<double>(total);
  row.train_accuracy =
      static_cast<double>(correct) / static_cast<double>(total);
  if (data.test) row.test_accuracy = accuracy(w, *data.test);
}

}  // namespace detail

// Trains every requested method for each (partition count, seed) cell and
// records final test accuracy; cells that cannot be built produce an
// error row instead of aborting the sweep.
inline RunReport run_accuracy_sweep(const ExperimentConfig& config) {
  RunReport report;
  for (const int m : config.partitions) {
    for (const std::uint64_t seed : config.seeds) {
      const auto cell_start = std::chrono::steady_clock::now();
      ExperimentData data;
      Partitioning parts;
      try {
        data = load_experiment_data(config, seed);
        parts = partition(data.train, m, seed);
      } catch (const std::exception& error) {
        ReportRow row;
        row.experiment_id = detail::cell_id(Subcommand::sweep, m, seed);
        row.partition_count = m;
        row.seed = seed;
        row.status = error.what();
        report.rows.push_back(row);
        continue;
      }

      std::optional<ModelBank> bank;
      const SplitMix64 root(seed);
      const std::uint64_t bank_seed = root.split(7).next();
      for (const Method method : config.methods) {
        ReportRow row;
        row.experiment_id =
            detail::cell_id(Subcommand::sweep, m, seed, to_string(method));
        row.method = to_string(method);
        row.partition_count = m;
        row.partition_size = parts.group_size();
        row.seed = seed;
        try {
          if (detail::needs_bank(method) && !bank) {
            bank = detail::train_bank(data.train, parts, config, bank_seed);
          }
          WeightVector w;
          switch (method) {
            case Method::pa:
              w = combine(*bank, pa_weights(m));
              break;
            case Method::wpa_central: {
              SolverSettings s;
              s.lambda = config.wpa_lambda;
              s.tolerance = config.tolerance;
              s.max_epochs = config.max_epochs;
              s.seed = root.split(8).next();
              const WpaSolution solution =
                  solve_wpa_central(*bank, data.train, parts,
                                    config.wpa_lambda, s,
                                    default_gram_ridge(*bank));
              w = combine(*bank, solution.beta);
              row.iteration = solution.epochs;
              break;
            }
            case Method::dwpa:
            case Method::dwpa_acc: {
              DwpaEngine engine(
                  data.train, parts, *bank,
                  detail::admm_from(config, method, root.split(9).next()),
                  data.test ? &*data.test : nullptr);
              w = combine(*bank, engine.run());
              row.iteration = engine.iteration();
              row.primal_residual = engine.trace().back().primal_residual;
              row.bytes_communicated =
                  engine.bytes_per_iteration() * engine.iteration();
              break;
            }
            case Method::dsvm:
            case Method::dsvm_acc: {
              DsvmEngine engine(
                  data.train, parts,
                  detail::admm_from(config, method, root.split(9).next()),
                  data.test ? &*data.test : nullptr);
              w = engine.run();
              row.iteration = engine.iteration();
              row.primal_residual = engine.trace().back().primal_residual;
              row.bytes_communicated =
                  engine.bytes_per_iteration() * engine.iteration();
              break;
            }
            case Method::svm_central: {
              SolverSettings s;
              s.lambda = config.lambda;
              s.tolerance = config.tolerance;
              s.max_epochs = config.max_epochs;
              s.seed = root.split(10).next();
              w = train_linear_svm(data.train,
                                   detail::all_partition_indices(parts), s);
              break;
            }
          }
          detail::fill_model_metrics(row, w, data, parts, config.lambda);
        } catch (const std::exception& error) {
          row.status = error.what();
        }
        row.wall_clock_ms = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - cell_start)
                                .count();
        report.rows.push_back(row);
      }
    }
  }
  report.sort();
  return report;
}

// Per-iteration residual/objective/accuracy trace for the consensus
// methods.
inline RunReport run_convergence_trace(const ExperimentConfig& config,
                                       Subcommand label = Subcommand::trace) {
  RunReport report;
  for (const int m : config.partitions) {
    for (const std::uint64_t seed : config.seeds) {
      const ExperimentData data = load_experiment_data(config, seed);
      const Partitioning parts = partition(data.train, m, seed);
      const SplitMix64 root(seed);
      std::optional<ModelBank> bank;
      for (const Method method : config.methods) {
        std::vector<IterationRecord> trace;
        std::int64_t bytes_per_iteration = 0;
        if (detail::is_dwpa(method)) {
          if (!bank) {
            bank = detail::train_bank(data.train, parts, config,
                                      root.split(7).next());
          }
          DwpaEngine engine(
              data.train, parts, *bank,
              detail::admm_from(config, method, root.split(9).next()),
              data.test ? &*data.test : nullptr);
          engine.run();
          trace = engine.trace();
          bytes_per_iteration = engine.bytes_per_iteration();
        } else {
          DsvmEngine engine(
              data.train, parts,
              detail::admm_from(config, method, root.split(9).next()),
              data.test ? &*data.test : nullptr);
          engine.run();
          trace = engine.trace();
          bytes_per_iteration = engine.bytes_per_iteration();
        }
        for (const IterationRecord& record : trace) {
          ReportRow row;
          row.experiment_id =
              detail::cell_id(label, m, seed, to_string(method));
          row.method = to_string(method);
          row.partition_count = m;
          row.partition_size = parts.group_size();
          row.seed = seed;
          row.iteration = record.iteration;
          row.primal_residual = record.primal_residual;
          row.objective = record.objective;
          row.train_accuracy = record.train_accuracy;
          row.test_accuracy = record.test_accuracy;
          row.bytes_communicated = record.bytes_communicated;
          row.wall_clock_ms = record.wall_clock_ms;
          report.rows.push_back(row);
        }
        (void)bytes_per_iteration;
      }
    }
  }
  report.sort();
  return report;
}

struct TimingSummary {
  std::string method;
  int partition_count = 0;
  std::uint64_t seed = 0;
  int iterations = 0;
  double mean_ms_per_iteration = 0.0;
};

struct TimingResult {
  RunReport report;
  std::vector<TimingSummary> summaries;
};

// Trace run whose headline number is the average wall clock per
// iteration; reported, never asserted against any external timing.
inline TimingResult run_timing(const ExperimentConfig& config) {
  TimingResult result;
  result.report = run_convergence_trace(config, Subcommand::timing);
  // Aggregate in report order: rows are already sorted by id, iteration.
  std::string current;
  TimingSummary summary;
  double total_ms = 0.0;
  auto flush = [&]() {
    if (summary.iterations > 0) {
      summary.mean_ms_per_iteration = total_ms / summary.iterations;
      result.summaries.push_back(summary);
    }
  };
  for (const ReportRow& row : result.report.rows) {
    if (row.experiment_id != current) {
      flush();
      current = row.experiment_id;
      summary = TimingSummary{row.method, row.partition_count, row.seed, 0,
                              0.0};
      total_ms = 0.0;
    }
    ++summary.iterations;
    total_ms += row.wall_clock_ms.value_or(0.0);
  }
  flush();
  return result;
}

struct ToyfigResult {
  std::string points_csv;       // point cloud plus fitted models
  std::string hyperplane_text;  // gnuplot-ready separating lines
};

// Emits the toy point cloud and one separating hyperplane per requested
// method for external plotting.
inline ToyfigResult run_toyfig(const ExperimentConfig& config) {
  if (config.data != "toy") {
    throw usage_error("toyfig requires data = toy");
  }
  const std::uint64_t seed = config.seeds.front();
  const ExperimentData data = load_experiment_data(config, seed);
  const int m = config.partitions.front();
  const Partitioning parts = partition(data.train, m, seed);
  const SplitMix64 root(seed);
  std::optional<ModelBank> bank;

  std::ostringstream csv;
  write_csv_line(csv, {"row_type", "x", "y", "label", "method", "w1", "w2",
                       "w3"});
  for (const LabeledExample& x : data.train.examples) {
    double px = 0.0, py = 0.0;
    for (const Feature& f : x.features) {
      if (f.index == 1) px = f.value;
      if (f.index == 2) py = f.value;
    }
    write_csv_line(csv, {"point", format_real(px), format_real(py),
                         std::to_string(x.label), "", "", "", ""});
  }

  std::ostringstream gnuplot;
  gnuplot << "# separating lines of the toy experiment: w1*x + w2*y + w3 = 0\n";
  for (const Method method : config.methods) {
    WeightVector w;
    if (detail::needs_bank(method) && !bank) {
      bank = detail::train_bank(data.train, parts, config,
                                root.split(7).next());
    }
    switch (method) {
      case Method::pa:
        w = combine(*bank, pa_weights(m));
        break;
      case Method::wpa_central: {
        SolverSettings s{config.wpa_lambda, config.tolerance,
                         config.max_epochs, root.split(8).next()};
        w = combine(*bank, solve_wpa_central(*bank, data.train, parts,
                                             config.wpa_lambda, s,
                                             default_gram_ridge(*bank))
                               .beta);
        break;
      }
      case Method::dwpa:
      case Method::dwpa_acc: {
        DwpaEngine engine(
            data.train, parts, *bank,
            detail::admm_from(config, method, root.split(9).next()));
        w = combine(*bank, engine.run());
        break;
      }
      case Method::dsvm:
      case Method::dsvm_acc: {
        DsvmEngine engine(
            data.train, parts,
            detail::admm_from(config, method, root.split(9).next()));
        w = engine.run();
        break;
      }
      case Method::svm_central: {
        SolverSettings s{config.lambda, config.tolerance, config.max_epochs,
                         root.split(10).next()};
        w = train_linear_svm(data.train,
                             detail::all_partition_indices(parts), s);
        break;
      }
    }
    write_csv_line(csv, {"model", "", "", "", to_string(method),
                         format_real(w[0]), format_real(w[1]),
                         format_real(w[2])});
    gnuplot << to_string(method) << "(x) = -((" << format_real(w[0])
            << ")*x + (" << format_real(w[2]) << "))/(" << format_real(w[1])
            << ")\n";
  }

  return {csv.str(), gnuplot.str()};
}

inline std::string stability_csv(const StabilityReport& report) {
  std::ostringstream os;
  write_csv_line(os, {"experiment_id", "partitions", "partition_size", "ml",
                      "trial", "seed", "distance", "distance_unnormalized"});
  int trial_index = 0;
  for (const StabilityTrial& trial : report.trials) {
    write_csv_line(
        os, {"stability/ML" +
                 detail::padded(static_cast<std::uint64_t>(
                                    trial.partition_count) *
                                    static_cast<std::uint64_t>(
                                        trial.partition_size),
                                6),
             std::to_string(trial.partition_count),
             std::to_string(trial.partition_size),
             std::to_string(trial.partition_count * trial.partition_size),
             std::to_string(trial_index++), std::to_string(trial.seed),
             format_real(trial.theta_distance),
             format_real(trial.theta_distance_unnormalized)});
  }
  return os.str();
}

struct BiasBatchResult {
  BiasAlgorithm algorithm;
  int batch = 0;
  BiasReport report;
};

inline std::string bias_csv(const std::vector<BiasBatchResult>& batches) {
  std::ostringstream os;
  write_csv_line(os, {"experiment_id", "algorithm", "sample_size", "batch",
                      "trial", "bias"});
  for (const BiasBatchResult& batch : batches) {
    const char* name = batch.algorithm == BiasAlgorithm::pa     ? "pa"
                       : batch.algorithm == BiasAlgorithm::dwpa ? "dwpa"
                                                                : "dsvm";
    for (const BiasTrial& trial : batch.report.trials) {
      write_csv_line(
          os, {std::string("bias/") + name + "/N" +
                   detail::padded(static_cast<std::uint64_t>(
                                      trial.sample_size),
                                  6),
               name, std::to_string(trial.sample_size),
               std::to_string(batch.batch), std::to_string(trial.trial),
               format_real(trial.distance)});
    }
  }
  return os.str();
}

}  // namespace consvm
