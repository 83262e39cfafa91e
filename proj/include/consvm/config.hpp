#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "consvm/csv.hpp"
#include "consvm/errors.hpp"

namespace consvm {

enum class Method { pa, wpa_central, dwpa, dwpa_acc, dsvm, dsvm_acc, svm_central };

inline const char* to_string(Method method) {
  switch (method) {
    case Method::pa: return "pa";
    case Method::wpa_central: return "wpa_central";
    case Method::dwpa: return "dwpa";
    case Method::dwpa_acc: return "dwpa_acc";
    case Method::dsvm: return "dsvm";
    case Method::dsvm_acc: return "dsvm_acc";
    case Method::svm_central: return "svm_central";
  }
  return "?";
}

inline std::optional<Method> method_from_string(std::string_view name) {
  for (const Method m :
       {Method::pa, Method::wpa_central, Method::dwpa, Method::dwpa_acc,
        Method::dsvm, Method::dsvm_acc, Method::svm_central}) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

inline bool is_admm_method(Method method) {
  return method == Method::dwpa || method == Method::dwpa_acc ||
         method == Method::dsvm || method == Method::dsvm_acc;
}

inline bool is_accelerated(Method method) {
  return method == Method::dwpa_acc || method == Method::dsvm_acc;
}

enum class Subcommand { sweep, trace, timing, stability, bias, toyfig };

inline const char* to_string(Subcommand c) {
  switch (c) {
    case Subcommand::sweep: return "sweep";
    case Subcommand::trace: return "trace";
    case Subcommand::timing: return "timing";
    case Subcommand::stability: return "stability";
    case Subcommand::bias: return "bias";
    case Subcommand::toyfig: return "toyfig";
  }
  return "?";
}

// Flat key/value experiment configuration. Every knob is a named key;
// values come from an optional `key = value` file overridden by CLI
// flags. Unknown keys and out-of-range values are rejected with the key
// name in the error.
struct ExperimentConfig {
  std::vector<Method> methods;

  std::string data = "toy";  // "toy" | "libsvm"
  std::string train_path;
  std::string test_path;
  int toy_n = 2000;
  int toy_test_n = 2000;
  double toy_fraction = 0.2;

  std::vector<int> partitions = {50};
  double lambda = 1e-3;
  double wpa_lambda = 1e-3;

  double rho = 1.0;
  int max_iters = 500;
  double alpha = 1.5;  // applied to the *_acc methods only
  double residual_stop = 0.0;
  std::string loss_scale = "mean";  // "mean" | "unit"
  std::string init = "mean";        // "mean" | "ones"

  double tolerance = 1e-6;
  int max_epochs = 1000;

  std::vector<std::uint64_t> seeds = {0};
  std::string output;
  int threads = 1;

  // stability
  std::vector<std::pair<int, int>> sizes = {{8, 8}, {8, 32}, {8, 128}};
  int trials = 20;
  double stability_lambda = 0.1;

  // bias
  std::vector<int> bias_n = {3000, 6000};
  int bias_m = 50;
  int bias_trials = 5;
  int bias_batches = 10;
  int ref_factor = 50;
  double ref_tolerance = 1e-8;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t");
  return std::string(s.substr(begin, end - begin + 1));
}

inline std::vector<std::string> split_list(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find(sep, start);
    if (end == std::string_view::npos) end = s.size();
    const std::string item = trim(s.substr(start, end - start));
    if (!item.empty()) out.push_back(item);
    start = end + 1;
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    throw usage_error("key '" + key + "': cannot parse value '" + value + "'");
  }
  return out;
}

}  // namespace detail

namespace config_detail {

inline void assign(ExperimentConfig& config, const std::string& key,
                   const std::string& value) {
  using detail::parse_number;
  auto require = [&](bool ok, const char* what) {
    if (!ok) throw usage_error("key '" + key + "': " + what);
  };

  if (key == "method") {
    config.methods.clear();
    for (const std::string& name : detail::split_list(value, ',')) {
      const auto method = method_from_string(name);
      if (!method) {
        throw usage_error("key 'method': unknown method '" + name + "'");
      }
      config.methods.push_back(*method);
    }
    require(!config.methods.empty(), "empty method list");
  } else if (key == "data") {
    require(value == "toy" || value == "libsvm", "must be toy or libsvm");
    config.data = value;
  } else if (key == "train_path") {
    config.train_path = value;
  } else if (key == "test_path") {
    config.test_path = value;
  } else if (key == "toy_n") {
    config.toy_n = parse_number<int>(key, value);
    require(config.toy_n >= 4, "must be >= 4");
  } else if (key == "toy_test_n") {
    config.toy_test_n = parse_number<int>(key, value);
    require(config.toy_test_n >= 4, "must be >= 4");
  } else if (key == "toy_fraction") {
    config.toy_fraction = parse_number<double>(key, value);
    require(config.toy_fraction > 0.0 && config.toy_fraction < 1.0,
            "must lie in (0, 1)");
  } else if (key == "partitions") {
    config.partitions.clear();
    for (const std::string& item : detail::split_list(value, ',')) {
      const int m = parse_number<int>(key, item);
      require(m >= 1, "partition counts must be >= 1");
      config.partitions.push_back(m);
    }
    require(!config.partitions.empty(), "empty partition list");
  } else if (key == "lambda") {
    config.lambda = parse_number<double>(key, value);
    require(config.lambda > 0.0, "must be positive");
  } else if (key == "wpa_lambda") {
    config.wpa_lambda = parse_number<double>(key, value);
    require(config.wpa_lambda > 0.0, "must be positive");
  } else if (key == "rho") {
    config.rho = parse_number<double>(key, value);
    require(config.rho > 0.0, "must be positive");
  } else if (key == "max_iters") {
    config.max_iters = parse_number<int>(key, value);
    require(config.max_iters >= 1, "must be >= 1");
  } else if (key == "alpha") {
    config.alpha = parse_number<double>(key, value);
    require(config.alpha >= 1.0 && config.alpha <= 2.0,
            "must lie in [1, 2]");
  } else if (key == "residual_stop") {
    config.residual_stop = parse_number<double>(key, value);
    require(config.residual_stop >= 0.0, "must be >= 0");
  } else if (key == "loss_scale") {
    require(value == "mean" || value == "unit", "must be mean or unit");
    config.loss_scale = value;
  } else if (key == "init") {
    require(value == "mean" || value == "ones", "must be mean or ones");
    config.init = value;
  } else if (key == "tolerance") {
    config.tolerance = parse_number<double>(key, value);
    require(config.tolerance > 0.0, "must be positive");
  } else if (key == "max_epochs") {
    config.max_epochs = parse_number<int>(key, value);
    require(config.max_epochs >= 1, "must be >= 1");
  } else if (key == "seeds") {
    config.seeds.clear();
    for (const std::string& item : detail::split_list(value, ',')) {
      config.seeds.push_back(parse_number<std::uint64_t>(key, item));
    }
    require(!config.seeds.empty(), "empty seed list");
  } else if (key == "output") {
    config.output = value;
  } else if (key == "threads") {
    config.threads = parse_number<int>(key, value);
    require(config.threads >= 1, "must be >= 1");
  } else if (key == "sizes") {
    config.sizes.clear();
    for (const std::string& item : detail::split_list(value, ',')) {
      const auto x = item.find('x');
      if (x == std::string::npos) {
        throw usage_error("key 'sizes': expected MxL entries");
      }
      const int m = parse_number<int>(key, item.substr(0, x));
      const int l = parse_number<int>(key, item.substr(x + 1));
      require(m >= 1 && l >= 1, "sizes must be positive");
      config.sizes.emplace_back(m, l);
    }
    require(!config.sizes.empty(), "empty size list");
  } else if (key == "trials") {
    config.trials = parse_number<int>(key, value);
    require(config.trials >= 1, "must be >= 1");
  } else if (key == "stability_lambda") {
    config.stability_lambda = parse_number<double>(key, value);
    require(config.stability_lambda > 0.0, "must be positive");
  } else if (key == "bias_n") {
    config.bias_n.clear();
    for (const std::string& item : detail::split_list(value, ',')) {
      const int n = parse_number<int>(key, item);
      require(n >= 4, "sample sizes must be >= 4");
      config.bias_n.push_back(n);
    }
    require(!config.bias_n.empty(), "empty sample-size list");
  } else if (key == "bias_m") {
    config.bias_m = parse_number<int>(key, value);
    require(config.bias_m >= 1, "must be >= 1");
  } else if (key == "bias_trials") {
    config.bias_trials = parse_number<int>(key, value);
    require(config.bias_trials >= 2, "must be >= 2");
  } else if (key == "bias_batches") {
    config.bias_batches = parse_number<int>(key, value);
    require(config.bias_batches >= 1, "must be >= 1");
  } else if (key == "ref_factor") {
    config.ref_factor = parse_number<int>(key, value);
    require(config.ref_factor >= 1, "must be >= 1");
  } else if (key == "ref_tolerance") {
    config.ref_tolerance = parse_number<double>(key, value);
    require(config.ref_tolerance > 0.0, "must be positive");
  } else {
    throw usage_error("unknown key '" + key + "'");
  }
}

}  // namespace config_detail

// Parses the flat config text (`key = value` lines, '#' comments), then
// applies the flag overrides in order; flags win over file values.
inline ExperimentConfig parse_config(
    const std::string& file_text,
    const std::vector<std::pair<std::string, std::string>>& overrides,
    Subcommand subcommand) {
  ExperimentConfig config;
  std::istringstream in(file_text);
  std::string line;
  long line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    const std::string trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw usage_error("config line " + std::to_string(line_number) +
                        ": expected key = value");
    }
    config_detail::assign(config, detail::trim(trimmed.substr(0, eq)),
                          detail::trim(trimmed.substr(eq + 1)));
  }
  for (const auto& [key, value] : overrides) {
    config_detail::assign(config, key, value);
  }

  const bool needs_method = subcommand == Subcommand::sweep ||
                            subcommand == Subcommand::trace ||
                            subcommand == Subcommand::timing ||
                            subcommand == Subcommand::toyfig;
  if (needs_method && config.methods.empty()) {
    throw usage_error("key 'method' is required for " +
                      std::string(to_string(subcommand)));
  }
  if ((subcommand == Subcommand::trace || subcommand == Subcommand::timing)) {
    for (const Method m : config.methods) {
      if (!is_admm_method(m)) {
        throw usage_error(std::string("key 'method': ") + to_string(m) +
                          " has no iteration trace");
      }
    }
  }
  if (config.data == "libsvm" && config.train_path.empty()) {
    throw usage_error("key 'train_path' is required when data = libsvm");
  }
  if (config.output.empty()) {
    config.output = std::string(to_string(subcommand)) + ".csv";
  }
  return config;
}

// Canonical `key = value` text; parse_config(serialize_config(c), {}, s)
// reproduces c for any valid c.
inline std::string serialize_config(const ExperimentConfig& config) {
  std::ostringstream out;
  auto emit = [&out](const std::string& key, const std::string& value) {
    out << key << " = " << value << '\n';
  };
  if (!config.methods.empty()) {
    std::string joined;
    for (const Method m : config.methods) {
      if (!joined.empty()) joined += ',';
      joined += to_string(m);
    }
    emit("method", joined);
  }
  emit("data", config.data);
  if (!config.train_path.empty()) emit("train_path", config.train_path);
  if (!config.test_path.empty()) emit("test_path", config.test_path);
  emit("toy_n", std::to_string(config.toy_n));
  emit("toy_test_n", std::to_string(config.toy_test_n));
  emit("toy_fraction", format_real(config.toy_fraction, 17));
  {
    std::string joined;
    for (const int m : config.partitions) {
      if (!joined.empty()) joined += ',';
      joined += std::to_string(m);
    }
    emit("partitions", joined);
  }
  emit("lambda", format_real(config.lambda, 17));
  emit("wpa_lambda", format_real(config.wpa_lambda, 17));
  emit("rho", format_real(config.rho, 17));
  emit("max_iters", std::to_string(config.max_iters));
  emit("alpha", format_real(config.alpha, 17));
  emit("residual_stop", format_real(config.residual_stop, 17));
  emit("loss_scale", config.loss_scale);
  emit("init", config.init);
  emit("tolerance", format_real(config.tolerance, 17));
  emit("max_epochs", std::to_string(config.max_epochs));
  {
    std::string joined;
    for (const std::uint64_t s : config.seeds) {
      if (!joined.empty()) joined += ',';
      joined += std::to_string(s);
    }
    emit("seeds", joined);
  }
  emit("output", config.output);
  emit("threads", std::to_string(config.threads));
  {
    std::string joined;
    for (const auto& [m, l] : config.sizes) {
      if (!joined.empty()) joined += ',';
      joined += std::to_string(m) + "x" + std::to_string(l);
    }
    emit("sizes", joined);
  }
  emit("trials", std::to_string(config.trials));
  emit("stability_lambda", format_real(config.stability_lambda, 17));
  {
    std::string joined;
    for (const int n : config.bias_n) {
      if (!joined.empty()) joined += ',';
      joined += std::to_string(n);
    }
    emit("bias_n", joined);
  }
  emit("bias_m", std::to_string(config.bias_m));
  emit("bias_trials", std::to_string(config.bias_trials));
  emit("bias_batches", std::to_string(config.bias_batches));
  emit("ref_factor", std::to_string(config.ref_factor));
  emit("ref_tolerance", format_real(config.ref_tolerance, 17));
  return out.str();
}

}  // namespace consvm
