#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "symflow/flow/flow.hpp"

namespace symflow::harness {

enum class Suite { identities, bounds, constants, flow };

Suite parse_suite(const std::string& name);
std::string to_string(Suite suite);

/// Invalid configuration; the CLI maps it to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Suite suite = Suite::identities;
  std::uint64_t seed = 1;
  /// Sampled tensors (identities), sampled models and Kato draws (bounds).
  int samples = 1000;
  /// Empty: nothing is written.
  std::filesystem::path out_dir = "symflow-out";

  // identities / bounds
  int tuples = 10;    ///< vector tuples per tensor
  int frames = 1000;  ///< random frames per sampled model
  double k = 1.0;     ///< holomorphic sectional curvature of the base model
  double eps_min = 0.001;  ///< perturbation sizes, relative to k; drawn log-uniformly
  double eps_max = 0.05;
  std::vector<double> kato_sigmas = {0.55, 0.6, 2.0 / 3.0};

  // constants
  double lambda_min = 1.0;
  double lambda_max = 1.9;
  int lambda_points = 10000;
  int sigma_points = 10000;
  double cert_lambda_max = 1.0 + 1.0 / 200.0;  ///< exclusive
  int cert_lambda_points = 200;
  int cert_sigma_points = 200;
  int cos2_points = 401;
  int x_points = 201;
  double K = 1.0;
  double k1 = 1.0;
  bool strict_literal = false;

  // flow
  flow::FlowConfig flow;
  int snapshot_every = 100;
};

/// Sets one key; throws ConfigError for unknown keys or malformed values.
void set_option(RunConfig& config, const std::string& key, const std::string& value);

/// Reads `key = value` lines ('#' starts a comment) on top of `config`.
void load_config_file(RunConfig& config, const std::filesystem::path& path);
void load_config_text(RunConfig& config, const std::string& text, const std::string& origin = "<text>");

/// Every key with its resolved value, in a fixed order.
std::vector<std::pair<std::string, std::string>> echo(const RunConfig& config);

/// Range checks against the hypotheses of the targeted suite; throws ConfigError.
void validate(const RunConfig& config);

}  // namespace symflow::harness
