// symflow: verification suites and flow runs.
//
//   symflow verify    --suite identities|bounds [--samples N] [--seed N]
//   symflow constants [--strict-literal-small-energy-threshold]
//   symflow flow      [--fixture perturbed_line --amplitude 0.05 --steps 500]
//
// Settings resolve as: built-in defaults, then --config FILE, then --set
// key=value, then the dedicated flags. Exit status: 0 all checks passed,
// 1 a check failed or the flow halted, 2 configuration error.

#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "symflow/harness/suites.hpp"

namespace {

using symflow::harness::ConfigError;
using symflow::harness::RunConfig;
using symflow::harness::Suite;

struct Options {
  std::string config;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<std::string> out;
  std::optional<std::string> suite;
  bool strict_literal = false;
  std::optional<std::string> fixture;
  std::optional<int> resolution;
  std::optional<double> amplitude;
  std::optional<int> steps;
  std::optional<double> k;
  bool quiet = false;
};

void add_common(CLI::App* app, Options& o) {
  app->add_option("--config", o.config, "key = value configuration file")->check(CLI::ExistingFile);
  app->add_option("--set", o.sets, "override one key, as key=value (repeatable)");
  app->add_option("--seed", o.seed, "random seed");
  app->add_option("--samples", o.samples, "sample count for the Monte Carlo audits");
  app->add_option("--out", o.out, "output directory (empty string: write nothing)");
  app->add_flag("--quiet", o.quiet, "print only the final verdict");
}

RunConfig resolve(Suite suite, const Options& o) {
  RunConfig c;
  c.suite = suite;
  if (!o.config.empty()) symflow::harness::load_config_file(c, o.config);
  for (const std::string& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    symflow::harness::set_option(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  // The subcommand decides the suite; verify may pick between its two.
  if (suite == Suite::identities || suite == Suite::bounds) {
    if (o.suite) c.suite = symflow::harness::parse_suite(*o.suite);
    else if (c.suite != Suite::bounds) c.suite = Suite::identities;
    if (c.suite != Suite::identities && c.suite != Suite::bounds)
      throw ConfigError("verify runs --suite identities or --suite bounds");
  } else {
    c.suite = suite;
  }
  if (o.seed) c.seed = *o.seed;
  if (o.samples) c.samples = *o.samples;
  if (o.out) c.out_dir = *o.out;
  if (o.strict_literal) c.strict_literal = true;
  if (o.fixture) symflow::harness::set_option(c, "fixture", *o.fixture);
  if (o.resolution) c.flow.fixture.resolution = *o.resolution;
  if (o.amplitude) c.flow.fixture.amplitude = *o.amplitude;
  if (o.steps) c.flow.steps = *o.steps;
  if (o.k) c.flow.k = *o.k;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kahler curvature audits, pinching constants and symplectic mean curvature flow"};
  app.require_subcommand(1);
  Options o;

  CLI::App* verify = app.add_subcommand("verify", "Monte Carlo audits of curvature identities and bounds");
  add_common(verify, o);
  verify->add_option("--suite", o.suite, "identities or bounds")->check(CLI::IsMember({"identities", "bounds"}));

  CLI::App* constants = app.add_subcommand("constants", "threshold and pinching-constant tables with sign certificates");
  add_common(constants, o);
  constants->add_flag("--strict-literal-small-energy-threshold", o.strict_literal,
                      "also tabulate the small-energy threshold with its constant as printed");

  CLI::App* flow = app.add_subcommand("flow", "mean curvature flow of a surface in CP^2");
  add_common(flow, o);
  flow->add_option("--fixture", o.fixture, "holomorphic_line, perturbed_line or graph_torus");
  flow->add_option("--resolution", o.resolution, "mesh resolution");
  flow->add_option("--amplitude", o.amplitude, "perturbation amplitude");
  flow->add_option("--steps", o.steps, "number of time steps");
  flow->add_option("--k", o.k, "holomorphic sectional curvature of CP^2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const Suite suite = verify->parsed() ? Suite::identities : constants->parsed() ? Suite::constants : Suite::flow;
    const RunConfig config = resolve(suite, o);
    const symflow::harness::Report report = symflow::harness::run_suite(config);
    if (o.quiet) {
      std::printf("%s: %s\n", report.suite.c_str(), report.passed() ? "passed" : "FAILED");
    } else {
      std::fputs(report.summary().c_str(), stdout);
    }
    if (!config.out_dir.empty()) std::printf("report: %s\n", (config.out_dir / "report.json").string().c_str());
    return report.exit_status();
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
