#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "symflow/harness/suites.hpp"

using namespace symflow::harness;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("symflow_harness_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::vector<std::string> lines(const std::filesystem::path& file) {
  std::ifstream in(file);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string slurp(const std::filesystem::path& file) {
  std::ifstream in(file);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string f; std::getline(ss, f, ',');) out.push_back(f);
  if (!s.empty() && s.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

TEST(Config, TextOverridesAndEcho) {
  RunConfig c;
  load_config_text(c,
                   "# comment\n"
                   "suite = flow\n"
                   "seed = 42   # trailing comment\n"
                   "fixture = perturbed_line\n"
                   "amplitude = 0.05\n"
                   "kato_sigmas = 0.55, 0.6\n"
                   "mean_curvature = cotangent\n");
  EXPECT_EQ(c.suite, Suite::flow);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.flow.fixture.kind, symflow::flow::FixtureKind::perturbed_line);
  EXPECT_DOUBLE_EQ(c.flow.fixture.amplitude, 0.05);
  EXPECT_EQ(c.kato_sigmas, (std::vector<double>{0.55, 0.6}));

  // The echo reproduces the configuration exactly.
  RunConfig d;
  std::string text;
  for (const auto& [k, v] : echo(c)) text += k + " = " + v + "\n";
  load_config_text(d, text);
  EXPECT_EQ(echo(c), echo(d));

  set_option(c, "lambda", "1.002");
  EXPECT_EQ(c.lambda_min, 1.002);
  EXPECT_EQ(c.lambda_max, 1.002);
  EXPECT_EQ(c.lambda_points, 1);
}

TEST(Config, MalformedInputIsAConfigError) {
  RunConfig c;
  EXPECT_THROW(set_option(c, "nope", "1"), ConfigError);
  EXPECT_THROW(set_option(c, "samples", "ten"), ConfigError);
  EXPECT_THROW(set_option(c, "samples", "10x"), ConfigError);
  EXPECT_THROW(set_option(c, "suite", "everything"), ConfigError);
  EXPECT_THROW(set_option(c, "fixture", "sphere"), ConfigError);
  EXPECT_THROW(load_config_text(c, "samples 10\n"), ConfigError);
  try {
    load_config_text(c, "seed = 1\nfoo = 2\n", "my.cfg");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("my.cfg:2"), std::string::npos);
  }
  EXPECT_THROW(load_config_file(c, "/nonexistent/symflow.cfg"), ConfigError);
}

TEST(Config, ValidationFollowsTheHypothesisRanges) {
  RunConfig c;
  c.suite = Suite::constants;
  EXPECT_NO_THROW(validate(c));
  c.lambda_max = 2.0;
  EXPECT_THROW(validate(c), ConfigError);
  c = RunConfig{};
  c.suite = Suite::constants;
  c.K = 3.0;
  EXPECT_THROW(validate(c), ConfigError);
  c = RunConfig{};
  c.suite = Suite::bounds;
  c.kato_sigmas = {0.7};
  EXPECT_THROW(validate(c), ConfigError);
  c = RunConfig{};
  c.suite = Suite::flow;
  c.flow.density_radius = 1.0;  // 2r beyond the injectivity radius pi/2 at k = 4
  EXPECT_THROW(validate(c), ConfigError);
  c = RunConfig{};
  c.samples = -1;
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Suites, IdentitiesPassAndAreDeterministic) {
  RunConfig c;
  c.samples = 50;
  c.out_dir.clear();
  const Report a = run_suite(c);
  const Report b = run_suite(c);
  EXPECT_TRUE(a.passed());
  EXPECT_EQ(a.to_json(false), b.to_json(false));
  EXPECT_LT(a.find("polarization_residual")->value, 1e-9);
  EXPECT_EQ(a.find("polarization_residual")->evaluated, 500u);
  c.seed = 2;
  EXPECT_NE(run_suite(c).to_json(false), a.to_json(false));
}

TEST(Suites, ZeroSamplesIsAVacuousPassWithAWarning) {
  RunConfig c;
  c.samples = 0;
  c.out_dir.clear();
  for (Suite s : {Suite::identities, Suite::bounds}) {
    c.suite = s;
    const Report r = run_suite(c);
    EXPECT_TRUE(r.passed());
    ASSERT_FALSE(r.warnings.empty());
    EXPECT_NE(r.warnings.front().find("no samples"), std::string::npos);
  }
}

TEST(Suites, SmallBoundsRun) {
  RunConfig c;
  c.suite = Suite::bounds;
  c.samples = 5;
  c.frames = 50;
  c.eps_min = 0.001;
  c.eps_max = 0.002;  // keeps lambda inside the |w|^2 bound's range
  c.out_dir.clear();
  const Report r = run_suite(c);
  EXPECT_TRUE(r.passed()) << r.summary();
  EXPECT_EQ(r.find("w_bound_sampled")->evaluated, 250u);
  EXPECT_EQ(r.find("eco_sampled")->evaluated, 250u);
  ASSERT_NE(r.find("kato_sigma_0.6667"), nullptr);
}

TEST(Suites, ConstantsTablesAndCertificates) {
  RunConfig c;
  c.suite = Suite::constants;
  c.lambda_points = 101;
  c.sigma_points = 100;
  c.cert_lambda_points = 5;
  c.cert_sigma_points = 4;
  c.out_dir = scratch_dir("constants");
  Report r = run_suite(c);
  EXPECT_TRUE(r.passed()) << r.summary();

  const auto rows = lines(c.out_dir / "constants.csv");
  ASSERT_EQ(rows.size(), 1u + 5 * 4);
  EXPECT_EQ(rows[0],
            "lambda,sigma,K,k1,delta_new,delta_LY_a,delta_LY_b,b,a1,a2,a3,t0,delta,C1_bound,f_at_1,"
            "delta_small_energy,status");
  // Row for lambda = 1, sigma = 2/3.
  const auto f = split(rows[4]);
  EXPECT_EQ(std::stod(f[0]), 1.0);
  EXPECT_EQ(std::stod(f[1]), 2.0 / 3.0);
  EXPECT_EQ(std::stod(f[4]), 0.0);
  EXPECT_NEAR(std::stod(f[11]), 5.0 / 6.0, 1e-12);
  EXPECT_EQ(f.back(), "ok");
  EXPECT_EQ(lines(c.out_dir / "thresholds.csv").size(), 102u);
  EXPECT_TRUE(std::filesystem::exists(c.out_dir / "report.json"));

  c.strict_literal = true;
  run_suite(c);
  EXPECT_NE(lines(c.out_dir / "constants.csv")[0].find("delta_small_energy,delta_small_energy_literal"),
            std::string::npos);
  EXPECT_NE(lines(c.out_dir / "thresholds.csv")[0].find("delta_small_energy_literal"), std::string::npos);
  std::filesystem::remove_all(c.out_dir);
}

TEST(Suites, ConstantsFlagCellsOutsideTheHypotheses) {
  RunConfig c;
  c.suite = Suite::constants;
  c.lambda_points = 3;
  c.sigma_points = 3;
  c.cert_lambda_max = 1.01;
  c.cert_lambda_points = 4;
  c.cert_sigma_points = 2;
  c.out_dir = scratch_dir("flagged");
  const Report r = run_suite(c);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.exit_status(), 1);
  const Check* hyp = r.find("grid_within_hypotheses");
  EXPECT_EQ(hyp->violations, 4u);
  EXPECT_NEAR(hyp->offending.front().second, 1.005, 1e-12);
  int flagged = 0;
  for (const auto& row : lines(c.out_dir / "constants.csv")) flagged += row.find("hypothesis violated") != std::string::npos;
  EXPECT_EQ(flagged, 4);
  std::filesystem::remove_all(c.out_dir);
}

TEST(Suites, FlowWritesOnlyIntoItsDirectory) {
  RunConfig c;
  c.suite = Suite::flow;
  c.flow.fixture.resolution = 16;
  c.flow.steps = 10;
  c.snapshot_every = 5;
  c.out_dir = scratch_dir("flow");
  const Report r = run_suite(c);
  EXPECT_TRUE(r.passed()) << r.summary();
  std::vector<std::string> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(c.out_dir))
    if (e.is_regular_file()) files.push_back(std::filesystem::relative(e.path(), c.out_dir).string());
  std::sort(files.begin(), files.end());
  EXPECT_EQ(files, (std::vector<std::string>{"diagnostics.csv", "report.json", "snapshots/step_000000.mesh",
                                             "snapshots/step_000005.mesh", "snapshots/step_000010.mesh"}));
  EXPECT_EQ(lines(c.out_dir / "diagnostics.csv").size(), 12u);

  const auto j = nlohmann::json::parse(slurp(c.out_dir / "report.json"));
  EXPECT_EQ(j["suite"], "flow");
  EXPECT_EQ(j["passed"], true);
  EXPECT_EQ(j["config"]["steps"], "10");
  EXPECT_TRUE(j.contains("wall_seconds"));
  std::filesystem::remove_all(c.out_dir);
}

TEST(Suites, RejectedFixtureIsAConfigError) {
  RunConfig c;
  c.suite = Suite::flow;
  c.flow.fixture.kind = symflow::flow::FixtureKind::perturbed_line;
  c.flow.fixture.amplitude = 5.0;
  c.flow.fixture.resolution = 16;
  c.out_dir.clear();
  EXPECT_THROW(run_suite(c), ConfigError);
}

TEST(Suites, HaltedFlowFailsWithAReason) {
  RunConfig c;
  c.suite = Suite::flow;
  c.flow.fixture.kind = symflow::flow::FixtureKind::perturbed_line;
  c.flow.fixture.amplitude = 0.05;
  c.flow.fixture.resolution = 16;
  c.flow.steps = 5;
  c.flow.min_dt = 1.0;  // every step underflows
  c.out_dir.clear();
  const Report r = run_suite(c);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.halt_reason.empty());
  EXPECT_NE(r.summary().find("HALT"), std::string::npos);
}

TEST(Report, NonFiniteValuesBecomeNull) {
  Report r;
  r.suite = "x";
  r.metrics = {{"a", std::numeric_limits<double>::infinity()}, {"b", 1.5}};
  const auto j = nlohmann::json::parse(r.to_json());
  EXPECT_TRUE(j["metrics"]["a"].is_null());
  EXPECT_EQ(j["metrics"]["b"], 1.5);
}
