#include "symflow/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "symflow/pinching.hpp"

namespace symflow::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec == std::errc() && r.ptr == v.data() + v.size()) return out;
  if (v == "inf") return std::numeric_limits<double>::infinity();
  throw ConfigError(key + ": not a number: '" + v + "'");
}

template <class Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out{};
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw ConfigError(key + ": not an integer: '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": not a boolean: '" + v + "'");
}

struct Entry {
  const char* key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define SYMFLOW_DOUBLE(name, field)                                                   \
  Entry {                                                                             \
    name, [](RunConfig& c, const std::string& v) { c.field = to_double(name, v); },   \
        [](const RunConfig& c) { return fmt(c.field); }                               \
  }
#define SYMFLOW_INT(name, field)                                                                  \
  Entry {                                                                                         \
    name, [](RunConfig& c, const std::string& v) { c.field = to_int<decltype(c.field)>(name, v); }, \
        [](const RunConfig& c) { return std::to_string(c.field); }                                \
  }

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {"suite", [](RunConfig& c, const std::string& v) { c.suite = parse_suite(v); },
       [](const RunConfig& c) { return to_string(c.suite); }},
      SYMFLOW_INT("seed", seed),
      SYMFLOW_INT("samples", samples),
      {"out", [](RunConfig& c, const std::string& v) { c.out_dir = v; },
       [](const RunConfig& c) { return c.out_dir.string(); }},
      SYMFLOW_INT("tuples", tuples),
      SYMFLOW_INT("frames", frames),
      SYMFLOW_DOUBLE("k", k),
      SYMFLOW_DOUBLE("eps_min", eps_min),
      SYMFLOW_DOUBLE("eps_max", eps_max),
      {"kato_sigmas",
       [](RunConfig& c, const std::string& v) {
         c.kato_sigmas.clear();
         std::stringstream ss(v);
         for (std::string item; std::getline(ss, item, ',');) c.kato_sigmas.push_back(to_double("kato_sigmas", trim(item)));
       },
       [](const RunConfig& c) {
         std::string s;
         for (double v : c.kato_sigmas) s += (s.empty() ? "" : ",") + fmt(v);
         return s;
       }},
      {"lambda",
       [](RunConfig& c, const std::string& v) {
         c.lambda_min = c.lambda_max = to_double("lambda", v);
         c.lambda_points = 1;
       },
       nullptr},
      SYMFLOW_DOUBLE("lambda_min", lambda_min),
      SYMFLOW_DOUBLE("lambda_max", lambda_max),
      SYMFLOW_INT("lambda_points", lambda_points),
      SYMFLOW_INT("sigma_points", sigma_points),
      SYMFLOW_DOUBLE("cert_lambda_max", cert_lambda_max),
      SYMFLOW_INT("cert_lambda_points", cert_lambda_points),
      SYMFLOW_INT("cert_sigma_points", cert_sigma_points),
      SYMFLOW_INT("cos2_points", cos2_points),
      SYMFLOW_INT("x_points", x_points),
      SYMFLOW_DOUBLE("K", K),
      SYMFLOW_DOUBLE("k1", k1),
      {"strict_literal_small_energy_threshold",
       [](RunConfig& c, const std::string& v) { c.strict_literal = to_bool("strict_literal_small_energy_threshold", v); },
       [](const RunConfig& c) { return std::string(c.strict_literal ? "true" : "false"); }},
      {"fixture", [](RunConfig& c, const std::string& v) {
         try {
           c.flow.fixture.kind = flow::parse_fixture_kind(v);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(e.what());
         }
       },
       [](const RunConfig& c) { return flow::to_string(c.flow.fixture.kind); }},
      SYMFLOW_INT("resolution", flow.fixture.resolution),
      SYMFLOW_DOUBLE("amplitude", flow.fixture.amplitude),
      SYMFLOW_DOUBLE("min_cos_floor", flow.fixture.min_cos_floor),
      SYMFLOW_DOUBLE("torus_r1", flow.fixture.torus.r1),
      SYMFLOW_DOUBLE("torus_r2", flow.fixture.torus.r2),
      SYMFLOW_DOUBLE("torus_amplitude", flow.fixture.torus.amplitude),
      SYMFLOW_INT("torus_p", flow.fixture.torus.p),
      SYMFLOW_INT("torus_q", flow.fixture.torus.q),
      SYMFLOW_DOUBLE("flow_k", flow.k),
      SYMFLOW_DOUBLE("cfl", flow.cfl),
      SYMFLOW_INT("steps", flow.steps),
      SYMFLOW_DOUBLE("horizon", flow.horizon),
      SYMFLOW_DOUBLE("min_dt", flow.min_dt),
      {"mean_curvature",
       [](RunConfig& c, const std::string& v) {
         if (v == "fit") c.flow.geometry.mean_curvature = flow::MeanCurvatureScheme::fit;
         else if (v == "cotangent") c.flow.geometry.mean_curvature = flow::MeanCurvatureScheme::cotangent;
         else throw ConfigError("mean_curvature: expected fit or cotangent, got '" + v + "'");
       },
       [](const RunConfig& c) {
         return std::string(c.flow.geometry.mean_curvature == flow::MeanCurvatureScheme::fit ? "fit" : "cotangent");
       }},
      SYMFLOW_INT("fit_degree", flow.geometry.fit_degree),
      SYMFLOW_INT("tilt_iterations", flow.geometry.tilt_iterations),
      SYMFLOW_DOUBLE("pinching_sigma", flow.geometry.sigma),
      SYMFLOW_DOUBLE("pinching_b", flow.geometry.b),
      SYMFLOW_DOUBLE("monotonicity_slack", flow.monotonicity_slack),
      SYMFLOW_DOUBLE("q_slack", flow.q_slack),
      SYMFLOW_DOUBLE("int_cos_tolerance", flow.int_cos_tolerance),
      SYMFLOW_DOUBLE("decay_fraction", flow.decay_fraction),
      SYMFLOW_INT("density_vertex", flow.density_vertex),
      SYMFLOW_DOUBLE("density_radius", flow.density_radius),
      SYMFLOW_INT("snapshot_every", snapshot_every),
  };
  return table;
}

#undef SYMFLOW_DOUBLE
#undef SYMFLOW_INT

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

Suite parse_suite(const std::string& name) {
  if (name == "identities") return Suite::identities;
  if (name == "bounds") return Suite::bounds;
  if (name == "constants") return Suite::constants;
  if (name == "flow") return Suite::flow;
  throw ConfigError("unknown suite '" + name + "' (expected identities, bounds, constants or flow)");
}

std::string to_string(Suite suite) {
  switch (suite) {
    case Suite::identities: return "identities";
    case Suite::bounds: return "bounds";
    case Suite::constants: return "constants";
    case Suite::flow: return "flow";
  }
  return "?";
}

void set_option(RunConfig& config, const std::string& key, const std::string& value) {
  for (const Entry& e : entries())
    if (key == e.key) {
      e.set(config, trim(value));
      return;
    }
  throw ConfigError("unknown configuration key '" + key + "'");
}

void load_config_text(RunConfig& config, const std::string& text, const std::string& origin) {
  std::istringstream is(text);
  int line_no = 0;
  for (std::string line; std::getline(is, line);) {
    ++line_no;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key = value");
    try {
      set_option(config, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void load_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  load_config_text(config, ss.str(), path.string());
}

std::vector<std::pair<std::string, std::string>> echo(const RunConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const Entry& e : entries())
    if (e.get) out.emplace_back(e.key, e.get(config));
  return out;
}

void validate(const RunConfig& c) {
  require(c.samples >= 0, "samples must be nonnegative");
  switch (c.suite) {
    case Suite::identities:
      require(c.tuples >= 1, "tuples must be positive");
      break;
    case Suite::bounds:
      require(c.frames >= 1, "frames must be positive");
      require(c.k > 0.0 && std::isfinite(c.k), "k must be positive");
      require(c.eps_min > 0.0 && c.eps_min <= c.eps_max, "need 0 < eps_min <= eps_max");
      require(c.eps_max <= 0.25, "eps_max above 0.25 k leaves the positive-curvature regime");
      for (double s : c.kato_sigmas)
        require(s > 0.5 && s <= 2.0 / 3.0 + 1e-15, "kato_sigmas must lie in (1/2, 2/3]; got " + fmt(s));
      break;
    case Suite::constants:
      require(c.lambda_min >= 1.0 && c.lambda_min <= c.lambda_max && c.lambda_max < 2.0,
              "lambda range must satisfy 1 <= lambda_min <= lambda_max < 2");
      require(c.lambda_points >= 1 && c.sigma_points >= 1, "grid sizes must be positive");
      require(c.cert_lambda_points >= 1 && c.cert_sigma_points >= 1, "grid sizes must be positive");
      require(c.cert_lambda_max > 1.0 && c.cert_lambda_max < 2.0, "cert_lambda_max must lie in (1, 2)");
      require(c.cos2_points >= 2 && c.x_points >= 2, "cos2_points and x_points must be at least 2");
      require(c.k1 > 0.0, "k1 must be positive");
      if (auto v = pinching::hypothesis_violation({1.0, 2.0 / 3.0, c.K, c.k1})) throw ConfigError(*v);
      break;
    case Suite::flow: {
      const auto& f = c.flow;
      require(f.k > 0.0 && std::isfinite(f.k), "flow_k must be positive");
      require(f.cfl > 0.0 && f.cfl <= 1.0, "cfl must lie in (0, 1]");
      require(f.steps >= 0, "steps must be nonnegative");
      require(f.horizon > 0.0, "horizon must be positive");
      require(f.fixture.resolution >= 8, "resolution must be at least 8");
      require(f.fixture.amplitude >= 0.0, "amplitude must be nonnegative");
      require(f.geometry.fit_degree >= 2 && f.geometry.fit_degree <= 6, "fit_degree must lie in [2, 6]");
      require(f.geometry.tilt_iterations >= 0, "tilt_iterations must be nonnegative");
      require(f.geometry.sigma > 0.5 && f.geometry.sigma <= 2.0 / 3.0 + 1e-15, "pinching_sigma must lie in (1/2, 2/3]");
      require(f.density_radius > 0.0 && 2.0 * f.density_radius < std::numbers::pi / std::sqrt(f.k),
              "density_radius must satisfy 0 < 2r < pi / sqrt(flow_k)");
      require(f.density_vertex >= 0, "density_vertex must be nonnegative");
      require(c.snapshot_every >= 0, "snapshot_every must be nonnegative");
      break;
    }
  }
}

}  // namespace symflow::harness
