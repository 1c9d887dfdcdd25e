#include "symflow/harness/suites.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <random>

#include "symflow/flow/mesh_io.hpp"
#include "symflow/frame.hpp"
#include "symflow/pinching.hpp"
#include "symflow/tensor.hpp"

namespace symflow::harness {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Independent stream per (purpose, index) so that changing one sample count
// does not shift the draws of another audit.
std::mt19937_64 stream(std::uint64_t seed, std::uint32_t purpose, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), purpose,
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

std::uint64_t draw_seed(std::mt19937_64& rng) { return rng(); }

Vec4 gaussian4(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return {g(rng), g(rng), g(rng), g(rng)};
}

Vec4 unit4(std::mt19937_64& rng) {
  Vec4 v;
  do v = gaussian4(rng);
  while (v.norm() < 1e-6);
  return v.normalized();
}

// Uniformly random positively oriented orthonormal frame.
AdaptedFrame random_frame(std::mt19937_64& rng) {
  Mat4 m;
  for (int c = 0; c < 4; ++c) m.col(c) = gaussian4(rng);
  Mat4 q = Eigen::HouseholderQR<Mat4>(m).householderQ();
  if (q.determinant() < 0.0) q.col(3) = -q.col(3);
  return adapted_frame_from_basis(q);
}

// Frame in the z = 0, y >= 0 gauge with cos(alpha) >= 0.
AdaptedFrame random_gauge_frame(std::mt19937_64& rng) {
  for (;;) {
    Vec4 a = gaussian4(rng), b = gaussian4(rng);
    if (std::abs(apply_j(a).dot(b)) < 1e-9 * a.norm() * b.norm() || a.norm() < 1e-6) continue;
    if (apply_j(a).dot(b) < 0.0) std::swap(a, b);
    try {
      return adapted_frame_from_plane(a, b);
    } catch (const std::invalid_argument&) {
    }
  }
}

KahlerCurvatureModel sample_model(std::mt19937_64& rng, const RunConfig& c) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double eps = c.eps_min * std::pow(c.eps_max / c.eps_min, u(rng));
  return sample_kahler_tensor(draw_seed(rng), c.k, eps * c.k);
}

// Accumulates one check. `higher_is_worse` selects whether the worst value is
// the maximum (residuals) or the minimum (margins).
class Audit {
 public:
  Audit(std::string name, double threshold, bool higher_is_worse)
      : threshold_(threshold), higher_is_worse_(higher_is_worse) {
    check_.name = std::move(name);
    check_.threshold = threshold;
    check_.value = higher_is_worse ? -kInf : kInf;
  }

  /// Pass/fail decided by comparing against the threshold.
  void observe(double value, const NamedValues& at = {}) {
    const bool ok = higher_is_worse_ ? value <= threshold_ : value >= threshold_;
    observe(value, ok, at);
  }

  /// Pass/fail decided by the caller (module auditors carry their own slack).
  void observe(double value, bool ok, const NamedValues& at) {
    ++check_.evaluated;
    if (!ok) ++check_.violations;
    // Once a violation is seen only violations compete for the reported value.
    if (!ok && check_.violations == 1) {
      check_.value = value;
      check_.offending = at;
      return;
    }
    if (ok && check_.violations > 0) return;
    if (higher_is_worse_ ? value > check_.value : value < check_.value) {
      check_.value = value;
      check_.offending = at;
    }
  }

  Check finish(std::string detail = {}) {
    check_.passed = check_.violations == 0;
    if (check_.passed) check_.offending.clear();
    if (check_.evaluated == 0) {
      check_.value = 0.0;
      detail += detail.empty() ? "no samples" : " (no samples)";
    }
    check_.detail = std::move(detail);
    return check_;
  }

 private:
  Check check_;
  double threshold_;
  bool higher_is_worse_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Report start(const RunConfig& c) {
  Report r;
  r.suite = to_string(c.suite);
  r.seed = c.seed;
  r.config = echo(c);
  return r;
}

void identities(const RunConfig& c, Report& rep) {
  Audit sym("symmetry_defects", 1e-12, true);
  Audit pol("polarization_residual", 1e-9, true);
  for (int m = 0; m < c.samples; ++m) {
    auto rng = stream(c.seed, 1, static_cast<std::uint64_t>(m));
    std::normal_distribution<double> g;
    CurvatureTensor raw;
    for (double& v : raw.data()) v = g(rng);
    const CurvatureTensor r = project_to_kahler(raw);
    const double scale = r.scale();
    const NamedValues at = {{"sample", m}};
    sym.observe(symmetry_defects(r).max() / scale, at);
    for (int t = 0; t < c.tuples; ++t) {
      const PolarizationResiduals res = verify_polarization_identities(r, unit4(rng), unit4(rng), unit4(rng));
      pol.observe(std::max(res.sectional, res.mixed) / scale, {{"sample", m}, {"tuple", t}});
    }
  }
  rep.add(sym.finish("relative to max(1, max |R|)"));
  rep.add(pol.finish("sectional and mixed identities, relative"));
  Audit dim("kahler_space_dimension", 0.0, true);
  dim.observe(std::abs(kahler_space_dimension() - 9.0));
  rep.add(dim.finish("expected 9"));
}

void constant_model(const RunConfig& c, Report& rep) {
  const double k = c.k;
  const double tol = 1e-10 * k;
  const CurvatureTensor r = constant_hsc_tensor(k);
  Audit collapse("constant_eco_collapse", tol, true);
  Audit value("constant_eco_values", tol, true);
  Audit r1212("constant_r1212", tol, true);
  Audit ric("constant_ricci_j", tol, true);
  Audit bsc("constant_bsc_collapse", tol, true);
  auto rng = stream(c.seed, 2, 0);
  const int n = std::max(100, std::min(c.frames, 1000));
  for (int i = 0; i < n; ++i) {
    const AdaptedFrame f = i % 2 ? random_frame(rng) : random_gauge_frame(rng);
    const NamedValues at = {{"frame", i}, {"cos_alpha", f.cos_alpha}};
    const EcoReport eco = check_eco_bounds(r, f, k, k);
    for (const EcoItem& item : eco.items) {
      collapse.observe(item.check.upper - item.check.lower, at);
      const double target = item.item == 16 ? 0.0 : item.check.upper;
      value.observe(std::abs(item.check.value - target), at);
    }
    const double c2 = f.cos_alpha * f.cos_alpha;
    r1212.observe(std::abs(r.in_frame(f.e)(0, 1, 0, 1) - k * (1.0 + 3.0 * c2) / 4.0), at);
    if (i % 2 == 0) {
      const RicciJBound b = ricci_J_bound(r, f, k, k);
      const double expect = 1.5 * k * f.cos_alpha;
      ric.observe(std::max({std::abs(b.ric - expect), std::abs(b.ric_direct - expect)}), at);
    }
    const Vec4 x = f.col(0), y = f.col(2);
    const BoundCheck bc = check_bsc_bounds(r, x, y, k, k);
    bsc.observe(std::max(bc.upper - bc.lower, std::abs(bc.value - bc.upper)), at);
  }
  // Holomorphic frame: the Ricci lower bound is attained.
  const RicciJBound hol = ricci_J_bound(r, adapted_frame_from_plane(Vec4::UnitX(), apply_j(Vec4::UnitX())), k, k);
  ric.observe(std::abs(hol.ric - hol.lower), {{"cos_alpha", 1.0}});
  rep.add(collapse.finish("upper - lower over all 16 items"));
  rep.add(value.finish("|component - collapsed bound|"));
  rep.add(r1212.finish("R1212 = k(1 + 3 cos^2)/4"));
  rep.add(ric.finish("Ric(J e1, e2) = (3/2) k cos, equality at cos = 1"));
  rep.add(bsc.finish("orthogonal pair bounds collapse"));
}

void sampled_bounds(const RunConfig& c, Report& rep) {
  Audit bsc("bsc_sampled", 0.0, false);
  Audit eco("eco_sampled", 0.0, false);
  Audit ric("ricci_j_sampled", 0.0, false);
  Audit w("w_bound_sampled", 0.0, false);
  std::array<double, 16> item_margin;
  item_margin.fill(kInf);
  double lam_lo = kInf, lam_hi = 0.0;
  int w_models = 0;
  for (int m = 0; m < c.samples; ++m) {
    auto rng = stream(c.seed, 3, static_cast<std::uint64_t>(m));
    const KahlerCurvatureModel model = sample_model(rng, c);
    lam_lo = std::min(lam_lo, model.lambda);
    lam_hi = std::max(lam_hi, model.lambda);
    const bool w_in_range = model.lambda <= 1.0 + 1.0 / 100.0;
    w_models += w_in_range;
    for (int i = 0; i < c.frames; ++i) {
      const NamedValues at = {{"model", m}, {"frame", i}, {"lambda", model.lambda}};
      const AdaptedFrame f = random_frame(rng);
      const EcoReport er = check_eco_bounds(model.tensor, f, model.k1, model.k2);
      eco.observe(er.min_margin, er.ok, at);
      for (std::size_t j = 0; j < 16; ++j) item_margin[j] = std::min(item_margin[j], er.items[j].check.margin);

      const Vec4 x = gaussian4(rng);
      Vec4 y = gaussian4(rng);
      y -= y.dot(x) / x.squaredNorm() * x;
      const BoundCheck bc = check_bsc_bounds(model.tensor, x, y, model.k1, model.k2);
      bsc.observe(bc.margin, bc.ok, at);

      const AdaptedFrame gf = random_gauge_frame(rng);
      const RicciJBound rb = ricci_J_bound(model.tensor, gf, model.k1, model.k2);
      ric.observe(rb.ric - rb.lower, rb.ok, at);

      if (w_in_range) {
        const double wsq = normal_ricci_components(model.tensor, f).squaredNorm();
        const double bound = pinching::w_norm_bound(model.lambda, f.cos_alpha, f.y, f.z, model.k1);
        const double margin = bound - wsq;
        w.observe(margin, margin >= -kAuditSlack * model.tensor.scale(), at);
      }
    }
  }
  rep.add(bsc.finish("min margin of the orthogonal-pair bounds"));
  rep.add(eco.finish("min margin over the 16 frame-component items"));
  rep.add(ric.finish("min of Ric(J e1, e2) - lower bound"));
  rep.add(w.finish("models with lambda <= 1 + 1/100 only"));
  if (c.samples > 0 && w_models == 0)
    rep.warnings.push_back("no sampled model had lambda <= 1 + 1/100; the |w|^2 audit is vacuous");
  for (std::size_t j = 0; j < 16; ++j)
    rep.metrics.emplace_back("eco_item_" + std::to_string(j + 1) + "_min_margin", c.samples ? item_margin[j] : 0.0);
  rep.metrics.emplace_back("lambda_min", c.samples ? lam_lo : 0.0);
  rep.metrics.emplace_back("lambda_max", lam_hi);
  rep.metrics.emplace_back("w_bound_models", w_models);
}

void kato(const RunConfig& c, Report& rep) {
  std::normal_distribution<double> g;
  for (std::size_t si = 0; si < c.kato_sigmas.size(); ++si) {
    const double sigma = c.kato_sigmas[si];
    const double eta = 0.75 - sigma;
    const std::string tag = fmt("%.4g", sigma);
    Audit plus("kato_sigma_" + tag, 0.0, false);
    Audit minus("kato_sigma_" + tag + "_opposite_sign", 0.0, false);
    for (int i = 0; i < c.samples; ++i) {
      auto rng = stream(c.seed, 4 + static_cast<std::uint32_t>(si), static_cast<std::uint64_t>(i));
      const KahlerCurvatureModel model = sample_model(rng, c);
      const AdaptedFrame f = random_frame(rng);
      std::array<double, 8> s;
      for (double& v : s) v = g(rng);
      const NamedValues at = {{"sigma", sigma}, {"draw", i}, {"lambda", model.lambda}};
      for (CodazziSign sign : {CodazziSign::plus, CodazziSign::minus}) {
        const GradSFF t = build_grad_sff(s, model.tensor, f, sign);
        const KatoCheck kc = check_kato_inequality(t, model.tensor, f, eta, sign);
        (sign == CodazziSign::plus ? plus : minus).observe(kc.lhs - kc.rhs, kc.ok, at);
      }
    }
    rep.add(plus.finish("min of lhs - rhs, eta = 3/4 - sigma"));
    rep.add(minus.finish("same draws with the opposite Codazzi sign convention"));
  }
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_output(const RunConfig& c, Report& rep, const std::string& name) {
  std::filesystem::create_directories(c.out_dir);
  std::ofstream os(c.out_dir / name);
  if (!os) throw std::runtime_error("cannot write " + (c.out_dir / name).string());
  rep.outputs.push_back(name);
  return os;
}

const std::map<std::string, std::string>& sign_check_names() {
  static const std::map<std::string, std::string> m = {
      {"C1 bound <= 0", "sign_c1_closed_form"},   {"f(1) < 0", "sign_f_at_1"},
      {"C1 angle bound <= 0", "sign_c1_angle"},   {"f(t) <= 0 above delta", "sign_f_above_delta"},
      {"C2 <= f majorant", "sign_c2_majorant"},   {"C2 <= 0", "sign_c2"},
      {"C2 tilde <= 0", "sign_c2_tilde"},
  };
  return m;
}

}  // namespace

double RefinementStudy::min_ratio() const {
  double r = kInf;
  for (double x : ratios) r = std::min(r, x);
  return r;
}

Report run_verify(const RunConfig& c) {
  if (c.suite != Suite::identities && c.suite != Suite::bounds)
    throw ConfigError("verify runs the identities or bounds suite");
  Report rep = start(c);
  if (c.samples == 0) rep.warnings.push_back("no samples: the sampled audits are vacuous");
  if (c.suite == Suite::identities) {
    identities(c, rep);
  } else {
    constant_model(c, rep);
    sampled_bounds(c, rep);
    kato(c, rep);
  }
  return rep;
}

Report run_constants(const RunConfig& c) {
  if (c.suite != Suite::constants) throw ConfigError("constants runs the constants suite");
  using namespace pinching;
  Report rep = start(c);
  const bool write = !c.out_dir.empty();

  const std::vector<double> lam = linspace(c.lambda_min, c.lambda_max, c.lambda_points);
  std::vector<double> sig;
  for (int j = 1; j <= c.sigma_points; ++j) sig.push_back(0.5 + (1.0 / 6.0) * j / c.sigma_points);
  sig.back() = 2.0 / 3.0;

  if (write) {
    std::ofstream os = open_output(c, rep, "thresholds.csv");
    os << "lambda,delta_new,delta_LY_a,delta_LY_b,delta_small_energy";
    if (c.strict_literal) os << ",delta_small_energy_literal";
    os << "\n";
    for (double l : lam) {
      const AngleThresholds t = angle_thresholds(l);
      os << csv_num(l) << ',' << csv_num(t.delta_new) << ',' << csv_num(t.delta_ly_a) << ',' << csv_num(t.delta_ly_b)
         << ',' << csv_num(t.delta_small_energy);
      if (c.strict_literal) os << ',' << csv_num(t.delta_small_energy_literal);
      os << "\n";
    }
  }

  const ThresholdReport thresholds = threshold_checks(lam, sig);
  Audit dom("threshold_dominance", -1e-12, false);
  Audit t0b("t0_angle_bound", -1e-12, false);
  for (const GridViolation& v : thresholds.violations)
    (v.check == "threshold dominance" ? dom : t0b).observe(v.margin, false, {{"lambda", v.lambda}, {"sigma", v.sigma}});
  // Re-express the counts: the module reports minima and violations only.
  Check dc = dom.finish("min(delta_LY_a, delta_LY_b) - delta_new over the lambda grid");
  dc.evaluated = thresholds.dominance_points;
  if (dc.passed) dc.value = thresholds.dominance_min_margin;
  rep.add(dc);
  Check tc = t0b.finish("(7s - 3)/(3s) - t0 at lambda = 1 over the sigma grid");
  tc.evaluated = thresholds.t0_points - thresholds.t0_vacuous;
  if (tc.passed) tc.value = thresholds.t0_min_margin;
  rep.add(tc);
  rep.metrics.emplace_back("t0_vacuous_sigma_points", static_cast<double>(thresholds.t0_vacuous));

  Audit spot("spot_values", 1e-12, true);
  spot.observe(std::abs(angle_thresholds(1.0).delta_new), {{"lambda", 1.0}});
  spot.observe(std::abs(angle_thresholds(2.0 - 1e-7).delta_new - 1.0), {{"lambda", 2.0 - 1e-7}});
  const auto t0 = pinching_constants({1.0, 2.0 / 3.0, c.K, c.k1}).t0;
  spot.observe(t0 ? std::abs(*t0 - 5.0 / 6.0) : kInf, {{"lambda", 1.0}, {"sigma", 2.0 / 3.0}});
  rep.add(spot.finish("delta_new(1) = 0, delta_new(2-) = 1, t0(1, 2/3) = 5/6"));

  const std::vector<double> cos2 = linspace(0.0, 1.0, c.cos2_points);
  std::map<std::string, Audit> sign;
  for (const auto& [module_name, name] : sign_check_names()) sign.emplace(module_name, Audit(name, 0.0, false));
  Audit hyp("grid_within_hypotheses", 0.0, true);
  Audit ode("test_function_ode", 1e-12, true);
  Audit range("test_function_range", 0.0, false);

  std::ofstream csv;
  if (write) {
    csv = open_output(c, rep, "constants.csv");
    csv << "lambda,sigma,K,k1,delta_new,delta_LY_a,delta_LY_b,b,a1,a2,a3,t0,delta,C1_bound,f_at_1,delta_small_energy";
    if (c.strict_literal) csv << ",delta_small_energy_literal";
    csv << ",status\n";
  }
  for (int i = 0; i < c.cert_lambda_points; ++i) {
    const double l = 1.0 + (c.cert_lambda_max - 1.0) * i / c.cert_lambda_points;
    const double floor = sigma_floor(l);
    const AngleThresholds th = angle_thresholds(l);
    for (int j = 1; j <= c.cert_sigma_points; ++j) {
      const double s = j == c.cert_sigma_points ? 2.0 / 3.0 : floor + (2.0 / 3.0 - floor) * j / c.cert_sigma_points;
      const PinchingParams p{l, s, c.K, c.k1};
      const NamedValues at = {{"lambda", l}, {"sigma", s}};
      const auto violation = hypothesis_violation(p);
      hyp.observe(violation ? 1.0 : 0.0, at);
      std::string status = violation ? "hypothesis violated: " + *violation : "ok";
      PinchingConstants pc;
      SignAuditReport sa;
      if (!violation) {
        pc = pinching_constants(p);
        sa = c1_c2_sign_audit(p, cos2);
        const std::map<std::string, double> margins = {
            {"C1 bound <= 0", -sa.c1_bound},           {"f(1) < 0", -sa.f_at_1},
            {"C1 angle bound <= 0", -sa.c1_angle_max}, {"f(t) <= 0 above delta", -sa.f_max_on_grid},
            {"C2 <= f majorant", -sa.c2_minus_f_max},  {"C2 <= 0", -sa.c2_max_on_grid},
            {"C2 tilde <= 0", -sa.c2_tilde_max},
        };
        std::map<std::string, NamedValues> failed;
        for (const GridViolation& v : sa.violations)
          if (!failed.count(v.check)) failed[v.check] = {{"lambda", l}, {"sigma", s}, {"t", v.t}};
        for (auto& [module_name, audit] : sign) {
          const auto f = failed.find(module_name);
          audit.observe(margins.at(module_name), f == failed.end(), f == failed.end() ? at : f->second);
        }
        if (!sa.ok()) status = "sign certificate violated";
        const double xmax = 1.0 / std::sqrt(pc.delta);
        for (double x : linspace(1.0, xmax, c.x_points)) {
          const TestFunctionValues tf = test_functions_fg(s, pc.delta, std::min(x, xmax));
          ode.observe(tf.ode_residual, {{"lambda", l}, {"sigma", s}, {"x", x}});
          range.observe(tf.range_ok ? 0.0 : -1.0, tf.range_ok, {{"lambda", l}, {"sigma", s}, {"x", x}});
        }
      }
      if (write) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        csv << csv_num(l) << ',' << csv_num(s) << ',' << csv_num(c.K) << ',' << csv_num(c.k1) << ','
            << csv_num(th.delta_new) << ',' << csv_num(th.delta_ly_a) << ',' << csv_num(th.delta_ly_b) << ','
            << csv_num(violation ? nan : pc.b) << ',' << csv_num(violation ? nan : pc.a1) << ','
            << csv_num(violation ? nan : pc.a2) << ',' << csv_num(violation ? nan : pc.a3) << ','
            << (pc.t0 && !violation ? csv_num(*pc.t0) : "") << ',' << csv_num(violation ? nan : pc.delta) << ','
            << csv_num(violation ? nan : sa.c1_bound) << ',' << csv_num(violation ? nan : sa.f_at_1) << ','
            << csv_num(th.delta_small_energy);
        if (c.strict_literal) csv << ',' << csv_num(th.delta_small_energy_literal);
        csv << ',' << status << "\n";
      }
    }
  }
  rep.add(hyp.finish("cells outside the theorem's (lambda, sigma, K) range are flagged"));
  for (const auto& [module_name, name] : sign_check_names()) {
    Check ch = sign.at(module_name).finish(module_name);
    rep.add(ch);
  }
  rep.add(ode.finish("|-4 g' + 8 g / x - 2| on [1, 1/sqrt(delta)]"));
  rep.add(range.finish("1 <= f <= 1/(2 s sqrt(delta) - (2 s - 1))^2 and x/g >= 4 s"));
  return rep;
}

Report run_flow(const RunConfig& c) {
  if (c.suite != Suite::flow) throw ConfigError("flow runs the flow suite");
  Report rep = start(c);
  const bool write = !c.out_dir.empty();
  flow::SnapshotFn snap;
  if (write && c.snapshot_every > 0) {
    std::filesystem::create_directories(c.out_dir / "snapshots");
    snap = [&](int step, double t, const flow::SurfaceMesh& mesh) {
      char name[64];
      std::snprintf(name, sizeof name, "snapshots/step_%06d.mesh", step);
      std::ofstream os(c.out_dir / name);
      flow::write_snapshot(os, mesh, {"fixture " + flow::to_string(c.flow.fixture.kind), "step " + std::to_string(step),
                                      "t " + csv_num(t)});
      rep.outputs.emplace_back(name);
    };
  }
  flow::FlowDiagnostics d;
  try {
    d = flow::run_flow(c.flow, snap, c.snapshot_every);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("fixture rejected: ") + e.what());
  }
  if (write) {
    std::ofstream os = open_output(c, rep, "diagnostics.csv");
    flow::write_diagnostics_csv(os, d.records);
  }
  if (d.halted) rep.halt_reason = d.halt_reason;
  for (const flow::ClaimCheck& cc : d.checks) {
    if (!cc.enabled) {
      rep.warnings.push_back(cc.name + " not applicable: " + cc.disabled_reason);
      continue;
    }
    Check ch;
    ch.name = cc.name;
    ch.passed = cc.passed;
    ch.value = cc.value;
    ch.threshold = cc.threshold;
    ch.evaluated = d.records.size();
    ch.violations = cc.passed ? 0 : 1;
    ch.detail = cc.detail;
    rep.add(ch);
  }
  if (c.flow.fixture.kind == flow::FixtureKind::holomorphic_line) {
    Audit h("fixture_mean_curvature", 1e-10, true);
    for (const flow::FlowRecord& r : d.records) h.observe(r.max_hsq, {{"step", r.step}});
    rep.add(h.finish("max |H|^2 along the stationary holomorphic line"));
  }
  const flow::FlowRecord& last = d.records.back();
  rep.metrics = {{"vertices", d.vertices},
                 {"steps_run", last.step},
                 {"final_t", last.t},
                 {"initial_area", d.initial_area},
                 {"final_area", last.area},
                 {"c0", d.c0},
                 {"fitted_decay_rate", d.fitted_decay_rate},
                 {"expected_decay_rate", d.expected_decay_rate},
                 {"fitted_half_angle_rate", d.fitted_half_angle_rate},
                 {"expected_half_angle_rate", d.expected_half_angle_rate},
                 {"spacetime_abs_h", d.spacetime_abs_h},
                 {"spacetime_abs_h_bound", d.spacetime_abs_h_bound},
                 {"max_drift", d.max_drift},
                 {"max_projector_defect", d.max_projector_defect},
                 {"initial_min_cos", d.records.front().min_cos},
                 {"final_min_cos", last.min_cos}};
  return rep;
}

Report run_suite(const RunConfig& c) {
  validate(c);
  const auto t0 = std::chrono::steady_clock::now();
  Report rep;
  switch (c.suite) {
    case Suite::identities:
    case Suite::bounds: rep = run_verify(c); break;
    case Suite::constants: rep = run_constants(c); break;
    case Suite::flow: rep = run_flow(c); break;
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!c.out_dir.empty()) rep.write(c.out_dir);
  return rep;
}

RefinementStudy mean_curvature_refinement(const flow::FixtureSpec& fixture, double k,
                                          const std::vector<int>& resolutions) {
  const flow::AmbientCP2 amb(k);
  RefinementStudy s;
  for (int res : resolutions) {
    flow::FixtureSpec f = fixture;
    f.resolution = res;
    double hmax = 0.0;
    for (const auto& g : flow::vertex_geometry(flow::make_initial_surface(f, amb), amb))
      hmax = std::max(hmax, std::sqrt(g.hsq));
    s.resolutions.push_back(res);
    s.values.push_back(hmax);
  }
  for (std::size_t i = 0; i + 1 < s.values.size(); ++i) s.ratios.push_back(s.values[i] / s.values[i + 1]);
  return s;
}

RefinementStudy residual_refinement(const flow::FixtureSpec& fixture, double k, double cfl,
                                    const std::vector<int>& resolutions) {
  const flow::AmbientCP2 amb(k);
  RefinementStudy s;
  for (int res : resolutions) {
    flow::FixtureSpec f = fixture;
    f.resolution = res;
    const flow::SurfaceMesh m = flow::make_initial_surface(f, amb);
    const flow::MeshTopology topo = flow::MeshTopology::build(m, flow::stencil_points(flow::GeometryOptions{}.fit_degree));
    const flow::StepResult step = flow::mcf_step(m, amb, cfl, {}, &topo);
    s.resolutions.push_back(res);
    s.values.push_back(flow::cos_alpha_residual(step.geometry, flow::vertex_geometry(step.mesh, amb, {}, &topo), step.dt, k));
  }
  for (std::size_t i = 0; i + 1 < s.values.size(); ++i) s.ratios.push_back(s.values[i] / s.values[i + 1]);
  return s;
}

double stationary_drift(const flow::FixtureSpec& fixture, double k, double cfl, int steps) {
  const flow::AmbientCP2 amb(k);
  const flow::SurfaceMesh m0 = flow::make_initial_surface(fixture, amb);
  const flow::MeshTopology topo = flow::MeshTopology::build(m0, flow::stencil_points(flow::GeometryOptions{}.fit_degree));
  flow::SurfaceMesh m = m0;
  double drift = 0.0;
  for (int i = 0; i < steps; ++i) {
    m = flow::mcf_step(m, amb, cfl, {}, &topo).mesh;
    drift = std::max(drift, flow::max_displacement(m0, m, amb));
  }
  return drift;
}

}  // namespace symflow::harness
