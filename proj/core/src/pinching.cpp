#include "symflow/pinching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace symflow::pinching {

namespace {

constexpr double kGridSlack = 1e-12;

double ratio(double num, double a, double b) {
  const double den = std::sqrt(a * a + b * b);
  return den == 0.0 ? 0.0 : num / den;
}

std::string describe(const char* what, double value) {
  std::ostringstream os;
  os.precision(17);
  os << what << " (got " << value << ")";
  return os.str();
}

}  // namespace

AngleThresholds angle_thresholds(double lambda) {
  if (!(lambda >= 1.0 && lambda < 2.0)) throw std::invalid_argument("angle_thresholds: lambda must lie in [1, 2)");
  const double x = lambda - 1.0;
  AngleThresholds t;
  t.delta_new = ratio(29.0 * x, 48.0 - 24.0 * lambda, 29.0 * x);
  t.delta_ly_a = ratio(53.0 * x, 53.0 * x, 48.0 - 24.0 * lambda);
  t.delta_ly_b = ratio(8.0 * lambda - 5.0, 8.0 * lambda - 5.0, 12.0 - 6.0 * lambda);
  t.delta_small_energy = ratio(58.0 * x, 48.0 - 24.0 * lambda, 58.0 * x);
  t.delta_small_energy_literal = ratio(58.0 * x, 48.0 - 24.0, 58.0 * x);
  return t;
}

double sigma_floor(double lambda) {
  const double x = lambda - 1.0;
  return 0.5 + 24.0 * x / (1.0 - 34.0 * x);
}

std::optional<std::string> hypothesis_violation(const PinchingParams& p, PinchingMode mode) {
  if (!(p.k1 > 0.0)) return describe("k1 must be positive", p.k1);
  if (!(p.lambda >= 1.0 && p.lambda < 2.0)) return describe("lambda must lie in [1, 2)", p.lambda);
  if (mode == PinchingMode::general) return std::nullopt;
  if (!(p.lambda < 1.0 + 1.0 / 200.0)) return describe("lambda must be below 1 + 1/200", p.lambda);
  if (!(p.sigma > 0.5 && p.sigma <= 2.0 / 3.0 + 1e-15)) return describe("sigma must lie in (1/2, 2/3]", p.sigma);
  if (!(p.sigma > sigma_floor(p.lambda)))
    return describe("sigma must exceed 1/2 + 24(lambda-1)/(1-34(lambda-1))", p.sigma);
  if (!(p.K > 0.0 && p.K <= std::min(2.0, 2.0 * p.k1) * (1.0 + 1e-15)))
    return describe("K must lie in (0, min(2, 2 k1)]", p.K);
  return std::nullopt;
}

PinchingConstants pinching_constants(const PinchingParams& p) {
  if (auto v = hypothesis_violation(p)) throw std::invalid_argument("pinching_constants: " + *v);
  const double l = p.lambda;
  const double s = p.sigma;
  const double q = 3.0 - 4.0 * s;
  const double d = 2.0 * s - 1.0;
  PinchingConstants c;
  c.b = d / s * (8.0 - 7.0 * l) - 4.0 * p.K * (l - 1.0);
  c.a1 = 9.0 * (l + 1.0) * (l + 1.0);
  c.a2 = c.a1 - 12.0 * q / d * c.b;
  c.a3 = (350.0 - 444.0 * s) / d * (l - 1.0) + 8.0 * q / d * (23.0 * l - 20.5) * c.b -
         8.0 * q * (s + 1.0) / (d * d) * c.b * c.b;
  c.discriminant = c.a2 * c.a2 + 4.0 * c.a1 * c.a3;
  if (c.discriminant >= 0.0) c.t0 = (c.a2 + std::sqrt(c.discriminant)) / (2.0 * c.a1);
  c.angle_floor = (13.0 * l - 10.0) / (3.0 * (l + 2.0));
  c.delta = c.t0 ? std::max(*c.t0, c.angle_floor) : c.angle_floor;
  return c;
}

double quadratic_f(const PinchingConstants& c, double t) { return -c.a1 * t * t + c.a2 * t + c.a3; }

std::optional<double> t0_at_lambda_one(double sigma) {
  const double u = 7.0 * sigma - 3.0;
  const double rad = u * u + 4.0 * (3.0 - 4.0 * sigma) * (3.0 * sigma - 2.0);
  if (rad < 0.0) return std::nullopt;
  return (u + std::sqrt(rad)) / (6.0 * sigma);
}

ThresholdReport threshold_checks(const std::vector<double>& grid_lambda, const std::vector<double>& grid_sigma) {
  ThresholdReport rep;
  rep.dominance_min_margin = std::numeric_limits<double>::infinity();
  rep.t0_min_margin = std::numeric_limits<double>::infinity();
  for (double l : grid_lambda) {
    const AngleThresholds t = angle_thresholds(l);
    const double margin = std::min(t.delta_ly_a, t.delta_ly_b) - t.delta_new;
    rep.dominance_min_margin = std::min(rep.dominance_min_margin, margin);
    ++rep.dominance_points;
    if (margin < -kGridSlack) rep.violations.push_back({"threshold dominance", l, 0.0, 0.0, margin});
  }
  for (double s : grid_sigma) {
    if (!(s > 0.5 && s <= 2.0 / 3.0 + 1e-15)) throw std::invalid_argument("threshold_checks: sigma outside (1/2, 2/3]");
    ++rep.t0_points;
    const PinchingConstants c = pinching_constants({1.0, s, 1.0, 1.0});
    if (!c.t0) {
      ++rep.t0_vacuous;
      continue;
    }
    const double margin = (7.0 * s - 3.0) / (3.0 * s) - *c.t0;
    rep.t0_min_margin = std::min(rep.t0_min_margin, margin);
    if (margin < -kGridSlack) rep.violations.push_back({"t0 below angle bound", 1.0, s, *c.t0, margin});
  }
  return rep;
}

double c1_upper_bound(const PinchingParams& p, const PinchingConstants& c) {
  const double d = 2.0 * p.sigma - 1.0;
  const double x = p.lambda - 1.0;
  return (32.0 * x - 4.0 * p.lambda + 16.0 * p.sigma * p.K * x / d + 4.0 * p.sigma * c.b / d) * p.k1;
}

double c1_angle_bound(const PinchingParams& p, const PinchingConstants& c, double t) {
  const double d = 2.0 * p.sigma - 1.0;
  const double x = p.lambda - 1.0;
  const double frame = ((559.0 + 78.0 * t) * p.lambda - (655.0 + 78.0 * t)) / 24.0;
  return (frame + 16.0 * p.sigma * p.K * x / d + 4.0 * p.sigma * c.b / d) * p.k1;
}

double c2_bound(const PinchingParams& p, const PinchingConstants& c, double t) {
  const double s = p.sigma;
  const double d = 2.0 * s - 1.0;
  const double x = p.lambda - 1.0;
  const double k1 = p.k1;
  const double coeff_b = 7.0 * p.lambda - (9.0 + 3.0 * t) / 2.0 + 8.0 * p.K * x - 16.0 * p.K * s * x / d;
  const double w = d / (8.0 * (3.0 - 4.0 * s)) * (34.0 * x + 9.0 * t * (1.0 - t) * (p.lambda + 1.0) * (p.lambda + 1.0));
  return (coeff_b * c.b + 8.0 * p.K * x / k1 + w - (s + 1.0) / d * c.b * c.b) * k1 * k1;
}

double c2_tilde_bound(const PinchingParams& p, const PinchingConstants& c, double t) {
  const double d = 2.0 * p.sigma - 1.0;
  return c1_angle_bound(p, c, t) * c.b * p.k1 + c2_bound(p, c, t) +
         (3.0 * p.sigma - 2.0) / d * c.b * c.b * p.k1 * p.k1;
}

SignAuditReport c1_c2_sign_audit(const PinchingParams& p, const std::vector<double>& grid_cos2) {
  if (auto v = hypothesis_violation(p)) throw std::invalid_argument("c1_c2_sign_audit: " + *v);
  const PinchingConstants c = pinching_constants(p);
  const double k2 = p.k1 * p.k1;
  const double fscale = (2.0 * p.sigma - 1.0) * k2 / (8.0 * (3.0 - 4.0 * p.sigma));
  // Expressions of size O(10) k1 cancel exactly in c1_upper_bound; allow roundoff.
  const double tol = kGridSlack * 100.0 * std::max(1.0, p.k1);
  SignAuditReport rep;
  auto flag = [&](const char* check, double t, double margin) {
    rep.violations.push_back({check, p.lambda, p.sigma, t, margin});
  };
  rep.c1_bound = c1_upper_bound(p, c);
  if (rep.c1_bound > tol) flag("C1 bound <= 0", 1.0, -rep.c1_bound);
  rep.f_at_1 = quadratic_f(c, 1.0);
  if (!(rep.f_at_1 < 0.0)) flag("f(1) < 0", 1.0, -rep.f_at_1);

  rep.c1_angle_max = -std::numeric_limits<double>::infinity();
  rep.f_max_on_grid = -std::numeric_limits<double>::infinity();
  rep.c2_max_on_grid = -std::numeric_limits<double>::infinity();
  rep.c2_minus_f_max = -std::numeric_limits<double>::infinity();
  rep.c2_tilde_max = -std::numeric_limits<double>::infinity();
  for (double t : grid_cos2) {
    if (t < c.delta || t > 1.0) continue;
    const double c1a = c1_angle_bound(p, c, t);
    const double f = quadratic_f(c, t);
    const double c2 = c2_bound(p, c, t);
    const double c2t = c2_tilde_bound(p, c, t);
    rep.c1_angle_max = std::max(rep.c1_angle_max, c1a);
    rep.f_max_on_grid = std::max(rep.f_max_on_grid, f);
    rep.c2_max_on_grid = std::max(rep.c2_max_on_grid, c2 / k2);
    rep.c2_minus_f_max = std::max(rep.c2_minus_f_max, (c2 - fscale * f) / k2);
    rep.c2_tilde_max = std::max(rep.c2_tilde_max, c2t / k2);
    if (c1a > tol) flag("C1 angle bound <= 0", t, -c1a);
    if (f > tol) flag("f(t) <= 0 above delta", t, -f);
    if (c2 - fscale * f > tol * k2) flag("C2 <= f majorant", t, -(c2 - fscale * f));
    if (c2 > tol * k2) flag("C2 <= 0", t, -c2);
    if (c2t > tol * k2) flag("C2 tilde <= 0", t, -c2t);
  }
  return rep;
}

double w_norm_bound(double lambda, double cos_alpha, double y, double z, double k1) {
  if (std::abs(cos_alpha * cos_alpha + y * y + z * z - 1.0) > 1e-9)
    throw std::invalid_argument("w_norm_bound: cos^2 + y^2 + z^2 must equal 1");
  if (!(lambda >= 1.0 && lambda <= 1.0 + 1.0 / 100.0))
    throw std::invalid_argument("w_norm_bound: lambda must lie in [1, 1 + 1/100]");
  const double c2 = cos_alpha * cos_alpha;
  return k1 * k1 / 32.0 * (34.0 * (lambda - 1.0) + 9.0 * (1.0 - c2) * c2 * (lambda + 1.0) * (lambda + 1.0));
}

TestFunctionValues test_functions_fg(double sigma, double delta, double x) {
  if (!(sigma > 0.5 && sigma <= 2.0 / 3.0 + 1e-15)) throw std::invalid_argument("test_functions_fg: sigma outside (1/2, 2/3]");
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("test_functions_fg: delta outside (0, 1]");
  const double xmax = 1.0 / std::sqrt(delta);
  if (!(x >= 1.0 && x <= xmax * (1.0 + 1e-15))) throw std::invalid_argument("test_functions_fg: x outside [1, 1/sqrt(delta)]");
  const double q = 0.5 - 0.25 / sigma;
  TestFunctionValues v;
  v.g = 0.5 * x - q * x * x;
  const double gp = 0.5 - 2.0 * q * x;
  v.ode_residual = std::abs(-4.0 * gp + 8.0 * v.g / x - 2.0);
  const double den = 2.0 * sigma - (2.0 * sigma - 1.0) * x;
  v.f = x * x / (den * den);
  const double top_den = 2.0 * sigma * std::sqrt(delta) - (2.0 * sigma - 1.0);
  const double fmax = 1.0 / (top_den * top_den);
  const double tol = 1e-12;
  v.range_ok = den > 0.0 && top_den > 0.0 && v.f >= 1.0 - tol && v.f <= fmax * (1.0 + tol) &&
               x / v.g >= 4.0 * sigma * (1.0 - tol);
  return v;
}

double epsilon1_bound(double area0, double r0, double eps0, double lambda, double k1) {
  if (!(area0 > 0.0 && r0 > 0.0 && eps0 > 0.0 && k1 > 0.0))
    throw std::invalid_argument("epsilon1_bound: inputs must be positive");
  if (!(lambda >= 1.0 && lambda < 2.0)) throw std::invalid_argument("epsilon1_bound: lambda must lie in [1, 2)");
  const double e = 1.0 - std::exp(-0.375 * (2.0 - lambda) * k1);
  return std::numbers::pi * std::numbers::pi * eps0 * eps0 * std::pow(r0, 6) * e * e / (4.0 * area0);
}

DecayRates decay_rates(double lambda, double k1) {
  if (!(lambda < 2.0)) throw std::invalid_argument("decay_rates: lambda must be below 2");
  if (!(k1 > 0.0)) throw std::invalid_argument("decay_rates: k1 must be positive");
  return {0.75 * (2.0 - lambda) * k1, 4.0 / 9.0 * k1};
}

}  // namespace symflow::pinching
