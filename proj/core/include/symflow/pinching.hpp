#pragma once

#include <optional>
#include <string>
#include <vector>

namespace symflow::pinching {

/// Lower thresholds for the initial cos(alpha) as functions of the pinching ratio lambda.
struct AngleThresholds {
  double delta_new = 0.0;   ///< 29(l-1) / sqrt((48-24l)^2 + (29l-29)^2)
  double delta_ly_a = 0.0;  ///< 53(l-1) / sqrt((53l-53)^2 + (48-24l)^2)
  double delta_ly_b = 0.0;  ///< (8l-5) / sqrt((8l-5)^2 + (12-6l)^2)
  /// Small-energy convergence threshold 58(l-1) / sqrt((48-24l)^2 + (58l-58)^2).
  double delta_small_energy = 0.0;
  /// The same threshold with the printed constant (48-24)^2 = 576 in place of (48-24l)^2.
  double delta_small_energy_literal = 0.0;
};

/// Throws std::invalid_argument unless 1 <= lambda < 2.
AngleThresholds angle_thresholds(double lambda);

/// Which hypothesis range to validate against.
enum class PinchingMode {
  /// 1 <= lambda < 1 + 1/200, sigma above the lambda-dependent floor.
  pinched,
  /// 1 <= lambda < 2 only.
  general,
};

struct PinchingParams {
  double lambda = 1.0;
  double sigma = 2.0 / 3.0;
  double K = 1.0;  ///< derivative bound |nabla Rm| <= K k1 (lambda - 1), K <= min(2, 2 k1)
  double k1 = 1.0;
};

/// Smallest admissible sigma for a given lambda: 1/2 + 24(l-1)/(1 - 34(l-1)).
double sigma_floor(double lambda);

/// Empty when `p` satisfies the hypotheses of `mode`, otherwise a description of
/// the first violated condition.
std::optional<std::string> hypothesis_violation(const PinchingParams& p, PinchingMode mode = PinchingMode::pinched);

struct PinchingConstants {
  double b = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double discriminant = 0.0;  ///< a2^2 + 4 a1 a3
  /// Larger root of a1 t^2 - a2 t - a3; empty when the discriminant is negative,
  /// in which case f(t) = -a1 t^2 + a2 t + a3 < 0 for every t.
  std::optional<double> t0;
  double angle_floor = 0.0;  ///< (13l-10) / (3(l+2))
  /// max(t0, angle_floor); angle_floor alone when t0 is empty.
  double delta = 0.0;
};

/// Closed-form constants. Throws std::invalid_argument when the hypotheses of the
/// pinched mode are violated. A negative discriminant is reported through an
/// empty t0 rather than clamped.
PinchingConstants pinching_constants(const PinchingParams& p);

/// f(t) = -a1 t^2 + a2 t + a3
double quadratic_f(const PinchingConstants& c, double t);

/// Closed form of t0 at lambda = 1: (7s-3 + sqrt((7s-3)^2 + 4(3-4s)(3s-2))) / (6s).
/// Empty when the radicand is negative.
std::optional<double> t0_at_lambda_one(double sigma);

struct GridViolation {
  std::string check;
  double lambda = 0.0;
  double sigma = 0.0;
  double t = 0.0;
  double margin = 0.0;
};

struct ThresholdReport {
  std::size_t dominance_points = 0;
  std::size_t t0_points = 0;
  /// sigma values where t0 has no real root at lambda = 1 (the bound holds vacuously).
  std::size_t t0_vacuous = 0;
  double dominance_min_margin = 0.0;
  double t0_min_margin = 0.0;
  std::vector<GridViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// delta_new <= min(delta_ly_a, delta_ly_b) on the lambda grid and
/// t0(lambda = 1, sigma) <= (7 sigma - 3)/(3 sigma) on the sigma grid, each with slack 1e-12.
ThresholdReport threshold_checks(const std::vector<double>& grid_lambda, const std::vector<double>& grid_sigma);

/// Upper bound on C1 after inserting b: [32(l-1) - 4l + 16 s K(l-1)/(2s-1) + 4 s b/(2s-1)] k1.
double c1_upper_bound(const PinchingParams& p, const PinchingConstants& c);
/// Frame-level C1 bound before the cos^2 alpha = t dependence is dropped:
/// [((559+78t) l - (655+78t))/24 + 16 s K(l-1)/(2s-1) + 4 s b/(2s-1)] k1.
double c1_angle_bound(const PinchingParams& p, const PinchingConstants& c, double t);
/// C2 bound with K kept explicit (no K = min(2, 2 k1) substitution), t = cos^2 alpha.
double c2_bound(const PinchingParams& p, const PinchingConstants& c, double t);
/// C1 b k1 + C2 + (3s-2)/(2s-1) b^2 k1^2 built from c1_angle_bound and c2_bound.
double c2_tilde_bound(const PinchingParams& p, const PinchingConstants& c, double t);

struct SignAuditReport {
  double c1_bound = 0.0;
  double c1_angle_max = 0.0;
  double f_at_1 = 0.0;
  double f_max_on_grid = 0.0;   ///< max f(t) over grid t >= delta
  double c2_max_on_grid = 0.0;  ///< max c2_bound / k1^2 over grid t >= delta
  double c2_minus_f_max = 0.0;  ///< max of c2_bound - (2s-1)k1^2/(8(3-4s)) f(t); <= 0 expected
  double c2_tilde_max = 0.0;
  std::vector<GridViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Sign certificates at one parameter point over cos^2 alpha values in `grid_cos2`.
/// Grid values below delta are skipped (they lie outside the preserved region).
/// Throws std::invalid_argument when the hypotheses are violated.
SignAuditReport c1_c2_sign_audit(const PinchingParams& p, const std::vector<double>& grid_cos2);

/// (k1^2/32) [34(l-1) + 9 sin^2 cos^2 (l+1)^2]. Requires cos^2 + y^2 + z^2 = 1 within
/// 1e-9 and 1 <= lambda <= 1 + 1/100; throws std::invalid_argument otherwise.
double w_norm_bound(double lambda, double cos_alpha, double y, double z, double k1);

struct TestFunctionValues {
  double f = 0.0;
  double g = 0.0;
  double ode_residual = 0.0;
  bool range_ok = false;
};

/// g(x) = x/2 - (1/2 - 1/(4 sigma)) x^2 and f(x) = x^2 / (2 sigma - (2 sigma - 1) x)^2,
/// with the residual of -4 g' + 8 g / x - 2 = 0 and the range checks
/// 1 <= f <= 1 / (2 sigma sqrt(delta) - (2 sigma - 1))^2, x / g >= 4 sigma.
/// Throws std::invalid_argument for x outside [1, 1/sqrt(delta)].
TestFunctionValues test_functions_fg(double sigma, double delta, double x);

/// pi^2 eps0^2 r0^6 (1 - exp(-3/8 (2 - l) k1))^2 / (4 area0). Throws for lambda >= 2
/// or non-positive inputs.
double epsilon1_bound(double area0, double r0, double eps0, double lambda, double k1);

struct DecayRates {
  double integral_rate = 0.0;   ///< (3/4)(2 - l) k1
  double halfangle_rate = 0.0;  ///< (4/9) k1
};

DecayRates decay_rates(double lambda, double k1);

}  // namespace symflow::pinching
