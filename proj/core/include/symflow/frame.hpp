#pragma once

#include <array>
#include <string>

#include "symflow/tensor.hpp"

namespace symflow {

/// Orthonormal frame (e1, e2 tangent; e3, e4 normal) with its Kahler-angle data.
///
/// For a positively oriented frame the matrix <J e_A, e_B> has the block form
///
///      0   c   y   z
///     -c   0   z  -y
///     -y  -z   0   c
///     -z   y  -c   0
///
/// with c = cos(alpha) = <J e1, e2>, y = <J e1, e3>, z = <J e1, e4>.
struct AdaptedFrame {
  Mat4 e = Mat4::Identity();  ///< columns e1..e4
  double cos_alpha = 1.0;
  double y = 0.0;
  double z = 0.0;

  Vec4 col(int i) const { return e.col(i); }
  double sin_alpha() const;
};

/// Tangent frame by Gram-Schmidt on (t1, t2); normal frame in the gauge z = 0,
/// y = sin(alpha) >= 0. Throws std::invalid_argument for a degenerate plane.
AdaptedFrame adapted_frame_from_plane(const Vec4& t1, const Vec4& t2,
                                      const ComplexStructure& j = ComplexStructure::standard());

/// Reads (c, y, z) off an arbitrary positively oriented orthonormal frame.
/// Throws std::invalid_argument if `e` is not orthonormal with det +1.
AdaptedFrame adapted_frame_from_basis(const Mat4& e);

/// Rotates (e3, e4) by angle theta: e3' = cos e3 + sin e4, e4' = -sin e3 + cos e4.
AdaptedFrame rotate_normal_frame(const AdaptedFrame& f, double theta);

/// The matrix <J e_A, e_B>.
Mat4 j_matrix(const AdaptedFrame& f);
/// The block form above for given (c, y, z).
Mat4 expected_j_matrix(double c, double y, double z);
/// Largest deviation from orthonormality, from the block form, and from c^2 + y^2 + z^2 = 1.
double frame_defect(const AdaptedFrame& f);

/// Second fundamental form h[a](i, j) = h^{a+3}_{i+1, j+1}.
struct SecondFundamentalForm {
  std::array<Eigen::Matrix2d, 2> h{Eigen::Matrix2d::Zero(), Eigen::Matrix2d::Zero()};

  double asq() const;
  double hsq() const;
  /// (H^3, H^4)
  Eigen::Vector2d mean() const;
};

/// Components with respect to the normal frame rotated by theta (see rotate_normal_frame).
SecondFundamentalForm rotate_normal(const SecondFundamentalForm& s, double theta);

struct NablaJFunctionals {
  double nabla_j_sq = 0.0;
  double hsq = 0.0;
  double asq = 0.0;
};

/// |grad J|^2 = sum_k (h4_1k + h3_2k)^2 + (h4_2k - h3_1k)^2 together with |H|^2 and |A|^2.
/// |grad J|^2 >= |H|^2 / 2 holds identically.
NablaJFunctionals nabla_J_functionals(const SecondFundamentalForm& s);

/// Gradient of cos(alpha) along (e1, e2) from the second fundamental form:
/// e_k(cos alpha) = y (h4_1k + h3_2k) + z (h4_2k - h3_1k). By Cauchy-Schwarz its
/// square is at most sin^2(alpha) |grad J|^2.
Eigen::Vector2d cos_alpha_gradient(const SecondFundamentalForm& s, const AdaptedFrame& f);

/// Relative tolerance factor used by the auditors.
inline constexpr double kAuditSlack = 1e-9;

struct RicciJBound {
  double ric = 0.0;         ///< c R22 + s R23
  double ric_direct = 0.0;  ///< sum_i R(J e1, e_i, e2, e_i)
  double lower = 0.0;
  bool ok = false;
};

/// Ric(J e1, e2) and its lower bound in terms of (k1, k2). The frame must be in
/// the z = 0, y >= 0 gauge with cos(alpha) >= 0 (the bound is false for
/// anti-symplectic planes); otherwise std::invalid_argument.
RicciJBound ricci_J_bound(const CurvatureTensor& r, const AdaptedFrame& f, double k1, double k2);

struct BoundCheck {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  /// min(value - lower, upper - value); negative means a violation before slack.
  double margin = 0.0;
  bool ok = false;
};

/// Two-sided bound on R(X, Y) for orthogonal X, Y in terms of |X|^2, |Y|^2,
/// <JX, Y>, k1 and k2. Throws std::invalid_argument for non-orthogonal inputs.
BoundCheck check_bsc_bounds(const CurvatureTensor& r, const Vec4& x, const Vec4& y, double k1, double k2);

struct EcoItem {
  int item = 0;
  std::string component;
  BoundCheck check;
  /// The bound fails but holds for the negated component.
  bool fails_only_by_sign = false;
};

struct EcoReport {
  std::array<EcoItem, 16> items;
  bool ok = false;
  double min_margin = 0.0;
};

/// Frame-component curvature estimates (items 1-16) for a general adapted frame.
/// Item 15 covers the four Ricci diagonal entries and reports the worst one;
/// item 16 is one-sided, so its `lower` is -upper.
EcoReport check_eco_bounds(const CurvatureTensor& r, const AdaptedFrame& f, double k1, double k2);

/// w(a, i) = sum_l R(e_{a+3}, e_l, e_i, e_l) over tangent l, the normal part of Ricci.
Eigen::Matrix2d normal_ricci_components(const CurvatureTensor& r, const AdaptedFrame& f);

enum class CodazziSign { plus = 1, minus = -1 };

/// Covariant derivative of the second fundamental form, t[a][k][i][j] = (nabla_k h^{a+3})_ij,
/// symmetric in (i, j).
struct GradSFF {
  std::array<double, 16> t{};

  static constexpr int index(int a, int k, int i, int j) { return ((a * 2 + k) * 2 + i) * 2 + j; }
  double operator()(int a, int k, int i, int j) const { return t[index(a, k, i, j)]; }
  double& operator()(int a, int k, int i, int j) { return t[index(a, k, i, j)]; }

  double defect(int a, int k, int i, int j) const { return (*this)(a, k, i, j) - (*this)(a, i, k, j); }
  double norm_sq() const;
  /// (nabla H)(a, k) = sum_j t[a][k][j][j]
  Eigen::Matrix2d grad_mean() const;
};

/// Prescribed Codazzi defect D[a][k][i][j] = sign * R(e_{a+3}, e_j, e_i, e_k), so that
/// sum_j D[a][j][i][j] = sign * w(a, i).
double codazzi_defect(const CurvatureTensor& r, const AdaptedFrame& f, CodazziSign sign, int a, int k, int i, int j);

/// Totally symmetric part given by its 4 independent entries per normal index,
/// (s_000, s_001, s_011, s_111), plus the least-norm particular solution of the
/// defect constraint. The result has exactly the prescribed defect.
GradSFF build_grad_sff(const std::array<double, 8>& symmetric, const CurvatureTensor& r, const AdaptedFrame& f,
                       CodazziSign sign);

struct KatoCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double w_sq = 0.0;
  bool ok = false;
};

/// |nabla A|^2 >= (3/4 - eta)|nabla H|^2 - (1/(4 eta) - 1)|w|^2. Throws
/// std::invalid_argument if eta is outside (0, 3/4) or if T's defect does not
/// match the curvature under `sign`.
KatoCheck check_kato_inequality(const GradSFF& t, const CurvatureTensor& r, const AdaptedFrame& f, double eta,
                                CodazziSign sign = CodazziSign::plus);

}  // namespace symflow
