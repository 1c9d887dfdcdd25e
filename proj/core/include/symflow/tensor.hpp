#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include <Eigen/Dense>

namespace symflow {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

/// Fixed complex structure on R^4 in block form: J e1 = e2, J e3 = e4.
/// In complex coordinates z0 = x1 + i x2, z1 = x3 + i x4 it is multiplication by i.
class ComplexStructure {
 public:
  static const ComplexStructure& standard();

  const Mat4& matrix() const { return j_; }
  Vec4 apply(const Vec4& x) const { return j_ * x; }

 private:
  ComplexStructure();
  Mat4 j_;
};

inline Vec4 apply_j(const Vec4& x) { return ComplexStructure::standard().apply(x); }

/// Four-index tensor on R^4, stored densely.
///
/// Sign convention: R(X,Y,X,Y) is the sectional curvature of span{X,Y} for
/// orthonormal X, Y. With this orientation the complex space form of holomorphic
/// sectional curvature k > 0 has all sectional curvatures in [k/4, k].
/// Indices are zero-based.
class CurvatureTensor {
 public:
  CurvatureTensor() { r_.fill(0.0); }

  static constexpr int index(int a, int b, int c, int d) { return ((a * 4 + b) * 4 + c) * 4 + d; }

  double operator()(int a, int b, int c, int d) const { return r_[index(a, b, c, d)]; }
  double& operator()(int a, int b, int c, int d) { return r_[index(a, b, c, d)]; }

  const std::array<double, 256>& data() const { return r_; }
  std::array<double, 256>& data() { return r_; }

  /// Full multilinear evaluation R(X, Y, Z, W).
  double eval(const Vec4& x, const Vec4& y, const Vec4& z, const Vec4& w) const;
  /// R(X, Y) = R(X, Y, X, Y).
  double biquadratic(const Vec4& x, const Vec4& y) const { return eval(x, y, x, y); }
  /// R(X) = R(X, JX, X, JX), unnormalized.
  double holomorphic(const Vec4& x) const;
  /// Holomorphic sectional curvature K(X) = R(X) / |X|^4.
  double hsc(const Vec4& x) const;

  /// Components in the orthonormal frame given by the columns of `frame`.
  CurvatureTensor in_frame(const Mat4& frame) const;

  double max_abs() const;
  /// Scale used for relative tolerances: max(1, max |R_ABCD|).
  double scale() const;

  CurvatureTensor& operator+=(const CurvatureTensor& o);
  CurvatureTensor& operator*=(double s);
  friend CurvatureTensor operator+(CurvatureTensor a, const CurvatureTensor& b) { return a += b; }
  friend CurvatureTensor operator*(double s, CurvatureTensor a) { return a *= s; }

 private:
  std::array<double, 256> r_;
};

/// Largest violation of each algebraic symmetry.
struct SymmetryDefects {
  double antisymmetry = 0.0;
  double pair_symmetry = 0.0;
  double bianchi = 0.0;
  double kahler = 0.0;

  double max() const;
};

SymmetryDefects symmetry_defects(const CurvatureTensor& r);

/// Orthogonal projection onto the space of Kahler curvature tensors
/// (antisymmetric pairs, pair symmetry, first Bianchi identity, J-invariance).
CurvatureTensor project_to_kahler(const CurvatureTensor& r);

/// Dimension of the Kahler curvature tensor space in real dimension 4.
int kahler_space_dimension();

/// Complex space form with constant holomorphic sectional curvature k.
/// Throws std::invalid_argument for k <= 0.
CurvatureTensor constant_hsc_tensor(double k);

struct KahlerCurvatureModel {
  CurvatureTensor tensor;
  double k1 = 0.0;
  double k2 = 0.0;
  double lambda = 1.0;
  int attempts = 1;
};

/// Constant model of curvature k plus an eps-sized random Kahler perturbation.
/// The perturbation has max-abs entry exactly eps. Redraws up to `max_attempts`
/// times when the minimum holomorphic sectional curvature is not positive and
/// throws std::runtime_error after that. Deterministic in `seed`.
KahlerCurvatureModel sample_kahler_tensor(std::uint64_t seed, double k, double eps, int max_attempts = 16);

struct HscExtrema {
  double k1 = 0.0;
  double k2 = 0.0;
  Vec4 argmin = Vec4::Zero();
  Vec4 argmax = Vec4::Zero();
};

/// Minimum and maximum of the holomorphic sectional curvature over unit vectors.
///
/// K(X) is invariant under X -> cos(t) X + sin(t) JX, so it is a function on the
/// quotient S^3 / U(1) = S^2. The search runs on a `grid` x `grid` angular grid of
/// that sphere followed by `newton_steps` projected Newton iterations on a fitted
/// quadratic model; the returned values are K evaluated at the refined points.
HscExtrema hsc_extrema(const CurvatureTensor& r, int grid = 64, int newton_steps = 20);

/// Unit vector lying over the point n of S^2 under the Hopf map.
Vec4 hopf_lift(const Eigen::Vector3d& n);
/// Hopf map S^3 -> S^2, X -> (2 Re conj(z0) z1, 2 Im conj(z0) z1, |z0|^2 - |z1|^2).
Eigen::Vector3d hopf_project(const Vec4& x);

struct SectionalCurvature {
  double biquadratic = 0.0;
  /// Empty when |X ^ Y| < 1e-12.
  std::optional<double> sectional;
};

SectionalCurvature sectional_and_hsc(const CurvatureTensor& r, const Vec4& x, const Vec4& y);

struct PolarizationResiduals {
  double sectional = 0.0;
  double mixed = 0.0;
};

/// Residuals of the two polarization identities: R(X,Y) recovered from holomorphic
/// sectional curvatures, and R(X,Y,X,Z) recovered from biquadratic values.
PolarizationResiduals verify_polarization_identities(const CurvatureTensor& r, const Vec4& x, const Vec4& y,
                                                     const Vec4& z);

}  // namespace symflow
