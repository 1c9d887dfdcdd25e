#include "symflow/frame.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace symflow {

namespace {

Vec4 orthonormal_complement(const Mat4& basis, int count) {
  // Pick the coordinate axis with the largest component outside span(basis[0..count)).
  Vec4 best = Vec4::Zero();
  double best_norm = -1.0;
  for (int a = 0; a < 4; ++a) {
    Vec4 v = Vec4::Unit(a);
    for (int i = 0; i < count; ++i) v -= basis.col(i).dot(v) * basis.col(i);
    const double n = v.norm();
    if (n > best_norm) {
      best_norm = n;
      best = v / n;
    }
  }
  for (int i = 0; i < count; ++i) best -= basis.col(i).dot(best) * basis.col(i);
  return best.normalized();
}

AdaptedFrame with_angles(const Mat4& e, const Mat4& j) {
  AdaptedFrame f;
  f.e = e;
  const Vec4 je1 = j * e.col(0);
  f.cos_alpha = je1.dot(e.col(1));
  f.y = je1.dot(e.col(2));
  f.z = je1.dot(e.col(3));
  return f;
}

}  // namespace

double AdaptedFrame::sin_alpha() const { return std::sqrt(std::max(0.0, 1.0 - cos_alpha * cos_alpha)); }

AdaptedFrame adapted_frame_from_plane(const Vec4& t1, const Vec4& t2, const ComplexStructure& j) {
  const double n1 = t1.norm();
  if (!(n1 > 1e-12)) throw std::invalid_argument("adapted_frame_from_plane: degenerate plane");
  Mat4 e = Mat4::Zero();
  e.col(0) = t1 / n1;
  Vec4 v2 = t2 - e.col(0).dot(t2) * e.col(0);
  const double n2 = v2.norm();
  if (!(n2 > 1e-12 * std::max(1.0, t2.norm())))
    throw std::invalid_argument("adapted_frame_from_plane: degenerate plane");
  e.col(1) = v2 / n2;

  const Vec4 je1 = j.apply(e.col(0));
  Vec4 v3 = je1 - je1.dot(e.col(1)) * e.col(1) - je1.dot(e.col(0)) * e.col(0);
  const double n3 = v3.norm();
  if (n3 > 1e-12) {
    e.col(2) = v3 / n3;
  } else {
    e.col(2) = orthonormal_complement(e, 2);
  }
  e.col(3) = orthonormal_complement(e, 3);
  if (e.determinant() < 0.0) e.col(3) = -e.col(3);
  AdaptedFrame f = with_angles(e, j.matrix());
  f.z = 0.0;
  f.y = std::max(0.0, f.y);
  return f;
}

AdaptedFrame adapted_frame_from_basis(const Mat4& e) {
  if ((e.transpose() * e - Mat4::Identity()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("adapted_frame_from_basis: frame is not orthonormal");
  if (e.determinant() < 0.0) throw std::invalid_argument("adapted_frame_from_basis: frame is negatively oriented");
  return with_angles(e, ComplexStructure::standard().matrix());
}

AdaptedFrame rotate_normal_frame(const AdaptedFrame& f, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  AdaptedFrame out = f;
  out.e.col(2) = c * f.e.col(2) + s * f.e.col(3);
  out.e.col(3) = -s * f.e.col(2) + c * f.e.col(3);
  out.y = c * f.y + s * f.z;
  out.z = -s * f.y + c * f.z;
  return out;
}

Mat4 j_matrix(const AdaptedFrame& f) {
  const Mat4& j = ComplexStructure::standard().matrix();
  return (j * f.e).transpose() * f.e;
}

Mat4 expected_j_matrix(double c, double y, double z) {
  Mat4 m;
  m << 0, c, y, z,   //
      -c, 0, z, -y,  //
      -y, -z, 0, c,  //
      -z, y, -c, 0;
  return m;
}

double frame_defect(const AdaptedFrame& f) {
  const double ortho = (f.e.transpose() * f.e - Mat4::Identity()).cwiseAbs().maxCoeff();
  const double jform = (j_matrix(f) - expected_j_matrix(f.cos_alpha, f.y, f.z)).cwiseAbs().maxCoeff();
  const double unit = std::abs(f.cos_alpha * f.cos_alpha + f.y * f.y + f.z * f.z - 1.0);
  return std::max({ortho, jform, unit});
}

double SecondFundamentalForm::asq() const { return h[0].squaredNorm() + h[1].squaredNorm(); }

Eigen::Vector2d SecondFundamentalForm::mean() const { return {h[0].trace(), h[1].trace()}; }

double SecondFundamentalForm::hsq() const { return mean().squaredNorm(); }

SecondFundamentalForm rotate_normal(const SecondFundamentalForm& s, double theta) {
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  SecondFundamentalForm out;
  out.h[0] = c * s.h[0] + sn * s.h[1];
  out.h[1] = -sn * s.h[0] + c * s.h[1];
  return out;
}

NablaJFunctionals nabla_J_functionals(const SecondFundamentalForm& s) {
  const Eigen::Matrix2d& h3 = s.h[0];
  const Eigen::Matrix2d& h4 = s.h[1];
  NablaJFunctionals out;
  for (int k = 0; k < 2; ++k) {
    const double a = h4(0, k) + h3(1, k);
    const double b = h4(1, k) - h3(0, k);
    out.nabla_j_sq += a * a + b * b;
  }
  out.hsq = s.hsq();
  out.asq = s.asq();
  return out;
}

Eigen::Vector2d cos_alpha_gradient(const SecondFundamentalForm& s, const AdaptedFrame& f) {
  const Eigen::Matrix2d& h3 = s.h[0];
  const Eigen::Matrix2d& h4 = s.h[1];
  Eigen::Vector2d g;
  for (int k = 0; k < 2; ++k) g(k) = f.y * (h4(0, k) + h3(1, k)) + f.z * (h4(1, k) - h3(0, k));
  return g;
}

RicciJBound ricci_J_bound(const CurvatureTensor& r, const AdaptedFrame& f, double k1, double k2) {
  if (std::abs(f.z) > 1e-10 || f.y < -1e-10)
    throw std::invalid_argument("ricci_J_bound: frame must satisfy z = 0, y >= 0");
  if (f.cos_alpha < -1e-12) throw std::invalid_argument("ricci_J_bound: requires cos(alpha) >= 0");
  const CurvatureTensor rf = r.in_frame(f.e);
  const double c = f.cos_alpha;
  const double s = f.y;
  const double r22 = rf(0, 1, 0, 1) + rf(2, 1, 2, 1) + rf(3, 1, 3, 1);
  const double r23 = rf(0, 1, 0, 2) + rf(3, 1, 3, 2);
  RicciJBound out;
  out.ric = c * r22 + s * r23;
  const Vec4 je1 = apply_j(f.col(0));
  for (int i = 0; i < 4; ++i) out.ric_direct += r.eval(je1, f.col(i), f.col(1), f.col(i));
  out.lower = (3.0 * c + 29.0 / 16.0 * s) * k1 - (1.5 * c + 29.0 / 16.0 * s) * k2;
  out.ok = out.ric >= out.lower - kAuditSlack * r.scale();
  return out;
}

namespace {

BoundCheck two_sided(double value, double lower, double upper, double scale) {
  BoundCheck b;
  b.value = value;
  b.lower = lower;
  b.upper = upper;
  b.margin = std::min(value - lower, upper - value);
  b.ok = b.margin >= -kAuditSlack * scale;
  return b;
}

}  // namespace

BoundCheck check_bsc_bounds(const CurvatureTensor& r, const Vec4& x, const Vec4& y, double k1, double k2) {
  if (std::abs(x.dot(y)) > 1e-12 * std::max(1.0, x.norm() * y.norm()))
    throw std::invalid_argument("check_bsc_bounds: X and Y must be orthogonal");
  const double a = x.squaredNorm();
  const double b = y.squaredNorm();
  const double jx = apply_j(x).dot(y);
  const double p = 3.0 * (a + b) * (a + b) + 12.0 * jx * jx;
  const double q = 3.0 * a * a + 3.0 * b * b + 2.0 * a * b;
  return two_sided(r.biquadratic(x, y), (p * k1 - q * k2) / 16.0, (p * k2 - q * k1) / 16.0, r.scale());
}

EcoReport check_eco_bounds(const CurvatureTensor& r, const AdaptedFrame& f, double k1, double k2) {
  const CurvatureTensor rf = r.in_frame(f.e);
  const double scale = r.scale();
  const double c = f.cos_alpha;
  const double y = f.y;
  const double z = f.z;
  const double s2 = 1.0 - c * c;
  EcoReport rep;

  auto fill = [&](int item, const char* name, double value, double lower, double upper) {
    EcoItem& it = rep.items[static_cast<std::size_t>(item - 1)];
    it.item = item;
    it.component = name;
    it.check = two_sided(value, lower, upper, scale);
    it.fails_only_by_sign = !it.check.ok && two_sided(-value, lower, upper, scale).ok;
  };
  auto diag = [&](int item, const char* name, double value, double v) {
    const double p = 3.0 + 3.0 * v * v;
    fill(item, name, value, (p * k1 - 2.0 * k2) / 4.0, (p * k2 - 2.0 * k1) / 4.0);
  };
  auto mixed = [&](int item, const char* name, double value, double p, double m) {
    const double pp = 23.0 + 6.0 * p * p;
    const double mm = 23.0 + 6.0 * m * m;
    fill(item, name, value, (pp * k1 - mm * k2) / 32.0, (pp * k2 - mm * k1) / 32.0);
  };

  diag(1, "R1212", rf(0, 1, 0, 1), c);
  diag(2, "R3434", rf(2, 3, 2, 3), c);
  diag(3, "R1313", rf(0, 2, 0, 2), y);
  diag(4, "R2424", rf(1, 3, 1, 3), y);
  diag(5, "R1414", rf(0, 3, 0, 3), z);
  diag(6, "R2323", rf(1, 2, 1, 2), z);
  mixed(7, "R2131", rf(1, 0, 2, 0), c + y, c - y);
  mixed(8, "R2434", rf(1, 3, 2, 3), c - y, c + y);
  mixed(9, "R1242", rf(0, 1, 3, 1), c + y, c - y);
  mixed(10, "R1232", rf(0, 1, 2, 1), c - z, c + z);
  mixed(11, "R2141", rf(1, 0, 3, 0), c + z, c - z);
  mixed(12, "R3141", rf(2, 0, 3, 0), y + z, y - z);
  mixed(13, "R3242", rf(2, 1, 3, 1), y - z, y + z);
  {
    const double a = 10.0 + 6.0 * c * c;
    const double b = 10.0 + 3.0 * s2;
    fill(14, "R1234", rf(0, 1, 2, 3), (a * k1 - b * k2) / 12.0, (a * k2 - b * k1) / 12.0);
  }
  {
    const double lo = (6.0 * k1 - 3.0 * k2) / 2.0;
    const double hi = (6.0 * k2 - 3.0 * k1) / 2.0;
    static const char* names[4] = {"R11", "R22", "R33", "R44"};
    EcoItem worst;
    for (int i = 0; i < 4; ++i) {
      double ric = 0.0;
      for (int jj = 0; jj < 4; ++jj) ric += rf(i, jj, i, jj);
      fill(15, names[i], ric, lo, hi);
      if (i == 0 || rep.items[14].check.margin < worst.check.margin) worst = rep.items[14];
    }
    rep.items[14] = worst;
  }
  {
    double r34 = 0.0;
    for (int jj = 0; jj < 4; ++jj) r34 += rf(2, jj, 3, jj);
    const double u = (29.0 - 6.0 * c * c) * (k2 - k1) / 16.0;
    fill(16, "R34", r34, -u, u);
    rep.items[15].fails_only_by_sign = false;
  }

  rep.ok = true;
  rep.min_margin = rep.items[0].check.margin;
  for (const EcoItem& it : rep.items) {
    rep.ok = rep.ok && it.check.ok;
    rep.min_margin = std::min(rep.min_margin, it.check.margin);
  }
  return rep;
}

Eigen::Matrix2d normal_ricci_components(const CurvatureTensor& r, const AdaptedFrame& f) {
  const CurvatureTensor rf = r.in_frame(f.e);
  Eigen::Matrix2d w;
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < 2; ++i) w(a, i) = rf(a + 2, 0, i, 0) + rf(a + 2, 1, i, 1);
  return w;
}

double GradSFF::norm_sq() const {
  double s = 0.0;
  for (double v : t) s += v * v;
  return s;
}

Eigen::Matrix2d GradSFF::grad_mean() const {
  Eigen::Matrix2d g;
  for (int a = 0; a < 2; ++a)
    for (int k = 0; k < 2; ++k) g(a, k) = (*this)(a, k, 0, 0) + (*this)(a, k, 1, 1);
  return g;
}

namespace {

double defect_from_frame(const CurvatureTensor& rf, CodazziSign sign, int a, int k, int i, int j) {
  return static_cast<double>(static_cast<int>(sign)) * rf(a + 2, j, i, k);
}

}  // namespace

double codazzi_defect(const CurvatureTensor& r, const AdaptedFrame& f, CodazziSign sign, int a, int k, int i, int j) {
  return defect_from_frame(r.in_frame(f.e), sign, a, k, i, j);
}

GradSFF build_grad_sff(const std::array<double, 8>& symmetric, const CurvatureTensor& r, const AdaptedFrame& f,
                       CodazziSign sign) {
  const CurvatureTensor rf = r.in_frame(f.e);
  // Constraint rows over the 8 entries x[k*4 + i*2 + j] of one normal slice:
  // symmetry in (i, j) for k = 0, 1 and the (k, i) = (0, 1) defect for j = 0, 1.
  Eigen::Matrix<double, 4, 8> a = Eigen::Matrix<double, 4, 8>::Zero();
  a(0, 0 * 4 + 0 * 2 + 1) = 1.0;
  a(0, 0 * 4 + 1 * 2 + 0) = -1.0;
  a(1, 1 * 4 + 0 * 2 + 1) = 1.0;
  a(1, 1 * 4 + 1 * 2 + 0) = -1.0;
  a(2, 0 * 4 + 1 * 2 + 0) = 1.0;
  a(2, 1 * 4 + 0 * 2 + 0) = -1.0;
  a(3, 0 * 4 + 1 * 2 + 1) = 1.0;
  a(3, 1 * 4 + 0 * 2 + 1) = -1.0;
  const Eigen::Matrix4d aat = a * a.transpose();
  const Eigen::LDLT<Eigen::Matrix4d> solver(aat);

  GradSFF out;
  for (int alpha = 0; alpha < 2; ++alpha) {
    Eigen::Vector4d b(0.0, 0.0, defect_from_frame(rf, sign, alpha, 0, 1, 0),
                      defect_from_frame(rf, sign, alpha, 0, 1, 1));
    const Eigen::Matrix<double, 8, 1> p = a.transpose() * solver.solve(b);
    const double* s = &symmetric[static_cast<std::size_t>(alpha * 4)];
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out(alpha, k, i, j) = s[k + i + j] + p(k * 4 + i * 2 + j);
  }
  return out;
}

KatoCheck check_kato_inequality(const GradSFF& t, const CurvatureTensor& r, const AdaptedFrame& f, double eta,
                                CodazziSign sign) {
  if (!(eta > 0.0 && eta < 0.75)) throw std::invalid_argument("check_kato_inequality: eta must lie in (0, 3/4)");
  const CurvatureTensor rf = r.in_frame(f.e);
  double tmax = 0.0;
  for (double v : t.t) tmax = std::max(tmax, std::abs(v));
  const double tol = kAuditSlack * std::max(r.scale(), tmax);
  for (int a = 0; a < 2; ++a)
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          if (std::abs(t(a, k, i, j) - t(a, k, j, i)) > tol)
            throw std::invalid_argument("check_kato_inequality: T is not symmetric in (i, j)");
          if (std::abs(t.defect(a, k, i, j) - defect_from_frame(rf, sign, a, k, i, j)) > tol)
            throw std::invalid_argument("check_kato_inequality: Codazzi defect does not match the curvature");
        }
  KatoCheck out;
  out.lhs = t.norm_sq();
  out.w_sq = normal_ricci_components(r, f).squaredNorm();
  out.rhs = (0.75 - eta) * t.grad_mean().squaredNorm() - (0.25 / eta - 1.0) * out.w_sq;
  out.ok = out.lhs >= out.rhs - kAuditSlack * std::max(r.scale(), out.lhs);
  return out;
}

}  // namespace symflow
