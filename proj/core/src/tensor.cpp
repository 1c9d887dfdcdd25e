#include "symflow/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace symflow {

namespace {

using Vec256 = Eigen::Matrix<double, 256, 1>;
using Basis = Eigen::Matrix<double, 256, Eigen::Dynamic>;

// Orthonormal basis of the Kahler curvature tensor subspace, computed once as the
// null space of the stacked symmetry constraints.
const Basis& kahler_basis() {
  static const Basis basis = [] {
    const Mat4& j = ComplexStructure::standard().matrix();
    auto idx = [](int a, int b, int c, int d) { return CurvatureTensor::index(a, b, c, d); };
    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(5 * 256, 256);
    int row = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d) {
            const int i = idx(a, b, c, d);
            rows(row, i) += 1.0;
            rows(row, idx(b, a, c, d)) += 1.0;
            ++row;
            rows(row, i) += 1.0;
            rows(row, idx(a, b, d, c)) += 1.0;
            ++row;
            rows(row, i) += 1.0;
            rows(row, idx(c, d, a, b)) -= 1.0;
            ++row;
            rows(row, i) += 1.0;
            rows(row, idx(b, c, a, d)) += 1.0;
            rows(row, idx(c, a, b, d)) += 1.0;
            ++row;
            // R(J e_a, J e_b, e_c, e_d) - R(e_a, e_b, e_c, e_d)
            for (int p = 0; p < 4; ++p)
              for (int q = 0; q < 4; ++q) rows(row, idx(p, q, c, d)) += j(p, a) * j(q, b);
            rows(row, i) -= 1.0;
            ++row;
          }
    const Eigen::MatrixXd gram = rows.transpose() * rows;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    std::vector<int> null_cols;
    for (int k = 0; k < 256; ++k)
      if (eig.eigenvalues()(k) < 1e-9) null_cols.push_back(k);
    // Re-orthonormalize in extended precision so that B^T B = I to the last bit;
    // idempotence of B B^T depends on it.
    using LMat = Eigen::Matrix<long double, 256, Eigen::Dynamic>;
    LMat q = eig.eigenvectors()(Eigen::all, null_cols).cast<long double>();
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index k = 0; k < q.cols(); ++k) {
        for (Eigen::Index m = 0; m < k; ++m) q.col(k) -= q.col(m).dot(q.col(k)) * q.col(m);
        q.col(k) /= q.col(k).norm();
      }
    Basis b = q.cast<double>();
    return b;
  }();
  return basis;
}

}  // namespace

ComplexStructure::ComplexStructure() {
  j_.setZero();
  j_(1, 0) = 1.0;
  j_(0, 1) = -1.0;
  j_(3, 2) = 1.0;
  j_(2, 3) = -1.0;
}

const ComplexStructure& ComplexStructure::standard() {
  static const ComplexStructure j;
  return j;
}

double CurvatureTensor::eval(const Vec4& x, const Vec4& y, const Vec4& z, const Vec4& w) const {
  double total = 0.0;
  for (int a = 0; a < 4; ++a) {
    if (x[a] == 0.0) continue;
    double sa = 0.0;
    for (int b = 0; b < 4; ++b) {
      if (y[b] == 0.0) continue;
      double sb = 0.0;
      for (int c = 0; c < 4; ++c) {
        const double* row = &r_[index(a, b, c, 0)];
        sb += z[c] * (row[0] * w[0] + row[1] * w[1] + row[2] * w[2] + row[3] * w[3]);
      }
      sa += y[b] * sb;
    }
    total += x[a] * sa;
  }
  return total;
}

double CurvatureTensor::holomorphic(const Vec4& x) const {
  const Vec4 jx = apply_j(x);
  return eval(x, jx, x, jx);
}

double CurvatureTensor::hsc(const Vec4& x) const {
  const double n2 = x.squaredNorm();
  return holomorphic(x) / (n2 * n2);
}

CurvatureTensor CurvatureTensor::in_frame(const Mat4& f) const {
  // Transform one slot at a time: 4 passes of 256 * 4 multiply-adds.
  std::array<double, 256> a = r_;
  std::array<double, 256> b{};
  for (int slot = 0; slot < 4; ++slot) {
    b.fill(0.0);
    for (int i = 0; i < 256; ++i) {
      int digits[4] = {i >> 6, (i >> 4) & 3, (i >> 2) & 3, i & 3};
      const int orig = digits[slot];
      for (int m = 0; m < 4; ++m) {
        digits[slot] = m;
        const int target = ((digits[0] * 4 + digits[1]) * 4 + digits[2]) * 4 + digits[3];
        b[target] += f(orig, m) * a[i];
      }
    }
    a = b;
  }
  CurvatureTensor out;
  out.r_ = a;
  return out;
}

double CurvatureTensor::max_abs() const {
  double m = 0.0;
  for (double v : r_) m = std::max(m, std::abs(v));
  return m;
}

double CurvatureTensor::scale() const { return std::max(1.0, max_abs()); }

CurvatureTensor& CurvatureTensor::operator+=(const CurvatureTensor& o) {
  for (int i = 0; i < 256; ++i) r_[i] += o.r_[i];
  return *this;
}

CurvatureTensor& CurvatureTensor::operator*=(double s) {
  for (double& v : r_) v *= s;
  return *this;
}

double SymmetryDefects::max() const { return std::max({antisymmetry, pair_symmetry, bianchi, kahler}); }

SymmetryDefects symmetry_defects(const CurvatureTensor& r) {
  const Mat4& j = ComplexStructure::standard().matrix();
  SymmetryDefects d;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int e = 0; e < 4; ++e) {
          const double v = r(a, b, c, e);
          d.antisymmetry = std::max({d.antisymmetry, std::abs(v + r(b, a, c, e)), std::abs(v + r(a, b, e, c))});
          d.pair_symmetry = std::max(d.pair_symmetry, std::abs(v - r(c, e, a, b)));
          d.bianchi = std::max(d.bianchi, std::abs(v + r(b, c, a, e) + r(c, a, b, e)));
          double rot = 0.0;
          for (int p = 0; p < 4; ++p)
            for (int q = 0; q < 4; ++q) rot += j(p, a) * j(q, b) * r(p, q, c, e);
          d.kahler = std::max(d.kahler, std::abs(rot - v));
        }
  return d;
}

CurvatureTensor project_to_kahler(const CurvatureTensor& r) {
  // Accumulate in extended precision; the result is then within an ulp of the
  // exact projection and projecting twice reproduces it.
  const Basis& b = kahler_basis();
  const auto bl = b.cast<long double>();
  const Eigen::Map<const Vec256> v(r.data().data());
  const Eigen::Matrix<long double, Eigen::Dynamic, 1> coef = bl.transpose() * v.cast<long double>();
  const Eigen::Matrix<long double, 256, 1> p = bl * coef;
  CurvatureTensor out;
  Eigen::Map<Vec256>(out.data().data()) = p.cast<double>();
  return out;
}

int kahler_space_dimension() { return static_cast<int>(kahler_basis().cols()); }

CurvatureTensor constant_hsc_tensor(double k) {
  if (!(k > 0.0)) throw std::invalid_argument("constant_hsc_tensor: k must be positive");
  const Mat4& j = ComplexStructure::standard().matrix();
  auto g = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  // <J e_a, e_b> = J(b, a)
  auto w = [&](int a, int b) { return j(b, a); };
  CurvatureTensor r;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d)
          r(a, b, c, d) = 0.25 * k *
                          (g(a, c) * g(b, d) - g(a, d) * g(b, c) + w(a, c) * w(b, d) - w(a, d) * w(b, c) +
                           2.0 * w(a, b) * w(c, d));
  return r;
}

Vec4 hopf_lift(const Eigen::Vector3d& n) {
  const Eigen::Vector3d u = n.normalized();
  const double theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
  const double phi = std::atan2(u.y(), u.x());
  return Vec4(std::cos(theta / 2), 0.0, std::sin(theta / 2) * std::cos(phi), std::sin(theta / 2) * std::sin(phi));
}

Eigen::Vector3d hopf_project(const Vec4& x) {
  const std::complex<double> z0(x[0], x[1]);
  const std::complex<double> z1(x[2], x[3]);
  const std::complex<double> m = std::conj(z0) * z1;
  return {2.0 * m.real(), 2.0 * m.imag(), std::norm(z0) - std::norm(z1)};
}

namespace {

// K restricted to S^2 is c + b.n + n^T M n (the U(1)-invariant quartics are
// quadratic in the Hopf coordinates).
struct QuadraticOnSphere {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  double c = 0.0;

  double value(const Eigen::Vector3d& n) const { return c + b.dot(n) + n.dot(m * n); }
};

Eigen::Matrix<double, 9, 1> sphere_features(const Eigen::Vector3d& n) {
  Eigen::Matrix<double, 9, 1> f;
  f << 1.0, n.x(), n.y(), n.z(), n.x() * n.x(), n.y() * n.y(), n.x() * n.y(), n.x() * n.z(), n.y() * n.z();
  return f;
}

QuadraticOnSphere fit_quadratic(const std::vector<Eigen::Vector3d>& pts, const std::vector<double>& vals) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(pts.size()), 9);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    a.row(static_cast<Eigen::Index>(i)) = sphere_features(pts[i]).transpose();
    rhs(static_cast<Eigen::Index>(i)) = vals[i];
  }
  const Eigen::VectorXd q = a.colPivHouseholderQr().solve(rhs);
  QuadraticOnSphere out;
  out.c = q(0);
  out.b = q.segment<3>(1);
  out.m(0, 0) = q(4);
  out.m(1, 1) = q(5);
  out.m(0, 1) = out.m(1, 0) = 0.5 * q(6);
  out.m(0, 2) = out.m(2, 0) = 0.5 * q(7);
  out.m(1, 2) = out.m(2, 1) = 0.5 * q(8);
  return out;
}

// Riemannian Newton on S^2 toward a critical point of the model; sign = +1 for
// minimization, -1 for maximization. Steps that do not improve fall back to a
// short gradient step.
Eigen::Vector3d refine_on_sphere(const QuadraticOnSphere& q, Eigen::Vector3d n, double sign, int steps) {
  for (int it = 0; it < steps; ++it) {
    const Eigen::Vector3d grad = 2.0 * q.m * n + q.b;
    Eigen::Vector3d t1 = n.unitOrthogonal();
    Eigen::Vector3d t2 = n.cross(t1);
    Eigen::Matrix<double, 3, 2> t;
    t << t1, t2;
    const Eigen::Vector2d g = t.transpose() * grad;
    if (g.norm() < 1e-15) break;
    Eigen::Matrix2d h = t.transpose() * (2.0 * q.m) * t - n.dot(grad) * Eigen::Matrix2d::Identity();
    const double f0 = sign * q.value(n);
    Eigen::Vector3d cand = n;
    const Eigen::Matrix2d hs = sign * h;
    bool accepted = false;
    if (hs.determinant() > 0 && hs.trace() > 0) {
      const Eigen::Vector2d step = -h.ldlt().solve(g);
      cand = (n + t * step).normalized();
      accepted = sign * q.value(cand) <= f0 + 1e-15;
    }
    if (!accepted) {
      double s = 0.25;
      for (int k = 0; k < 30; ++k, s *= 0.5) {
        cand = (n - sign * s * (t * g)).normalized();
        if (sign * q.value(cand) < f0) {
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) break;
    n = cand;
  }
  return n;
}

}  // namespace

HscExtrema hsc_extrema(const CurvatureTensor& r, int grid, int newton_steps) {
  if (grid < 4) throw std::invalid_argument("hsc_extrema: grid must be at least 4");
  std::vector<Eigen::Vector3d> pts;
  std::vector<double> vals;
  pts.reserve(static_cast<std::size_t>(grid * grid));
  vals.reserve(pts.capacity());
  for (int i = 0; i < grid; ++i) {
    // Cell-centred polar angles avoid duplicating the poles.
    const double theta = std::numbers::pi * (i + 0.5) / grid;
    for (int jdx = 0; jdx < grid; ++jdx) {
      const double phi = 2.0 * std::numbers::pi * jdx / grid;
      const Eigen::Vector3d n(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
      pts.push_back(n);
      vals.push_back(r.hsc(hopf_lift(n)));
    }
  }
  const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
  const std::size_t ilo = static_cast<std::size_t>(lo - vals.begin());
  const std::size_t ihi = static_cast<std::size_t>(hi - vals.begin());

  HscExtrema out;
  out.k1 = *lo;
  out.k2 = *hi;
  out.argmin = hopf_lift(pts[ilo]);
  out.argmax = hopf_lift(pts[ihi]);
  if (newton_steps <= 0) return out;

  const QuadraticOnSphere q = fit_quadratic(pts, vals);
  const Eigen::Vector3d nmin = refine_on_sphere(q, pts[ilo], 1.0, newton_steps);
  const Eigen::Vector3d nmax = refine_on_sphere(q, pts[ihi], -1.0, newton_steps);
  const Vec4 xmin = hopf_lift(nmin);
  const Vec4 xmax = hopf_lift(nmax);
  const double kmin = r.hsc(xmin);
  const double kmax = r.hsc(xmax);
  if (kmin < out.k1) {
    out.k1 = kmin;
    out.argmin = xmin;
  }
  if (kmax > out.k2) {
    out.k2 = kmax;
    out.argmax = xmax;
  }
  return out;
}

KahlerCurvatureModel sample_kahler_tensor(std::uint64_t seed, double k, double eps, int max_attempts) {
  if (!(eps >= 0.0)) throw std::invalid_argument("sample_kahler_tensor: eps must be nonnegative");
  const CurvatureTensor base = constant_hsc_tensor(k);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    KahlerCurvatureModel model;
    model.tensor = base;
    model.attempts = attempt;
    if (eps > 0.0) {
      CurvatureTensor raw;
      for (double& v : raw.data()) v = uni(rng);
      CurvatureTensor pert = project_to_kahler(raw);
      const double m = pert.max_abs();
      if (m == 0.0) continue;
      pert *= eps / m;
      model.tensor += pert;
    }
    const HscExtrema ext = hsc_extrema(model.tensor);
    if (!(ext.k1 > 0.0)) continue;
    model.k1 = ext.k1;
    model.k2 = std::max(ext.k1, ext.k2);
    model.lambda = model.k2 / model.k1;
    return model;
  }
  throw std::runtime_error("sample_kahler_tensor: no positive-HSC sample after bounded retries");
}

SectionalCurvature sectional_and_hsc(const CurvatureTensor& r, const Vec4& x, const Vec4& y) {
  SectionalCurvature out;
  out.biquadratic = r.biquadratic(x, y);
  const double wedge2 = x.squaredNorm() * y.squaredNorm() - x.dot(y) * x.dot(y);
  if (wedge2 >= 1e-24) out.sectional = out.biquadratic / wedge2;
  return out;
}

PolarizationResiduals verify_polarization_identities(const CurvatureTensor& r, const Vec4& x, const Vec4& y,
                                                     const Vec4& z) {
  const Vec4 jy = apply_j(y);
  auto h = [&](const Vec4& v) { return r.holomorphic(v); };
  const double recovered =
      (3.0 * h(x + jy) + 3.0 * h(x - jy) - h(x + y) - h(x - y) - 4.0 * h(x) - 4.0 * h(y)) / 32.0;
  PolarizationResiduals out;
  out.sectional = std::abs(r.biquadratic(x, y) - recovered);
  const double mixed = 0.25 * (r.biquadratic(x, y + z) - r.biquadratic(x, y - z));
  out.mixed = std::abs(r.eval(x, y, x, z) - mixed);
  return out;
}

}  // namespace symflow
