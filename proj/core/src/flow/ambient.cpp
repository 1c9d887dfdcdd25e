#include "symflow/flow/ambient.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace symflow::flow {

namespace {

const std::complex<double> kI(0.0, 1.0);

// X(w) = (w v^* + v w^*) / sqrt(2), unit length for unit w orthogonal to v.
Herm horizontal(const CVec3& v, const CVec3& w) {
  return (w * v.adjoint() + v * w.adjoint()) / std::numbers::sqrt2;
}

}  // namespace

double frob_dot(const Herm& a, const Herm& b) { return (a.array() * b.conjugate().array()).sum().real(); }

Herm projector(const CVec3& v) {
  const double n2 = v.squaredNorm();
  if (!(n2 > 0.0)) throw std::invalid_argument("projector: zero vector");
  return v * v.adjoint() / n2;
}

CVec3 dominant_eigenvector(const Herm& m) {
  Eigen::SelfAdjointEigenSolver<Herm> eig(m);
  CVec3 v = eig.eigenvectors().col(2);
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  v *= std::abs(v(imax)) / v(imax);
  return v.normalized();
}

Herm retract(const Herm& m) {
  const Herm h = 0.5 * (m + m.adjoint());
  return projector(dominant_eigenvector(h));
}

double projector_defect(const Herm& p) {
  const double idem = (p * p - p).cwiseAbs().maxCoeff();
  const double herm = (p - p.adjoint()).cwiseAbs().maxCoeff();
  const double tr = std::abs(p.trace() - 1.0);
  return std::max({idem, herm, tr});
}

Vec4 TangentBasis::coords(const Herm& y) const {
  return {frob_dot(y, e[0]), frob_dot(y, e[1]), frob_dot(y, e[2]), frob_dot(y, e[3])};
}

Herm TangentBasis::from_coords(const Vec4& x) const {
  return x[0] * e[0] + x[1] * e[1] + x[2] * e[2] + x[3] * e[3];
}

AmbientCP2::AmbientCP2(double k) : k_(k), s_(0.0) {
  if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("AmbientCP2: k must be positive");
  s_ = std::sqrt(2.0 / k);
}

double AmbientCP2::injectivity_radius() const { return std::numbers::pi / std::sqrt(k_); }

TangentBasis AmbientCP2::tangent_basis(const Herm& p, double phase) const {
  TangentBasis b;
  b.p = p;
  Eigen::SelfAdjointEigenSolver<Herm> eig(p);
  b.v = eig.eigenvectors().col(2);
  CVec3 u1 = eig.eigenvectors().col(0);
  CVec3 u2 = eig.eigenvectors().col(1);
  if (phase != 0.0) {
    const double c = std::cos(phase), s = std::sin(phase);
    const CVec3 a = c * u1 + s * std::exp(kI * phase) * u2;
    const CVec3 d = -s * std::exp(-kI * phase) * u1 + c * u2;
    u1 = a;
    u2 = d;
  }
  b.e[0] = horizontal(b.v, u1);
  b.e[1] = apply_j(p, b.e[0]);
  b.e[2] = horizontal(b.v, u2);
  b.e[3] = apply_j(p, b.e[2]);
  return b;
}

Herm AmbientCP2::apply_j(const Herm& p, const Herm& x) { return kI * (p * x - x * p); }

Herm AmbientCP2::tangent_projection(const Herm& p, const Herm& y) {
  const Herm q = Herm::Identity() - p;
  return p * y * q + q * y * p;
}

Herm AmbientCP2::embedding_sff(const Herm& p, const Herm& x, const Herm& y) const {
  // Tangent projector Pi(Y) = PY + YP - 2PYP; differentiate along X with dP = X / s,
  // then keep the part normal to CP^2.
  const Herm d = (x * y + y * x - 2.0 * (x * y * p + p * y * x)) / s_;
  return d - tangent_projection(p, d);
}

CurvatureTensor AmbientCP2::curvature_at(const TangentBasis& b) const {
  std::array<std::array<Herm, 4>, 4> ii;
  for (int a = 0; a < 4; ++a)
    for (int c = 0; c < 4; ++c) ii[a][c] = embedding_sff(b.p, b.e[a], b.e[c]);
  CurvatureTensor r;
  for (int a = 0; a < 4; ++a)
    for (int bb = 0; bb < 4; ++bb)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d)
          r(a, bb, c, d) = frob_dot(ii[a][c], ii[bb][d]) - frob_dot(ii[a][d], ii[bb][c]);
  return r;
}

double AmbientCP2::verify_scale(std::uint64_t seed, int samples) const {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  const CurvatureTensor model = constant_hsc_tensor(k_);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    CVec3 v;
    for (int j = 0; j < 3; ++j) v(j) = {g(rng), g(rng)};
    const CurvatureTensor r = curvature_at(tangent_basis(projector(v)));
    for (std::size_t j = 0; j < 256; ++j) worst = std::max(worst, std::abs(r.data()[j] - model.data()[j]) / k_);
  }
  return worst;
}

double AmbientCP2::distance(const Herm& p, const Herm& q) const {
  const double overlap = std::clamp(frob_dot(p, q), 0.0, 1.0);  // |<v, w>|^2
  return 2.0 / std::sqrt(k_) * std::acos(std::sqrt(overlap));
}

Vec4 AmbientCP2::log_map(const TangentBasis& b, const Herm& q) const {
  CVec3 w = dominant_eigenvector(q);
  const std::complex<double> c = b.v.dot(w);  // v^* w
  const double ac = std::abs(c);
  if (ac > 0.0) w *= std::conj(c) / ac;
  const CVec3 perp = w - ac * b.v;
  const double pn = perp.norm();
  if (pn < 1e-300) return Vec4::Zero();
  const double rho = std::atan2(pn, ac);
  const Vec4 dir = b.coords(horizontal(b.v, perp / pn));
  return 2.0 * rho / std::sqrt(k_) * dir.normalized();
}

}  // namespace symflow::flow
