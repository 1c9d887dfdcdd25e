#pragma once

#include <array>
#include <complex>
#include <cstdint>

#include <Eigen/Dense>

#include "symflow/tensor.hpp"

namespace symflow::flow {

using Herm = Eigen::Matrix3cd;
using CVec3 = Eigen::Vector3cd;

/// Real inner product Re tr(A B^*) on 3x3 complex matrices.
double frob_dot(const Herm& a, const Herm& b);
inline double frob_norm(const Herm& a) { return std::sqrt(frob_dot(a, a)); }

/// P = v v^* / |v|^2.
Herm projector(const CVec3& v);
/// Unit eigenvector for the largest eigenvalue of a Hermitian matrix, phase-fixed
/// so that its largest component is real and positive.
CVec3 dominant_eigenvector(const Herm& m);
/// Nearest rank-1 projector to a Hermitian matrix.
Herm retract(const Herm& m);
/// max(|P^2 - P|, |P - P^*|, |tr P - 1|).
double projector_defect(const Herm& p);

/// Orthonormal basis of the tangent space of CP^2 at P, in embedding units.
/// e[1] = J e[0] and e[3] = J e[2], so J acts as the standard J0 in these coordinates.
struct TangentBasis {
  Herm p;
  CVec3 v;
  std::array<Herm, 4> e;

  Vec4 coords(const Herm& y) const;
  Herm from_coords(const Vec4& x) const;
};

/// CP^2 with holomorphic sectional curvature k, realized as F = s P with
/// s = sqrt(2/k) in the 9-dimensional space of Hermitian matrices with the
/// Frobenius metric. The induced metric is the Fubini-Study metric scaled to
/// holomorphic sectional curvature k.
class AmbientCP2 {
 public:
  /// Throws std::invalid_argument for k <= 0.
  explicit AmbientCP2(double k);

  double k() const { return k_; }
  double scale() const { return s_; }
  double injectivity_radius() const;

  Herm embed(const Herm& p) const { return s_ * p; }

  /// Tangent basis at P. `phase` rotates the chosen basis of ker P by a unitary
  /// (used to test basis independence).
  TangentBasis tangent_basis(const Herm& p, double phase = 0.0) const;
  /// i(PX - XP)
  static Herm apply_j(const Herm& p, const Herm& x);
  /// PY(1 - P) + (1 - P)YP
  static Herm tangent_projection(const Herm& p, const Herm& y);

  /// Second fundamental form of the embedding at P for tangent X, Y.
  Herm embedding_sff(const Herm& p, const Herm& x, const Herm& y) const;
  /// Curvature tensor in the basis `b` from the Gauss equation of the embedding.
  CurvatureTensor curvature_at(const TangentBasis& b) const;
  /// Largest deviation of curvature_at from constant_hsc_tensor(k), relative to k,
  /// over `samples` random points.
  double verify_scale(std::uint64_t seed, int samples) const;

  /// Geodesic distance.
  double distance(const Herm& p, const Herm& q) const;
  /// Normal coordinates of Q in the basis `b`; |result| = distance.
  Vec4 log_map(const TangentBasis& b, const Herm& q) const;

 private:
  double k_;
  double s_;
};

}  // namespace symflow::flow
