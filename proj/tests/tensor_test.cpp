#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "symflow/tensor.hpp"

namespace symflow {
namespace {

Vec4 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec4 v(n(rng), n(rng), n(rng), n(rng));
  return v.normalized();
}

// Closed form of the complex space form evaluated on vectors, independent of the
// component array.
double space_form(double k, const Vec4& x, const Vec4& y, const Vec4& z, const Vec4& w) {
  const Vec4 jx = apply_j(x);
  const Vec4 jy = apply_j(y);
  const Vec4 jz = apply_j(z);
  return k / 4.0 *
         (x.dot(z) * y.dot(w) - x.dot(w) * y.dot(z) + jx.dot(z) * jy.dot(w) - jx.dot(w) * jy.dot(z) +
          2.0 * jx.dot(y) * jz.dot(w));
}

TEST(ComplexStructure, SquaresToMinusIdentityAndIsOrthogonal) {
  const Mat4& j = ComplexStructure::standard().matrix();
  EXPECT_LT((j * j + Mat4::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((j.transpose() * j - Mat4::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(apply_j(Vec4::Unit(0)), Vec4::Unit(1));
  EXPECT_EQ(apply_j(Vec4::Unit(2)), Vec4::Unit(3));
}

TEST(ConstantModel, MatchesClosedFormOnRandomVectors) {
  std::mt19937_64 rng(11);
  const CurvatureTensor r = constant_hsc_tensor(1.7);
  for (int i = 0; i < 200; ++i) {
    const Vec4 x = random_unit(rng), y = random_unit(rng), z = random_unit(rng), w = random_unit(rng);
    EXPECT_NEAR(r.eval(x, y, z, w), space_form(1.7, x, y, z, w), 1e-14);
  }
}

TEST(ConstantModel, SatisfiesAllSymmetries) {
  const SymmetryDefects d = symmetry_defects(constant_hsc_tensor(3.0));
  EXPECT_LT(d.max(), 1e-12);
}

TEST(ConstantModel, HolomorphicSectionalCurvatureIsK) {
  std::mt19937_64 rng(1);
  const CurvatureTensor r = constant_hsc_tensor(1.0);
  for (int i = 0; i < 100; ++i) EXPECT_NEAR(r.hsc(random_unit(rng)), 1.0, 1e-14);
}

TEST(ConstantModel, TotallyRealPlaneHasQuarterCurvature) {
  const CurvatureTensor r = constant_hsc_tensor(1.0);
  // e1 and e3 are orthonormal with <J e1, e3> = 0.
  EXPECT_NEAR(r.biquadratic(Vec4::Unit(0), Vec4::Unit(2)), 0.25, 1e-15);
}

TEST(ConstantModel, BiquadraticDependsOnKahlerAngle) {
  std::mt19937_64 rng(5);
  const double k = 2.5;
  const CurvatureTensor r = constant_hsc_tensor(k);
  for (int i = 0; i < 100; ++i) {
    const Vec4 x = random_unit(rng);
    Vec4 y = random_unit(rng);
    y = (y - y.dot(x) * x).normalized();
    const double c = apply_j(x).dot(y);
    EXPECT_NEAR(r.biquadratic(x, y), k * (1.0 + 3.0 * c * c) / 4.0, 1e-14);
    const auto sc = sectional_and_hsc(r, x, y);
    ASSERT_TRUE(sc.sectional.has_value());
    EXPECT_GE(*sc.sectional, k / 4.0 - 1e-14);
    EXPECT_LE(*sc.sectional, k + 1e-14);
  }
}

TEST(ConstantModel, RejectsNonPositiveK) {
  EXPECT_THROW(constant_hsc_tensor(0.0), std::invalid_argument);
  EXPECT_THROW(constant_hsc_tensor(-1.0), std::invalid_argument);
}

TEST(Projection, KahlerSpaceHasDimensionNine) { EXPECT_EQ(kahler_space_dimension(), 9); }

TEST(Projection, ProducesKahlerTensorsAndIsIdempotent) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CurvatureTensor raw;
  for (double& v : raw.data()) v = u(rng);
  const CurvatureTensor p = project_to_kahler(raw);
  EXPECT_LT(symmetry_defects(p).max(), 1e-12);
  const CurvatureTensor pp = project_to_kahler(p);
  for (int i = 0; i < 256; ++i) EXPECT_NEAR(pp.data()[i], p.data()[i], 1e-15);
  // Orthogonal: the removed part is perpendicular to the kept part.
  double dot = 0.0;
  for (int i = 0; i < 256; ++i) dot += (raw.data()[i] - p.data()[i]) * p.data()[i];
  EXPECT_NEAR(dot, 0.0, 1e-12);
}

TEST(Projection, FixesTheConstantModel) {
  const CurvatureTensor r = constant_hsc_tensor(1.0);
  const CurvatureTensor p = project_to_kahler(r);
  for (int i = 0; i < 256; ++i) EXPECT_NEAR(p.data()[i], r.data()[i], 1e-14);
}

TEST(Hopf, LiftIsASectionOfTheProjection) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    const Vec4 x = random_unit(rng);
    const Eigen::Vector3d n = hopf_project(x);
    EXPECT_NEAR(n.norm(), 1.0, 1e-14);
    EXPECT_LT((hopf_project(hopf_lift(n)) - n).norm(), 1e-12);
  }
}

TEST(HscExtrema, ConstantModel) {
  const HscExtrema e = hsc_extrema(constant_hsc_tensor(2.0));
  EXPECT_NEAR(e.k1, 2.0, 1e-9);
  EXPECT_NEAR(e.k2, 2.0, 1e-9);
}

// Independent refinement directly on S^3 with a numerical gradient.
double descend_on_s3(const CurvatureTensor& r, Vec4 x, double sign) {
  double step = 0.05;
  double best = sign * r.hsc(x);
  for (int it = 0; it < 20000 && step > 1e-12; ++it) {
    Vec4 g;
    for (int a = 0; a < 4; ++a) {
      const double h = 1e-6;
      Vec4 p = x, m = x;
      p[a] += h;
      m[a] -= h;
      g[a] = sign * (r.hsc(p.normalized()) - r.hsc(m.normalized())) / (2 * h);
    }
    g -= g.dot(x) * x;
    const Vec4 cand = (x - step * g).normalized();
    const double v = sign * r.hsc(cand);
    if (v < best) {
      best = v;
      x = cand;
      step *= 1.2;
    } else {
      step *= 0.5;
    }
  }
  return sign * best;
}

TEST(HscExtrema, ContainsAndMatchesIndependentSearch) {
  const KahlerCurvatureModel m = sample_kahler_tensor(7, 1.0, 0.05);
  std::mt19937_64 rng(99);
  double lo = 1e300, hi = -1e300;
  Vec4 xlo, xhi;
  for (int i = 0; i < 1000; ++i) {
    const Vec4 x = random_unit(rng);
    const double k = m.tensor.hsc(x);
    EXPECT_GE(k, m.k1 - 1e-12);
    EXPECT_LE(k, m.k2 + 1e-12);
    if (k < lo) lo = k, xlo = x;
    if (k > hi) hi = k, xhi = x;
  }
  EXPECT_NEAR(descend_on_s3(m.tensor, xlo, 1.0), m.k1, 1e-6 * m.k1);
  EXPECT_NEAR(descend_on_s3(m.tensor, xhi, -1.0), m.k2, 1e-6 * m.k2);
}

TEST(Sampler, ZeroEpsGivesConstantModel) {
  const KahlerCurvatureModel m = sample_kahler_tensor(123, 1.5, 0.0);
  EXPECT_NEAR(m.k1, 1.5, 1e-9);
  EXPECT_NEAR(m.k2, 1.5, 1e-9);
  EXPECT_NEAR(m.lambda, 1.0, 1e-9);
}

TEST(Sampler, PerturbedModelIsPinchedKahler) {
  const KahlerCurvatureModel m = sample_kahler_tensor(7, 1.0, 0.05);
  EXPECT_GE(m.lambda, 1.0);
  EXPECT_LT(m.lambda, 2.0);
  EXPECT_GT(m.k1, 0.0);
  EXPECT_EQ(m.lambda, m.k2 / m.k1);
  EXPECT_LT(symmetry_defects(m.tensor).max(), 1e-12);
}

TEST(Sampler, IsDeterministic) {
  const KahlerCurvatureModel a = sample_kahler_tensor(42, 1.0, 0.05);
  const KahlerCurvatureModel b = sample_kahler_tensor(42, 1.0, 0.05);
  EXPECT_EQ(a.tensor.data(), b.tensor.data());
  EXPECT_EQ(a.k1, b.k1);
  EXPECT_EQ(a.k2, b.k2);
}

TEST(Sampler, LargePerturbationFailsAfterRetries) {
  EXPECT_THROW(sample_kahler_tensor(1, 1.0, 50.0, 3), std::runtime_error);
}

TEST(Sectional, HolomorphicPlaneAndHomogeneity) {
  const CurvatureTensor r = constant_hsc_tensor(3.0);
  const Vec4 x = Vec4(1, 2, -1, 0.5).normalized();
  const Vec4 y = apply_j(x);
  const auto s = sectional_and_hsc(r, x, y);
  EXPECT_NEAR(s.biquadratic, 3.0, 1e-14);
  EXPECT_NEAR(*s.sectional, 3.0, 1e-14);
  const auto s2 = sectional_and_hsc(r, 2.0 * x, y);
  EXPECT_NEAR(s2.biquadratic, 4.0 * s.biquadratic, 1e-13);
  EXPECT_NEAR(*s2.sectional, *s.sectional, 1e-14);
}

TEST(Sectional, DegenerateSpanHasNoSectionalValue) {
  const CurvatureTensor r = constant_hsc_tensor(1.0);
  const Vec4 x(1, 0, 0, 0);
  const auto s = sectional_and_hsc(r, x, 3.0 * x);
  EXPECT_FALSE(s.sectional.has_value());
  EXPECT_NEAR(s.biquadratic, 0.0, 1e-15);
}

TEST(Polarization, ConstantModelResidualsVanish) {
  std::mt19937_64 rng(2);
  const CurvatureTensor r = constant_hsc_tensor(1.0);
  for (int i = 0; i < 100; ++i) {
    const auto res = verify_polarization_identities(r, random_unit(rng), random_unit(rng), random_unit(rng));
    EXPECT_LT(res.sectional, 1e-10);
    EXPECT_LT(res.mixed, 1e-10);
  }
}

TEST(Polarization, SampledModelResidualsVanish) {
  std::mt19937_64 rng(4);
  const KahlerCurvatureModel m = sample_kahler_tensor(9, 1.0, 0.05);
  const double tol = 1e-9 * m.tensor.scale();
  for (int i = 0; i < 1000; ++i) {
    const auto res = verify_polarization_identities(m.tensor, random_unit(rng), random_unit(rng), random_unit(rng));
    EXPECT_LT(res.sectional, tol);
    EXPECT_LT(res.mixed, tol);
  }
}

TEST(Polarization, MixedIdentityWithEqualArguments) {
  const KahlerCurvatureModel m = sample_kahler_tensor(10, 1.0, 0.05);
  const Vec4 x = Vec4(0.3, -1, 2, 0.1), y = Vec4(1, 1, 0, -2);
  EXPECT_LT(verify_polarization_identities(m.tensor, x, y, y).mixed, 1e-12);
}

TEST(Polarization, NonKahlerTensorBreaksTheHolomorphicIdentity) {
  // The real space form of constant sectional curvature 1 satisfies every
  // Riemannian symmetry but is not Kahler.
  CurvatureTensor r;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) r(a, b, c, d) = (a == c) * (b == d) - (a == d) * (b == c);
  const auto res = verify_polarization_identities(r, Vec4(1, 0, 0, 0), Vec4(0, 0, 1, 0), Vec4(0, 1, 0, 0));
  EXPECT_GT(res.sectional, 1e-3);
}

TEST(Homogeneity, ScalingTensorScalesCurvatures) {
  const KahlerCurvatureModel m = sample_kahler_tensor(21, 1.0, 0.05);
  const CurvatureTensor r3 = 3.0 * m.tensor;
  const HscExtrema e = hsc_extrema(r3);
  EXPECT_NEAR(e.k1, 3.0 * m.k1, 1e-9);
  EXPECT_NEAR(e.k2, 3.0 * m.k2, 1e-9);
  EXPECT_NEAR(e.k2 / e.k1, m.lambda, 1e-9);
}

TEST(Frames, InFrameMatchesDirectEvaluation) {
  const KahlerCurvatureModel m = sample_kahler_tensor(5, 1.0, 0.05);
  std::mt19937_64 rng(6);
  Eigen::Matrix4d q = Eigen::Matrix4d::Random();
  q = Eigen::HouseholderQR<Eigen::Matrix4d>(q).householderQ();
  const CurvatureTensor rf = m.tensor.in_frame(q);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      EXPECT_NEAR(rf(a, b, a, (b + 1) % 4), m.tensor.eval(q.col(a), q.col(b), q.col(a), q.col((b + 1) % 4)), 1e-14);
}

}  // namespace
}  // namespace symflow
