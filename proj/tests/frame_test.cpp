#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "symflow/frame.hpp"

namespace symflow {
namespace {

Vec4 gaussian4(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Vec4(n(rng), n(rng), n(rng), n(rng));
}

SecondFundamentalForm random_sff(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  SecondFundamentalForm s;
  for (auto& h : s.h) {
    h(0, 0) = n(rng);
    h(1, 1) = n(rng);
    h(0, 1) = h(1, 0) = n(rng);
  }
  return s;
}

Mat4 random_rotation(std::mt19937_64& rng) {
  Mat4 a;
  for (int i = 0; i < 4; ++i) a.col(i) = gaussian4(rng);
  Mat4 q = Eigen::HouseholderQR<Mat4>(a).householderQ();
  if (q.determinant() < 0) q.col(3) = -q.col(3);
  return q;
}

TEST(AdaptedFrame, HolomorphicPlane) {
  const Vec4 t1 = Vec4(0.3, -0.2, 1.0, 0.4);
  const AdaptedFrame f = adapted_frame_from_plane(t1, apply_j(t1));
  EXPECT_NEAR(f.cos_alpha, 1.0, 1e-14);
  EXPECT_NEAR(f.y, 0.0, 1e-14);
  EXPECT_NEAR(f.z, 0.0, 1e-14);
  EXPECT_LT(frame_defect(f), 1e-12);
}

TEST(AdaptedFrame, LagrangianPlane) {
  const AdaptedFrame f = adapted_frame_from_plane(Vec4::Unit(0), Vec4::Unit(2));
  EXPECT_NEAR(f.cos_alpha, 0.0, 1e-15);
  EXPECT_NEAR(f.y, 1.0, 1e-15);
  EXPECT_LT(frame_defect(f), 1e-12);
}

TEST(AdaptedFrame, OrientationFollowsTheInputPair) {
  const Vec4 t1 = Vec4(0.3, -0.2, 1.0, 0.4);
  const AdaptedFrame f = adapted_frame_from_plane(t1, -apply_j(t1));
  EXPECT_NEAR(f.cos_alpha, -1.0, 1e-14);
}

TEST(AdaptedFrame, RandomPlanesRealizeTheBlockForm) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const AdaptedFrame f = adapted_frame_from_plane(gaussian4(rng), gaussian4(rng));
    EXPECT_LT(frame_defect(f), 1e-12);
    EXPECT_NEAR(f.z, 0.0, 1e-15);
    EXPECT_GE(f.y, 0.0);
    EXPECT_NEAR(f.cos_alpha * f.cos_alpha + f.y * f.y, 1.0, 1e-12);
    EXPECT_NEAR(f.cos_alpha, apply_j(f.col(0)).dot(f.col(1)), 1e-15);
  }
}

TEST(AdaptedFrame, GeneralOrientedFramesRealizeTheBlockForm) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    const AdaptedFrame f = adapted_frame_from_basis(random_rotation(rng));
    EXPECT_LT(frame_defect(f), 1e-12);
    const AdaptedFrame g = rotate_normal_frame(f, 0.37 * i);
    EXPECT_LT(frame_defect(g), 1e-12);
  }
}

TEST(AdaptedFrame, RejectsDegenerateInput) {
  EXPECT_THROW(adapted_frame_from_plane(Vec4(1, 2, 3, 4), Vec4(2, 4, 6, 8)), std::invalid_argument);
  EXPECT_THROW(adapted_frame_from_plane(Vec4::Zero(), Vec4(1, 0, 0, 0)), std::invalid_argument);
  Mat4 reflect = Mat4::Identity();
  reflect(3, 3) = -1.0;
  EXPECT_THROW(adapted_frame_from_basis(reflect), std::invalid_argument);
}

TEST(NablaJ, UmbilicEqualityCase) {
  SecondFundamentalForm s;
  s.h[0] = 1.5 * Eigen::Matrix2d::Identity();
  const NablaJFunctionals v = nabla_J_functionals(s);
  EXPECT_DOUBLE_EQ(v.nabla_j_sq, 2.0 * 1.5 * 1.5);
  EXPECT_DOUBLE_EQ(v.hsq, 4.0 * 1.5 * 1.5);
  EXPECT_DOUBLE_EQ(v.nabla_j_sq, v.hsq / 2.0);
}

TEST(NablaJ, ZeroForm) {
  const NablaJFunctionals v = nabla_J_functionals(SecondFundamentalForm{});
  EXPECT_EQ(v.nabla_j_sq, 0.0);
  EXPECT_EQ(v.hsq, 0.0);
  EXPECT_EQ(v.asq, 0.0);
}

TEST(NablaJ, HalfMeanCurvatureBoundOnRandomForms) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10000; ++i) {
    const NablaJFunctionals v = nabla_J_functionals(random_sff(rng));
    EXPECT_GE(v.nabla_j_sq - v.hsq / 2.0, -1e-12);
  }
}

TEST(NablaJ, NormalGaugeInvariance) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const SecondFundamentalForm s = random_sff(rng);
    const NablaJFunctionals a = nabla_J_functionals(s);
    const NablaJFunctionals b = nabla_J_functionals(rotate_normal(s, 0.1 + 0.7 * i));
    EXPECT_NEAR(a.nabla_j_sq, b.nabla_j_sq, 1e-12);
    EXPECT_NEAR(a.hsq, b.hsq, 1e-12);
    EXPECT_NEAR(a.asq, b.asq, 1e-12);
  }
}

// Random plane oriented so that cos(alpha) >= 0.
AdaptedFrame symplectic_frame(std::mt19937_64& rng) {
  const Vec4 a = gaussian4(rng), b = gaussian4(rng);
  return apply_j(a).dot(b) >= 0 ? adapted_frame_from_plane(a, b) : adapted_frame_from_plane(b, a);
}

TEST(RicciJ, ConstantModelIsEinstein) {
  std::mt19937_64 rng(5);
  const double k = 2.0;
  const CurvatureTensor r = constant_hsc_tensor(k);
  for (int i = 0; i < 100; ++i) {
    const AdaptedFrame f = symplectic_frame(rng);
    const RicciJBound b = ricci_J_bound(r, f, k, k);
    EXPECT_NEAR(b.ric, 1.5 * k * f.cos_alpha, 1e-12);
    EXPECT_NEAR(b.ric, b.ric_direct, 1e-12);
    EXPECT_NEAR(b.lower, 1.5 * k * f.cos_alpha, 1e-12);
    EXPECT_TRUE(b.ok);
  }
}

TEST(RicciJ, HolomorphicEquality) {
  const Vec4 t1(1, 0, 0, 0);
  const RicciJBound b = ricci_J_bound(constant_hsc_tensor(1.0), adapted_frame_from_plane(t1, apply_j(t1)), 1.0, 1.0);
  EXPECT_NEAR(b.lower, 1.5, 1e-15);
  EXPECT_NEAR(b.ric, 1.5, 1e-15);
}

TEST(RicciJ, SampledModelsSatisfyTheLowerBound) {
  std::mt19937_64 rng(6);
  for (int m = 0; m < 5; ++m) {
    const KahlerCurvatureModel model = sample_kahler_tensor(100 + m, 1.0, 0.05);
    for (int i = 0; i < 200; ++i) {
      const AdaptedFrame f = symplectic_frame(rng);
      const RicciJBound b = ricci_J_bound(model.tensor, f, model.k1, model.k2);
      EXPECT_TRUE(b.ok) << "ric " << b.ric << " lower " << b.lower;
      EXPECT_NEAR(b.ric, b.ric_direct, 1e-12);
    }
  }
}

TEST(RicciJ, RejectsFramesOutsideTheGauge) {
  const AdaptedFrame f = rotate_normal_frame(adapted_frame_from_plane(Vec4(1, 0, 0, 0), Vec4(0, 0.6, 0.8, 0)), 0.3);
  EXPECT_THROW(ricci_J_bound(constant_hsc_tensor(1.0), f, 1.0, 1.0), std::invalid_argument);
  // The bound is stated for symplectic planes only.
  const Vec4 t1(1, 0, 0, 0);
  EXPECT_THROW(ricci_J_bound(constant_hsc_tensor(1.0), adapted_frame_from_plane(t1, -apply_j(t1)), 1.0, 1.0),
               std::invalid_argument);
}

TEST(Bsc, ConstantModelTotallyRealPair) {
  const BoundCheck b = check_bsc_bounds(constant_hsc_tensor(3.0), Vec4::Unit(0), Vec4::Unit(2), 3.0, 3.0);
  EXPECT_NEAR(b.lower, 0.75, 1e-15);
  EXPECT_NEAR(b.upper, 0.75, 1e-15);
  EXPECT_NEAR(b.value, 0.75, 1e-15);
  EXPECT_TRUE(b.ok);
}

TEST(Bsc, ConstantModelHolomorphicPair) {
  const Vec4 x = Vec4(1, 1, 0, 1).normalized();
  const BoundCheck b = check_bsc_bounds(constant_hsc_tensor(2.0), x, apply_j(x), 2.0, 2.0);
  EXPECT_NEAR(b.lower, 2.0, 1e-14);
  EXPECT_NEAR(b.upper, 2.0, 1e-14);
  EXPECT_NEAR(b.value, 2.0, 1e-14);
}

TEST(Bsc, SampledModelsHaveNoViolations) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> len(0.2, 2.0);
  for (int m = 0; m < 5; ++m) {
    const KahlerCurvatureModel model = sample_kahler_tensor(200 + m, 1.0, 0.05);
    for (int i = 0; i < 2000; ++i) {
      const Vec4 x = gaussian4(rng).normalized() * len(rng);
      Vec4 y = gaussian4(rng);
      y = (y - y.dot(x) / x.squaredNorm() * x).normalized() * len(rng);
      EXPECT_TRUE(check_bsc_bounds(model.tensor, x, y, model.k1, model.k2).ok);
    }
  }
}

TEST(Bsc, RejectsNonOrthogonalPairs) {
  EXPECT_THROW(check_bsc_bounds(constant_hsc_tensor(1.0), Vec4(1, 0, 0, 0), Vec4(1, 1, 0, 0), 1, 1),
               std::invalid_argument);
}

TEST(Eco, ConstantModelCollapses) {
  std::mt19937_64 rng(8);
  const double k = 1.3;
  const CurvatureTensor r = constant_hsc_tensor(k);
  for (int i = 0; i < 200; ++i) {
    const AdaptedFrame f = adapted_frame_from_basis(random_rotation(rng));
    const EcoReport rep = check_eco_bounds(r, f, k, k);
    EXPECT_TRUE(rep.ok);
    for (const EcoItem& it : rep.items) {
      EXPECT_LT(it.check.upper - it.check.lower, 1e-10 * k) << "item " << it.item;
      EXPECT_NEAR(it.check.value, it.check.lower, 1e-10) << "item " << it.item << " " << it.component;
    }
    const double c = f.cos_alpha;
    EXPECT_NEAR(rep.items[0].check.value, k * (1.0 + 3.0 * c * c) / 4.0, 1e-12);
    EXPECT_NEAR(rep.items[15].check.value, 0.0, 1e-12);
  }
}

TEST(Eco, SampledModelsHaveNoViolations) {
  std::mt19937_64 rng(9);
  for (int m = 0; m < 5; ++m) {
    const KahlerCurvatureModel model = sample_kahler_tensor(300 + m, 1.0, 0.05);
    for (int i = 0; i < 200; ++i) {
      const EcoReport rep = check_eco_bounds(model.tensor, adapted_frame_from_basis(random_rotation(rng)), model.k1,
                                             model.k2);
      for (const EcoItem& it : rep.items)
        EXPECT_TRUE(it.check.ok) << "item " << it.item << " " << it.component << " margin " << it.check.margin;
    }
  }
}

TEST(Eco, DetectsAViolation) {
  // Claiming a tighter pinching than the tensor has must trip some item.
  const KahlerCurvatureModel model = sample_kahler_tensor(400, 1.0, 0.05);
  std::mt19937_64 rng(10);
  bool any_fail = false;
  for (int i = 0; i < 50 && !any_fail; ++i) {
    const double mid = 0.5 * (model.k1 + model.k2);
    any_fail = !check_eco_bounds(model.tensor, adapted_frame_from_basis(random_rotation(rng)), mid, mid).ok;
  }
  EXPECT_TRUE(any_fail);
}

std::array<double, 8> random_symmetric(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::array<double, 8> s{};
  for (double& v : s) v = n(rng);
  return s;
}

TEST(Kato, ZeroTensorAndZeroCurvature) {
  const KatoCheck k = check_kato_inequality(GradSFF{}, CurvatureTensor{}, AdaptedFrame{}, 0.1);
  EXPECT_EQ(k.lhs, 0.0);
  EXPECT_EQ(k.rhs, 0.0);
  EXPECT_TRUE(k.ok);
}

TEST(Kato, TraceTypeTensorHasThreeQuartersOfGradH) {
  // T_kij = (v_k d_ij + v_i d_kj + v_j d_ki) / 4 has trace v and |T|^2 = (3/4)|v|^2.
  const Eigen::Vector2d v(0.7, -1.9);
  std::array<double, 8> s{};
  // s_000 = 3 v0/4, s_001 = v1/4, s_011 = v0/4, s_111 = 3 v1/4
  s = {0.75 * v(0), 0.25 * v(1), 0.25 * v(0), 0.75 * v(1), 0, 0, 0, 0};
  const GradSFF t = build_grad_sff(s, CurvatureTensor{}, AdaptedFrame{}, CodazziSign::plus);
  EXPECT_NEAR(t.grad_mean()(0, 0), v(0), 1e-15);
  EXPECT_NEAR(t.grad_mean()(0, 1), v(1), 1e-15);
  const KatoCheck k = check_kato_inequality(t, CurvatureTensor{}, AdaptedFrame{}, 1e-6);
  EXPECT_NEAR(k.lhs, 0.75 * v.squaredNorm(), 1e-14);
  EXPECT_NEAR(k.lhs - k.rhs, 1e-6 * v.squaredNorm(), 1e-14);
}

TEST(Kato, BuilderRealizesTheDefectWithLeastNormParticularPart) {
  std::mt19937_64 rng(11);
  const KahlerCurvatureModel model = sample_kahler_tensor(500, 1.0, 0.05);
  const AdaptedFrame f = adapted_frame_from_plane(gaussian4(rng), gaussian4(rng));
  const GradSFF zero_sym = build_grad_sff({}, model.tensor, f, CodazziSign::plus);
  const GradSFF t = build_grad_sff(random_symmetric(rng), model.tensor, f, CodazziSign::plus);
  const Eigen::Matrix2d w = normal_ricci_components(model.tensor, f);
  for (int a = 0; a < 2; ++a) {
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          EXPECT_NEAR(t(a, k, i, j), t(a, k, j, i), 1e-15);
          EXPECT_NEAR(t.defect(a, k, i, j), codazzi_defect(model.tensor, f, CodazziSign::plus, a, k, i, j), 1e-15);
        }
    // The particular part is orthogonal to each totally symmetric basis tensor.
    const double p000 = zero_sym(a, 0, 0, 0);
    const double p001 = zero_sym(a, 0, 0, 1) + zero_sym(a, 0, 1, 0) + zero_sym(a, 1, 0, 0);
    const double p011 = zero_sym(a, 0, 1, 1) + zero_sym(a, 1, 0, 1) + zero_sym(a, 1, 1, 0);
    const double p111 = zero_sym(a, 1, 1, 1);
    EXPECT_NEAR(p000, 0.0, 1e-15);
    EXPECT_NEAR(p001, 0.0, 1e-15);
    EXPECT_NEAR(p011, 0.0, 1e-15);
    EXPECT_NEAR(p111, 0.0, 1e-15);
    // Traced defect recovers the normal Ricci components.
    for (int i = 0; i < 2; ++i) {
      const double traced = t.defect(a, 0, i, 0) + t.defect(a, 1, i, 1);
      EXPECT_NEAR(traced, w(a, i), 1e-14);
    }
  }
}

TEST(Kato, SampledPairsHaveNoViolationsUnderEitherSign) {
  std::mt19937_64 rng(12);
  for (double sigma : {0.55, 0.6, 2.0 / 3.0}) {
    const double eta = 0.75 - sigma;
    for (int m = 0; m < 10; ++m) {
      const KahlerCurvatureModel model = sample_kahler_tensor(600 + m, 1.0, 0.05);
      for (int i = 0; i < 100; ++i) {
        const AdaptedFrame f = adapted_frame_from_plane(gaussian4(rng), gaussian4(rng));
        for (CodazziSign sign : {CodazziSign::plus, CodazziSign::minus}) {
          // Small symmetric parts make the curvature defect dominate.
          std::array<double, 8> s = random_symmetric(rng);
          for (double& v : s) v *= 0.05;
          const GradSFF t = build_grad_sff(s, model.tensor, f, sign);
          EXPECT_TRUE(check_kato_inequality(t, model.tensor, f, eta, sign).ok);
        }
      }
    }
  }
}

TEST(Kato, RejectsMismatchedDefect) {
  const KahlerCurvatureModel model = sample_kahler_tensor(700, 1.0, 0.05);
  const AdaptedFrame f = adapted_frame_from_plane(Vec4(1, 0.2, 0.3, 0), Vec4(0, 0.1, 1, 0.5));
  ASSERT_GT(normal_ricci_components(model.tensor, f).norm(), 1e-6);
  const GradSFF t = build_grad_sff({}, model.tensor, f, CodazziSign::plus);
  EXPECT_THROW(check_kato_inequality(t, model.tensor, f, 0.1, CodazziSign::minus), std::invalid_argument);
  EXPECT_THROW(check_kato_inequality(t, model.tensor, f, 0.8, CodazziSign::plus), std::invalid_argument);
}

}  // namespace
}  // namespace symflow
