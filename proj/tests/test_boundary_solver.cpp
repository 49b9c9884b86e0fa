#include <gtest/gtest.h>

#include <cmath>

#include "combqmc/boundary_solver.hpp"
#include "combqmc/error.hpp"

using namespace combqmc;

namespace {

Matrix2 diag2(double a, double b) {
  Matrix2 m = Matrix2::Zero();
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST(ResidualL1, Examples) {
  for (double beta : {0.0, 0.4, 1.7}) {
    EXPECT_LT(max_abs(residual_l1(0.7 * identity2(), beta)), 1e-15);
  }
  EXPECT_LT(max_abs(residual_l1(diag2(2, 1), 0.0) - diag2(-0.5, 0.5)), 1e-15);
  Matrix2 h = identity2();
  h(0, 1) = 1;
  h(1, 0) = 1;
  EXPECT_NEAR(residual_l1(h, 0.3)(0, 1).real(), -1.0, 1e-15);
  Matrix2 bad = identity2();
  bad(0, 1) = 1;
  EXPECT_THROW(residual_l1(bad, 0.3), Error);
}

TEST(ResidualL1, RoutesAgree) {
  for (double beta : {0.2, 1.1}) {
    const Matrix2 h = diag2(0.3, 1.9);
    EXPECT_LT(max_abs(tooth_map(h, beta) - tooth_map_closed_form(h, beta)), 1e-14);
  }
}

TEST(ResidualL2, Examples) {
  const auto p2 = model_params_theta(2.0, 1.0);
  EXPECT_LT(max_abs(residual_l2(p2.alpha * identity2(), p2)), 1e-15);
  EXPECT_LT(max_abs(residual_l2(identity2(), p2) - 2.5 * identity2()), 1e-13);
  const auto p0 = model_params(0.0, 1.0);
  EXPECT_LT(max_abs(spine_map(diag2(2, 0), p0) - identity2()), 1e-15);
  EXPECT_LT(max_abs(residual_l2(diag2(2, 0), p0) - diag2(-1, 1)), 1e-15);
  Matrix2 bad = identity2();
  bad(1, 0) = 0.5;
  EXPECT_THROW(residual_l2(bad, p2), Error);
}

TEST(ResidualL2, RoutesAgree) {
  const auto p = model_params(0.8, 1.5);
  const Matrix2 h = diag2(0.01, 0.002);
  EXPECT_LT(max_abs(spine_map(h, p) - spine_map_closed_form(h, p)), 1e-12);
}

TEST(Branches, ThetaTwo) {
  const auto branches = enumerate_branches(model_params_theta(2.0, 1.0));
  ASSERT_EQ(branches.size(), 1u);
  EXPECT_EQ(branches[0].tag, BranchTag::Disordered);
  EXPECT_TRUE(branches[0].admissible());
  EXPECT_LT(max_abs(branches[0].h - (2.0 / 7) * identity2()), 1e-14);
}

TEST(Branches, ThetaThree) {
  const auto branches = enumerate_branches(model_params_theta(3.0, 1.0));
  ASSERT_EQ(branches.size(), 3u);
  EXPECT_TRUE(branches[0].admissible());
  EXPECT_LT(max_abs(branches[0].h - identity2() / 9.0), 1e-14);
  const double s = 1.0 / (12.0 * std::sqrt(2.0));
  bool found = false;
  for (std::size_t i = 1; i < branches.size(); ++i) {
    const auto& b = branches[i];
    EXPECT_EQ(b.tag, BranchTag::OrderedCandidate);
    EXPECT_TRUE(b.positive);
    EXPECT_TRUE(b.satisfies_l2);
    EXPECT_FALSE(b.satisfies_l1);
    EXPECT_FALSE(b.admissible());
    found = found || max_abs(b.h - diag2(1.0 / 12 + s, 1.0 / 12 - s)) < 1e-13;
  }
  EXPECT_TRUE(found);
}

TEST(Branches, BetaZero) {
  const auto branches = enumerate_branches(model_params(0.0, 1.0));
  ASSERT_EQ(branches.size(), 1u);
  EXPECT_LT(max_abs(branches[0].h - identity2()), 1e-15);
  EXPECT_TRUE(branches[0].admissible());
}

// At large theta the disordered field is tiny; ordered candidates must still
// be rejected by the tooth equation.
TEST(Branches, UniqueAdmissibleAtLargeTheta) {
  const auto branches = enumerate_branches(model_params(2.0, 4.0));
  std::size_t admissible = 0;
  for (const auto& b : branches) admissible += b.admissible() ? 1 : 0;
  EXPECT_EQ(admissible, 1u);
}

TEST(Branches, NewtonRecoversAlgebraicBranches) {
  const auto p = model_params_theta(3.0, 1.0);
  for (const auto& b : enumerate_branches(p)) {
    const Matrix2 start = b.h + diag2(1e-3, -2e-3);
    const auto refined = refine_spine_fixed_point(start, p);
    ASSERT_TRUE(refined.has_value());
    EXPECT_LT(max_abs(*refined - b.h), 1e-12);
  }
}

TEST(LayerCompatibility, DisorderedFieldPasses) {
  const auto p = model_params_theta(2.0, 1.0);
  const auto r = check_layer_compatibility(p, disordered_field(p), 3);
  EXPECT_TRUE(r.passed);
  EXPECT_TRUE(r.normalization_ok);
  EXPECT_NEAR(r.rho0_h0, 1.0, 1e-14);
  ASSERT_EQ(r.residuals.size(), 4u);
  for (double x : r.residuals) EXPECT_LE(x, 1e-12);
}

TEST(LayerCompatibility, TrivialAtBetaZero) {
  const auto p = model_params(0.0, 1.0);
  const auto r = check_layer_compatibility(p, disordered_field(p), 4);
  EXPECT_TRUE(r.passed);
  for (double x : r.residuals) EXPECT_LE(x, 1e-15);
}

TEST(LayerCompatibility, IdentityFieldFailsAtRoot) {
  const auto p = model_params_theta(2.0, 1.0);
  BoundaryField f = disordered_field(p);
  f.h = identity2();
  const auto r = check_layer_compatibility(p, f, 3);
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.failed_at.has_value());
  EXPECT_EQ(*r.failed_at, 0u);
  EXPECT_NEAR(r.failed_residual, 2.5, 1e-12);
}

TEST(LevelProduct, Shape) {
  const auto h = level_product(2, diag2(2, 1));
  EXPECT_EQ(h.support(), level(2).vertices);
  EXPECT_NEAR(h.matrix()(0, 0).real(), 8.0, 1e-15);
  EXPECT_NEAR(h.matrix()(7, 7).real(), 1.0, 1e-15);
}
