#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "combqmc/error.hpp"
#include "combqmc/ising_kernels.hpp"

using namespace combqmc;

namespace {
const double kSqrt2 = std::numbers::sqrt2;
}

TEST(ModelParams, TrivialAtBetaZero) {
  for (double J : {0.0, 1.0, 3.5}) {
    const auto p = model_params(0.0, J);
    EXPECT_DOUBLE_EQ(p.A, 1.0);
    EXPECT_DOUBLE_EQ(p.B, 0.0);
    EXPECT_DOUBLE_EQ(p.C, 0.0);
    EXPECT_NEAR(p.tau1, 1.0, 1e-15);
    EXPECT_NEAR(p.tau2, 0.0, 1e-15);
    EXPECT_NEAR(p.tau3, 0.0, 1e-15);
    EXPECT_NEAR(p.alpha, 1.0, 1e-15);
  }
}

TEST(ModelParams, ThetaTwo) {
  const auto p = model_params(0.5 * std::log(2.0), 1.0);
  EXPECT_NEAR(p.theta, 2.0, 1e-14);
  EXPECT_NEAR(p.A, 5 * kSqrt2 / 4, 1e-14);
  EXPECT_NEAR(p.B, kSqrt2 / 4, 1e-14);
  EXPECT_NEAR(p.C, kSqrt2 / 4, 1e-14);
  EXPECT_NEAR(p.tau1, 3.5, 1e-13);
  EXPECT_NEAR(p.tau2, 1.5, 1e-13);
  EXPECT_NEAR(p.tau3, 3.0, 1e-13);
  EXPECT_NEAR(p.alpha, 2.0 / 7, 1e-14);
  EXPECT_NEAR(p.rate_paper, 3.0 / 14, 1e-14);
  EXPECT_NEAR(p.rate_direct, 3.0 / 7, 1e-14);
}

TEST(ModelParams, ThetaThree) {
  const auto p = model_params_theta(3.0, 1.0);
  EXPECT_NEAR(p.tau1, 9.0, 1e-12);
  EXPECT_NEAR(p.tau2, 6.0, 1e-12);
  EXPECT_NEAR(p.tau3, 12.0, 1e-12);
  const auto t = tau_closed_form(3.0, 1.0);
  EXPECT_NEAR(t.tau1, 9.0, 1e-12);
  EXPECT_NEAR(t.tau2, 6.0, 1e-12);
  EXPECT_NEAR(t.tau3, 12.0, 1e-12);
}

TEST(ModelParams, RejectsOutOfRange) {
  EXPECT_THROW(model_params(-0.1, 1.0), Error);
  EXPECT_THROW(model_params(0.1, -1.0), Error);
  EXPECT_THROW(model_params(std::nan(""), 1.0), Error);
}

TEST(ModelParams, TauRoutesAgreeOnGrid) {
  for (int i = 1; i <= 20; ++i) {
    for (int j = 1; j <= 16; ++j) {
      const auto p = model_params(0.1 * i, 0.25 * j);
      const auto t = tau_closed_form(p.theta, p.J);
      EXPECT_NEAR(p.tau1, t.tau1, 1e-12 * std::abs(t.tau1));
      EXPECT_NEAR(p.tau2, t.tau2, 1e-12 * std::abs(t.tau2));
      EXPECT_NEAR(p.tau3, t.tau3, 1e-12 * std::abs(t.tau3));
    }
  }
}

TEST(Kernels, ToothKernel) {
  EXPECT_LT(max_abs_diff(kernel_l1_matrix(0.0), Matrix::Identity(4, 4)), 1e-15);
  const Matrix k = kernel_l1_matrix(std::numbers::pi / 4);
  const Eigen::Vector4d expected(0.0, kSqrt2, kSqrt2, 0.0);
  EXPECT_LT((k.diagonal().real() - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((k - Matrix(k.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Kernels, ToothConditionalDensity) {
  for (double beta : {0.1, 0.7, 1.3, 2.0}) {
    const auto k = kernel_l1(beta, {0, 1});
    const auto kk = sandwich(k, LocalOperator::identity(k.support()));
    EXPECT_LT(max_abs_diff(partial_trace_onto(kk, {Vertex{0, 1}}).matrix(), Matrix::Identity(2, 2)), 1e-12);
  }
}

TEST(Kernels, SpineKernel) {
  EXPECT_LT(max_abs_diff(kernel_l2_closed_form(model_params(0.0, 1.0)), Matrix::Identity(8, 8)), 1e-15);
  EXPECT_LT(max_abs_diff(kernel_l2_exponential(model_params(0.0, 1.0)), Matrix::Identity(8, 8)), 1e-15);
  const auto p = model_params_theta(2.0, 1.0);
  const Matrix k = kernel_l2_closed_form(p);
  EXPECT_NEAR(k(0, 0).real(), 2 * kSqrt2, 1e-14);
  EXPECT_NEAR(kernel_l2_exponential(p)(0, 0).real(), std::exp(3 * p.beta), 1e-14);
}

TEST(Kernels, SpineRoutesAgreeOnGrid) {
  for (int i = 1; i <= 20; ++i) {
    for (int j = 1; j <= 16; ++j) {
      const auto p = model_params(0.1 * i, 0.25 * j);
      const Matrix x = kernel_l2_exponential(p);
      const Matrix y = kernel_l2_closed_form(p);
      for (Eigen::Index a = 0; a < 8; ++a) {
        EXPECT_LE(std::abs(x(a, a) - y(a, a)), 1e-12 * (1.0 + std::abs(y(a, a))));
      }
      EXPECT_LT((y - Matrix(y.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 1e-15);
    }
  }
}

TEST(Kernels, LayerKernel) {
  const auto p = model_params_theta(2.0, 1.0);
  const auto k0 = layer_kernel(0, p);
  EXPECT_EQ(k0.support(), (Support{{0, 0}, {1, 0}, {0, 1}}));
  EXPECT_LT(max_abs_diff(k0.matrix(), kernel_l2(p, {0, 0}).matrix()), 1e-15);

  const auto id = layer_kernel(1, model_params(0.0, 1.0));
  EXPECT_EQ(id.num_sites(), 5u);
  EXPECT_LT(max_abs_diff(id.matrix(), Matrix::Identity(32, 32)), 1e-15);

  const auto k1 = layer_kernel(1, p);
  const auto expected = tensor(kernel_l2(p, {1, 0}), kernel_l1(p.beta, {0, 1}));
  EXPECT_EQ(k1.support(), expected.support());
  EXPECT_LT(max_abs_diff(k1.matrix(), expected.matrix()), 1e-14);

  EXPECT_THROW(layer_kernel(7, p), VolumeTooLarge);
}

TEST(Kernels, VertexKernelClass) {
  const auto p = model_params_theta(2.0, 1.0);
  EXPECT_EQ(vertex_kernel(p, {2, 0}).num_sites(), 3u);
  EXPECT_EQ(vertex_kernel(p, {2, 1}).support(), (Support{{2, 1}, {2, 2}}));
}

TEST(Kernels, ToothDegeneracy) {
  EXPECT_TRUE(tooth_degenerate(3 * std::numbers::pi / 4));
  EXPECT_FALSE(tooth_degenerate(0.5));
}

TEST(Kernels, LayerTransitionPreservesIdentityUpToTau) {
  // E_[n,n+1](1) on level n is the product of the per-vertex normalizations.
  const auto p = model_params_theta(2.0, 1.0);
  const auto up = LocalOperator::identity(level(2).vertices);
  const auto out = layer_transition(1, p, up);
  EXPECT_EQ(out.support(), level(1).vertices);
  EXPECT_LT(max_abs_diff(out.matrix(), p.tau1 * Matrix::Identity(4, 4)), 1e-12);
}
