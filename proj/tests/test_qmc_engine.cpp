#include <gtest/gtest.h>

#include <random>

#include "combqmc/acceptance.hpp"
#include "combqmc/error.hpp"
#include "combqmc/qmc_engine.hpp"

using namespace combqmc;

namespace {

const ModelParams& theta2() {
  static const ModelParams p = model_params_theta(2.0, 1.0);
  return p;
}

Observable zz(const Vertex& u, const Vertex& v) {
  return Observable().add(u, pauli_z()).add(v, pauli_z());
}

}  // namespace

TEST(Observable, Basics) {
  const auto o = zz({0, 0}, {2, 1});
  EXPECT_EQ(o.depth(), 3u);
  EXPECT_EQ(o.translated(2).factors()[1].first, (Vertex{4, 1}));
  EXPECT_EQ(Observable().depth(), 0u);
  EXPECT_THROW(Observable().add({1, 0}, pauli_z()).add({1, 0}, pauli_z()), Error);
  const auto op = o.to_operator(volume(3));
  EXPECT_EQ(op.num_sites(), volume_size(3));
}

TEST(Iterative, IdentityIsNormalized) {
  const auto f = disordered_field(theta2());
  for (unsigned n = 0; n <= 5; ++n) {
    EXPECT_NEAR(std::abs(evaluate_iterative(Observable(), n, theta2(), f) - 1.0), 0.0, 1e-12);
  }
}

TEST(Iterative, MagnetizationVanishes) {
  const auto v = evaluate_iterative(Observable::single({0, 0}, pauli_z()), 2, theta2(),
                                    disordered_field(theta2()));
  EXPECT_LT(std::abs(v), 1e-14);
}

TEST(Iterative, BetaZeroIsTraceState) {
  const auto p = model_params(0.0, 1.3);
  const auto v = evaluate_iterative(zz({0, 0}, {1, 1}).add({0, 2}, pauli_z()), 3, p, disordered_field(p));
  EXPECT_LT(std::abs(v), 1e-15);
}

TEST(Iterative, RejectsSupportOutsideVolume) {
  EXPECT_THROW(evaluate_iterative(zz({0, 0}, {3, 0}), 2, theta2(), disordered_field(theta2())), Error);
}

TEST(Product, Examples) {
  EXPECT_NEAR(std::abs(evaluate_product(Observable(), 1, theta2()) - 1.0), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(evaluate_product(Observable(), 3, model_params(0.0, 1.0)) - 1.0), 0.0, 1e-15);
  const auto a = zz({0, 0}, {1, 0});
  const auto it = evaluate_iterative(a, 2, theta2(), disordered_field(theta2()));
  EXPECT_NEAR(std::abs(evaluate_product(a, 2, theta2()) - it), 0.0, 1e-10);
  EXPECT_NEAR(it.real(), 3.0 / 7, 1e-12);
}

TEST(Product, DenseAndDiagonalPathsAgree) {
  std::mt19937_64 rng(11);
  const auto p = model_params_theta(3.0, 2.0);
  for (int t = 0; t < 5; ++t) {
    const auto a = random_observable(rng, 2, false);
    const auto fast = evaluate_product(a, 2, p);
    const auto dense = evaluate_product(a, 2, p, {}, ProductPath::Dense);
    EXPECT_LT(std::abs(fast - dense), 1e-10 * (1.0 + std::abs(dense)));
  }
}

TEST(Product, CapEnforced) {
  EXPECT_THROW(evaluate_product(Observable(), 5, theta2()), VolumeTooLarge);
  EXPECT_THROW(evaluate_product(Observable(), 0, theta2()), Error);
}

TEST(Routes, RandomObservablesAgree) {
  std::mt19937_64 rng(12);
  for (const auto& p : {theta2(), model_params_theta(3.0, 2.0)}) {
    const auto f = disordered_field(p);
    for (int t = 0; t < 10; ++t) {
      const auto a = random_observable(rng, 2, t % 2 == 0);
      const auto it = evaluate_iterative(a, 2, p, f);
      const auto pr = evaluate_product(a, 2, p);
      EXPECT_LT(std::abs(it - pr), 1e-10 * (1.0 + std::abs(it)));
    }
  }
}

TEST(Routes, PositiveOnSquares) {
  std::mt19937_64 rng(13);
  const auto f = disordered_field(theta2());
  for (int t = 0; t < 10; ++t) {
    const auto a = random_observable(rng, 2, false).adjoint_times_self();
    EXPECT_GE(evaluate_iterative(a, 2, theta2(), f).real(), -1e-10);
  }
}

TEST(Routes, TranslationCovariance) {
  // phi is invariant under spine translation of the whole observable.
  const auto f = disordered_field(theta2());
  const auto a = Observable().add({0, 1}, pauli_z()).add({1, 0}, pauli_z());
  const auto v0 = evaluate_iterative(a, 2, theta2(), f);
  for (unsigned s = 1; s <= 3; ++s) {
    const auto b = a.translated(s);
    EXPECT_NEAR(std::abs(evaluate_iterative(b, b.depth(), theta2(), f) - v0), 0.0, 1e-12);
  }
}

TEST(Compatibility, Examples) {
  const auto f = disordered_field(theta2());
  EXPECT_LT(check_compatibility(Observable(), 2, theta2(), f), 1e-14);
  std::mt19937_64 rng(14);
  for (int t = 0; t < 5; ++t) {
    EXPECT_LT(check_compatibility(random_observable(rng, 1, true), 1, theta2(), f), 1e-10);
  }
  BoundaryField bad = f;
  bad.h = identity2();
  EXPECT_GT(check_compatibility(Observable(), 1, theta2(), bad), 1e-2);
}

TEST(TwoPoint, Examples) {
  EXPECT_NEAR(std::abs(two_point(identity2(), identity2(), {0, 0}, {3, 0}, theta2()) - 1.0), 0.0, 1e-12);
  const auto p = theta2();
  for (unsigned d = 1; d <= 4; ++d) {
    const auto c = two_point(pauli_z(), pauli_z(), {0, 0}, {d, 0}, p).real();
    EXPECT_NEAR(c, std::pow(p.rate_direct, d), 1e-12);
  }
  // Along a tooth the first edge is a spine step, the rest are tooth steps.
  for (unsigned l = 1; l <= 3; ++l) {
    const auto c = two_point(pauli_z(), pauli_z(), {1, 0}, {1, l}, p).real();
    EXPECT_NEAR(c, p.rate_direct * std::pow(p.tooth_rate, l - 1), 1e-12);
  }
  EXPECT_THROW(two_point(pauli_z(), pauli_z(), {1, 0}, {1, 0}, p), Error);
}

TEST(Clustering, ThetaTwo) {
  const auto r = clustering_report(theta2(), 6);
  ASSERT_EQ(r.rows.size(), 6u);
  EXPECT_LT(r.spread, 1e-8);
  EXPECT_LT(r.lambda, 1.0);
  EXPECT_TRUE(r.clustering);
  EXPECT_EQ(r.match, RateMatch::Direct);
  EXPECT_NEAR(r.lambda, 3.0 / 7, 1e-8);
  EXPECT_FALSE(r.rows[0].ratio.has_value());
}

TEST(Clustering, BetaZeroUndefined) {
  const auto r = clustering_report(model_params(0.0, 1.0), 4);
  EXPECT_TRUE(r.undefined_zero);
  for (const auto& row : r.rows) EXPECT_EQ(row.defect, 0.0);
}

TEST(Clustering, NeedsThreeDistances) { EXPECT_THROW(clustering_report(theta2(), 2), Error); }
