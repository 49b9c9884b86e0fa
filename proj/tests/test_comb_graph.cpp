#include <gtest/gtest.h>

#include <set>

#include "combqmc/comb_graph.hpp"

using namespace combqmc;

TEST(CombGraph, Successors) {
  EXPECT_EQ(successors({0, 0}), (std::vector<Vertex>{{1, 0}, {0, 1}}));
  EXPECT_EQ(successors({2, 1}), (std::vector<Vertex>{{2, 2}}));
  EXPECT_EQ(successors({5, 0}), (std::vector<Vertex>{{6, 0}, {5, 1}}));
}

TEST(CombGraph, Classify) {
  EXPECT_EQ(classify({3, 0}), VertexClass::L2);
  EXPECT_EQ(classify({0, 1}), VertexClass::L1);
  EXPECT_EQ(classify({0, 0}), VertexClass::L2);
}

TEST(CombGraph, Levels) {
  EXPECT_EQ(level(0).vertices, (std::vector<Vertex>{{0, 0}}));
  EXPECT_EQ(level(2).vertices, (std::vector<Vertex>{{2, 0}, {1, 1}, {0, 2}}));
  const auto w4 = level(4).vertices;
  ASSERT_EQ(w4.size(), 5u);
  EXPECT_EQ(w4.front(), (Vertex{4, 0}));
  EXPECT_EQ(w4.back(), (Vertex{0, 4}));
}

TEST(CombGraph, Volumes) {
  EXPECT_EQ(volume(1), (std::vector<Vertex>{{0, 0}, {1, 0}, {0, 1}}));
  EXPECT_EQ(volume(2).size(), 6u);
  EXPECT_EQ(volume(3).size(), 10u);
  for (unsigned n = 0; n < 8; ++n) EXPECT_EQ(volume(n).size(), volume_size(n));
}

TEST(CombGraph, Translate) {
  EXPECT_EQ(translate({0, 0}, 3), (Vertex{3, 0}));
  EXPECT_EQ(translate({1, 2}, 0), (Vertex{1, 2}));
  EXPECT_EQ(translate({1, 2}, 2), (Vertex{3, 2}));
}

// Every vertex other than the root has exactly one predecessor, one level down,
// and the successor lists partition the next level.
TEST(CombGraph, TreeStructureUpToLevel64) {
  for (unsigned n = 0; n < 64; ++n) {
    std::multiset<Vertex> children;
    for (const auto& v : level(n).vertices) {
      const auto s = successors(v);
      EXPECT_EQ(s.size(), classify(v) == VertexClass::L2 ? 2u : 1u);
      EXPECT_EQ(v.on_spine(), classify(v) == VertexClass::L2);
      for (const auto& c : s) {
        EXPECT_EQ(c.level(), n + 1);
        children.insert(c);
      }
    }
    const auto next = level(n + 1).vertices;
    EXPECT_EQ(children, std::multiset<Vertex>(next.begin(), next.end()));
  }
}

TEST(CombGraph, ToString) { EXPECT_EQ(to_string(Vertex{2, 3}), "(2,3)"); }
