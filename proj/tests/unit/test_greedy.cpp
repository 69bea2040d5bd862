#include <gtest/gtest.h>

#include "latent_order/core.hpp"
#include "latent_order/greedy.hpp"
#include "latent_order/metrics.hpp"
#include "latent_order/verify.hpp"

using namespace latent_order;

namespace {

RootedGraph path(std::size_t m, std::vector<bool> copyable) {
  RootedGraph g;
  for (std::size_t i = 0; i < m; ++i) {
    g.nodes.push_back({int(i), "v", {}});
    if (copyable[i]) g.nodes.back().copyable_from = {0};
    if (i > 0) g.edges.push_back({int(i - 1), int(i), "ARG0"});
  }
  return g;
}

}  // namespace

TEST(Greedy, TwoNodeChain) {
  const Matrix s = greedy_segment(path(2, {false, false}), 4);
  EXPECT_EQ(s, Matrix::from_rows({{0, 1, 0}, {0, 0, 1}}));
}

TEST(Greedy, StarRespectsSizeCap) {
  RootedGraph g;
  g.nodes.push_back({0, "r", {}});
  for (int i = 1; i <= 5; ++i) {
    g.nodes.push_back({i, "leaf", {}});
    g.edges.push_back({0, i, "op" + std::to_string(i)});
  }
  const Matrix s = greedy_segment(g, 4);
  Matrix expect(6, 7);
  expect(0, 1) = 1;
  expect(1, 2) = 1;
  expect(2, 3) = 1;
  expect(3, 6) = 1;
  expect(4, 6) = 1;
  expect(5, 6) = 1;
  EXPECT_EQ(s, expect);
}

TEST(Greedy, AtMostOneCopyableNode) {
  const Matrix s = greedy_segment(path(3, {true, true, false}), 4);
  EXPECT_EQ(s, Matrix::from_rows({{0, 0, 0, 1}, {0, 0, 1, 0}, {0, 0, 0, 1}}));
}

TEST(Greedy, RandomGraphsKeepTheInvariants) {
  Rng rng(51);
  for (int t = 0; t < 300; ++t) {
    const std::size_t m = 1 + t % 14;
    const RootedGraph g = random_graph(rng, m, 3, 0.35, 4);
    const Matrix s = greedy_segment(g, 4);
    EXPECT_EQ(s, greedy_segment(g, 4));
    EXPECT_TRUE(segmentation_acyclic(s));
    for (std::size_t i = 0; i < m; ++i) {
      double row = 0;
      for (double x : s.row(i)) row += x;
      EXPECT_EQ(row, 1.0);
    }
    for (const auto& grp : segmentation_from_S(s)) {
      EXPECT_LE(grp.size(), 4u);
      int copyable = 0;
      for (int v : grp) copyable += g.nodes[v].copyable();
      EXPECT_LE(copyable, 1);
    }
  }
}

TEST(Greedy, SmallerCapGivesMoreChains) {
  const RootedGraph g = path(6, std::vector<bool>(6, false));
  EXPECT_EQ(segmentation_from_S(greedy_segment(g, 1)).size(), 6u);
  EXPECT_EQ(segmentation_from_S(greedy_segment(g, 3)).size(), 2u);
  EXPECT_THROW(greedy_segment(g, 0), std::exception);
}
