#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "latent_order/error.hpp"
#include "latent_order/metrics.hpp"
#include "latent_order/verify.hpp"

using namespace latent_order;

TEST(Density, AllTerminal) {
  EXPECT_EQ(segmentation_density(Matrix::from_rows({{0, 0, 1}, {0, 0, 1}})), 0.0);
}

TEST(Density, Fig2) {
  EXPECT_DOUBLE_EQ(segmentation_density(fixtures::fig2_order().segmentation()), 1.0 / 3.0);
}

TEST(Density, SingleChain) {
  const std::size_t m = 5;
  Matrix s(m, m + 1);
  for (std::size_t i = 0; i + 1 < m; ++i) s(i, i + 1) = 1;
  s(m - 1, m) = 1;
  EXPECT_DOUBLE_EQ(segmentation_density(s), 4.0 / 5.0);
}

TEST(Density, DependsOnlyOnLinkCount) {
  // chain 0->1, 2 vs chain 2->0, 1: one link each
  const Matrix a = Matrix::from_rows({{0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 0, 1}});
  const Matrix b = Matrix::from_rows({{0, 0, 0, 1}, {0, 0, 0, 1}, {1, 0, 0, 0}});
  EXPECT_EQ(segmentation_density(a), segmentation_density(b));
}

TEST(Density, Errors) {
  EXPECT_THROW(segmentation_density(Matrix(0, 1)), ValidationError);
  EXPECT_THROW(segmentation_density(Matrix::from_rows({{0, 0}})), ValidationError);
}

TEST(SameSubgraphF1, Identical) {
  const Segmentation a = {{0, 1}, {2}};
  EXPECT_EQ(same_subgraph_f1(a, a), 1.0);
}

TEST(SameSubgraphF1, EmptyConventions) {
  const Segmentation singles = {{0}, {1}, {2}};
  EXPECT_EQ(same_subgraph_f1(singles, singles), 1.0);
  EXPECT_EQ(same_subgraph_f1(singles, {{0, 1}, {2}}), 0.0);
}

TEST(SameSubgraphF1, ThreeNodeExample) {
  EXPECT_DOUBLE_EQ(same_subgraph_f1({{0, 1}, {2}}, {{0, 1, 2}}), 0.5);
}

TEST(SameSubgraphF1, NodeSetMismatch) {
  EXPECT_THROW(same_subgraph_f1({{0, 1}}, {{0}, {1}, {2}}), ValidationError);
  EXPECT_THROW(same_subgraph_f1({{0, 1}, {1}}, {{0}, {1}}), ValidationError);
}

TEST(SameSubgraphF1, Symmetric) {
  Rng rng(71);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 1 + t % 9;
    const Segmentation a = segmentation_from_order(random_discrete_order(rng, m, m, 4));
    const Segmentation b = segmentation_from_order(random_discrete_order(rng, m, m, 4));
    EXPECT_EQ(same_subgraph_f1(a, b), same_subgraph_f1(b, a));
  }
}

TEST(Segmentations, FromSAndFromOrderAgree) {
  EXPECT_EQ(segmentation_from_S(fixtures::fig2_order().segmentation()),
            segmentation_from_order(fixtures::fig2_order()));
  EXPECT_EQ(segmentation_from_order(fixtures::fig2_order()), (Segmentation{{0, 1}, {2}}));
}
