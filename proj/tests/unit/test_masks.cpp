#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "latent_order/error.hpp"
#include "latent_order/greedy.hpp"
#include "latent_order/masks.hpp"
#include "latent_order/oracle.hpp"
#include "latent_order/verify.hpp"

using namespace latent_order;

namespace {

RootedGraph star(const std::vector<std::pair<int, std::string>>& children) {
  RootedGraph g;
  g.nodes.push_back({0, "r", {}});
  for (const auto& [id, label] : children) {
    g.nodes.push_back({id, "c", {}});
    g.edges.push_back({0, id, label});
  }
  return g;
}

}  // namespace

TEST(DfsOrder, SingleNode) {
  RootedGraph g;
  g.nodes = {{0, "x", {}}};
  EXPECT_EQ(dfs_order(g), std::vector<int>{0});
}

TEST(DfsOrder, LabelOrder) {
  EXPECT_EQ(dfs_order(star({{1, "ARG1"}, {2, "ARG0"}})), (std::vector<int>{0, 2, 1}));
}

TEST(DfsOrder, IdTieBreak) {
  EXPECT_EQ(dfs_order(star({{2, "op1"}, {1, "op1"}})), (std::vector<int>{0, 1, 2}));
}

TEST(DfsOrder, ReentrantNodeKeepsFirstVisit) {
  RootedGraph g;
  g.nodes = {{0, "a", {}}, {1, "b", {}}, {2, "c", {}}};
  g.edges = {{0, 1, "ARG0"}, {0, 2, "ARG1"}, {1, 2, "ARG0"}};
  EXPECT_EQ(dfs_order(g), (std::vector<int>{0, 1, 2}));
}

TEST(BuildMasks, SingleNode) {
  Instance inst{{"a"}, {{{0, "x", {}}}, {}, 0}};
  const MaskPair p = build_masks(inst);
  EXPECT_TRUE(is_masked(p.s_mask(0, 0)));
  EXPECT_EQ(p.s_mask(0, 1), 0.0);
  EXPECT_EQ(p.a_mask, Matrix(1, 2));
}

TEST(BuildMasks, Fig2Precedence) {
  const MaskPair p = build_masks(fixtures::fig2_instance());
  EXPECT_EQ(p.s_mask(0, 1), 0.0);
  EXPECT_TRUE(is_masked(p.s_mask(1, 0)));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(p.s_mask(i, 3), 0.0);
  // boy is copyable from token 4 only
  for (std::size_t k = 0; k < 4; ++k) EXPECT_TRUE(is_masked(p.a_mask(k, 2)));
  EXPECT_EQ(p.a_mask(4, 2), 0.0);
}

TEST(BuildMasks, CopyAlignmentCanBeDisabled) {
  MaskOptions opt;
  opt.enforce_copy_alignment = false;
  const MaskPair p = build_masks(fixtures::fig2_instance(), opt);
  EXPECT_EQ(p.a_mask, Matrix(5, 4));
}

TEST(BuildMasks, PrefixedSFreezesSegmentation) {
  const Instance inst = fixtures::fig2_instance();
  const Matrix fig2_s = fixtures::fig2_order().segmentation();
  MaskOptions opt;
  opt.prefixed_S = fig2_s;
  const MaskPair fixed = build_masks(inst, opt);
  const auto orders = enumerate_valid_orders(5, 3, vstack(fixed.a_mask, fixed.s_mask));
  ASSERT_FALSE(orders.empty());
  for (const auto& o : orders) EXPECT_EQ(o.segmentation(), fig2_s);

  // same count as filtering the unconstrained set by its S block
  const MaskPair free = build_masks(inst);
  std::size_t with_s = 0;
  for (const auto& o : enumerate_valid_orders(5, 3, vstack(free.a_mask, free.s_mask)))
    with_s += o.segmentation() == fig2_s ? 1 : 0;
  EXPECT_EQ(with_s, orders.size());
}

TEST(BuildMasks, BadPrefixedSRejected) {
  MaskOptions opt;
  opt.prefixed_S = Matrix::from_rows({{0, 1, 0, 1}, {0, 0, 0, 1}, {0, 0, 0, 1}});
  EXPECT_THROW(build_masks(fixtures::fig2_instance(), opt), ValidationError);
  opt.prefixed_S = Matrix::from_rows({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}});
  EXPECT_THROW(build_masks(fixtures::fig2_instance(), opt), ValidationError);
}

TEST(BuildMasks, PrefixedSAgainstDfsOrderStarvesRow) {
  MaskOptions opt;
  // node 1 -> node 2 contradicts DFS order [0, 2, 1]
  opt.prefixed_S = Matrix::from_rows({{0, 0, 0, 1}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  EXPECT_THROW(build_masks(fixtures::fig2_instance(), opt), MaskError);
}

TEST(BuildMasks, PermittedLinksFollowDfsOrder) {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    const Instance inst = random_instance(rng, 2, 1 + t % 7);
    const MaskPair p = build_masks(inst);
    const auto order = dfs_order(inst.graph);
    std::vector<std::size_t> pos(inst.m());
    for (std::size_t q = 0; q < order.size(); ++q) pos[order[q]] = q;
    for (std::size_t i = 0; i < inst.m(); ++i)
      for (std::size_t j = 0; j < inst.m(); ++j)
        EXPECT_EQ(!is_masked(p.s_mask(i, j)), pos[i] < pos[j]);
  }
}

TEST(BuildMasks, EveryMaskedIntegerPointIsAcyclic) {
  Rng rng(5);
  for (int t = 0; t < 40; ++t) {
    const Instance inst = random_instance(rng, 2, 1 + t % 4, 0.3);
    const MaskPair p = build_masks(inst);
    for (const auto& o : enumerate_valid_orders(inst.n(), inst.m(), vstack(p.a_mask, p.s_mask)))
      EXPECT_TRUE(validate_order(o, true).empty());
  }
}
