#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "latent_order/core.hpp"
#include "latent_order/error.hpp"

using namespace latent_order;

TEST(ValidateOrder, Fig2OrderIsValid) {
  EXPECT_TRUE(validate_order(fixtures::fig2_order(), true).empty());
}

TEST(ValidateOrder, AllZerosViolatesEveryRowAndColumn) {
  const GenerationOrder o = make_order(5, 3, false);
  const auto v = validate_order(o, false);
  // 8 rows and 3 constrained columns
  EXPECT_EQ(v.size(), 11u);
}

TEST(ValidateOrder, DoubleGenerationOfNodeZero) {
  GenerationOrder o = fixtures::fig2_order();
  o.matrix(5 + 0, 1) = 0;
  o.matrix(5 + 1, 0) = 1;
  o.matrix(5 + 1, 3) = 0;
  o.matrix(5 + 0, 3) = 1;
  const auto v = validate_order(o, true);
  ASSERT_FALSE(v.empty());
  bool column0 = false;
  for (const auto& s : v) column0 = column0 || s.find("column 0") != std::string::npos;
  EXPECT_TRUE(column0);
}

TEST(ValidateOrder, ShapeMismatchThrows) {
  GenerationOrder o{Matrix(3, 3), 2, 2, false};
  EXPECT_THROW(validate_order(o, false), DimensionError);
}

TEST(ValidateOrder, CycleIsReported) {
  // token 0 -> node 0 -> node 1 -> node 0
  GenerationOrder o = make_order(2, 2, true);
  o.matrix(0, 0) = 1;
  o.matrix(1, 2) = 1;
  o.matrix(2, 1) = 1;
  o.matrix(3, 0) = 1;
  // column 0 now has two generators; the cycle check still runs
  const auto v = validate_order(o, true);
  bool cycle = false;
  for (const auto& s : v) cycle = cycle || s.find("cycl") != std::string::npos;
  EXPECT_TRUE(cycle);
}

TEST(ValidateOrder, NonDiscreteEntryRejectedWhenDiscreteRequired) {
  GenerationOrder o = make_order(1, 1, false);
  o.matrix(0, 0) = 0.5;
  o.matrix(0, 1) = 0.5;
  o.matrix(1, 0) = 0.5;
  o.matrix(1, 1) = 0.5;
  EXPECT_TRUE(validate_order(o, false).empty());
  EXPECT_FALSE(validate_order(o, true).empty());
}

TEST(CheckGraph, RejectsUnreachableAndSelfLoops) {
  RootedGraph g;
  g.nodes = {{0, "a", {}}, {1, "b", {}}};
  g.root = 0;
  EXPECT_THROW(check_graph(g), ValidationError);
  g.edges = {{0, 1, "x"}, {1, 1, "y"}};
  EXPECT_THROW(check_graph(g), ValidationError);
  g.edges = {{0, 1, "x"}};
  EXPECT_NO_THROW(check_graph(g));
}

TEST(LogitSet, MaskedAddsMasks) {
  LogitSet s{Matrix::from_rows({{1, 2}, {3, 4}}), Matrix::from_rows({{0, kMasked}}),
             Matrix::from_rows({{kMasked, 0}})};
  const Matrix w = s.masked();
  EXPECT_EQ(w(0, 0), 1);
  EXPECT_TRUE(is_masked(w(0, 1)));
  EXPECT_TRUE(is_masked(w(1, 0)));
  EXPECT_EQ(w(1, 1), 4);
}

TEST(FiniteSupport, NamesStarvedColumn) {
  const Matrix w = Matrix::from_rows({{kMasked, 0}, {kMasked, 0}});
  try {
    check_finite_support(w, 1);
    FAIL();
  } catch (const MaskError& e) {
    EXPECT_NE(std::string(e.what()).find("column 0"), std::string::npos);
  }
}
