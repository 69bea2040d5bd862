#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "latent_order/error.hpp"
#include "latent_order/json_io.hpp"

using namespace latent_order;

TEST(ParseInstance, Minimal) {
  const Instance i = parse_instance(R"({"tokens":["a"],"nodes":[{"id":0,"label":"x"}],"edges":[],"root":0})");
  EXPECT_EQ(i.n(), 1u);
  EXPECT_EQ(i.m(), 1u);
}

TEST(ParseInstance, Fig2) {
  const Instance i = fixtures::fig2_instance();
  EXPECT_EQ(i.n(), 5u);
  EXPECT_EQ(i.m(), 3u);
  EXPECT_EQ(i.graph.nodes[2].copyable_from, std::vector<int>{4});
}

TEST(ParseInstance, RoundTrip) {
  const Instance i = fixtures::fig2_instance();
  const std::string text = serialize_instance(i);
  const Instance back = parse_instance(text);
  EXPECT_EQ(back, i);
  EXPECT_EQ(serialize_instance(back), text);
}

TEST(ParseInstance, DanglingEndpointNamesField) {
  const std::string text =
      R"({"tokens":["a"],"nodes":[{"id":0,"label":"x"},{"id":1,"label":"y"},{"id":2,"label":"z"}],
          "edges":[{"src":0,"dst":1,"label":"a"},{"src":0,"dst":7,"label":"b"}],"root":0})";
  try {
    parse_instance(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("edges[1].dst"), std::string::npos);
  }
}

TEST(ParseInstance, Errors) {
  EXPECT_THROW(parse_instance("{not json"), ParseError);
  EXPECT_THROW(parse_instance(R"({"tokens":["a"],"nodes":[{"id":0,"label":"x"},{"id":0,"label":"y"}],"root":0})"),
               ParseError);
  EXPECT_THROW(parse_instance(R"({"tokens":["a"],"nodes":[{"id":0,"label":"x"},{"id":1,"label":"y"}],"root":0})"),
               ParseError);
  EXPECT_THROW(parse_instance(R"({"tokens":[],"nodes":[{"id":0,"label":"x"}],"root":0})"), ParseError);
  EXPECT_THROW(parse_instance(R"({"tokens":["a"],"nodes":[{"id":0,"label":"x","copyable_from":[3]}],"root":0})"),
               ParseError);
}

TEST(MatrixJson, NegativeInfinityAsString) {
  const Matrix m = Matrix::from_rows({{1.5, kMasked}});
  const Json j = matrix_to_json(m);
  EXPECT_EQ(j.dump(), R"([[1.5,"-inf"]])");
  EXPECT_EQ(matrix_from_json(j, "m"), m);
  EXPECT_THROW(matrix_from_json(Json::parse(R"([[1,2],[3]])"), "m"), ParseError);
}

TEST(OrderJson, RoundTrip) {
  const GenerationOrder o = fixtures::fig2_order();
  EXPECT_EQ(order_from_json(order_to_json(o), "o"), o);
}
