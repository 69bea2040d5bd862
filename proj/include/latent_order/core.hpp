#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "latent_order/matrix.hpp"

namespace latent_order {

// Row and column sums of a soft order must hit 1 within this tolerance.
inline constexpr double kSumTolerance = 1e-6;
// An entry counts as discrete when it is within this distance of 0 or 1.
inline constexpr double kDiscreteTolerance = 1e-9;

struct Node {
  int id = 0;
  std::string label;
  std::vector<int> copyable_from;  // sorted, unique token indices

  bool copyable() const { return !copyable_from.empty(); }
  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  int src = 0;
  int dst = 0;
  std::string label;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Labeled rooted graph over concept nodes 0..m-1. The terminal node is not
// stored; matrices reserve their last column (index m) for it.
struct RootedGraph {
  std::vector<Node> nodes;  // nodes[i].id == i
  std::vector<Edge> edges;
  int root = 0;

  std::size_t size() const { return nodes.size(); }
  friend bool operator==(const RootedGraph&, const RootedGraph&) = default;
};

// Throws ValidationError unless ids are dense, the root exists, there are no
// self-loops or dangling endpoints, and every node is reachable from the root.
void check_graph(const RootedGraph& graph);

struct Instance {
  std::vector<std::string> tokens;
  RootedGraph graph;

  std::size_t n() const { return tokens.size(); }
  std::size_t m() const { return graph.size(); }
  friend bool operator==(const Instance&, const Instance&) = default;
};

// Validates graph invariants plus n >= 1, m >= 1 and copyable_from < n.
void check_instance(const Instance& instance);

// The (n+m) x (m+1) matrix O: first n rows are the alignment A, the last m
// rows the segmentation S.
struct GenerationOrder {
  Matrix matrix;
  std::size_t n = 0;
  std::size_t m = 0;
  bool discrete = false;

  Matrix alignment() const { return row_block(matrix, 0, n); }
  Matrix segmentation() const { return row_block(matrix, n, m); }
  friend bool operator==(const GenerationOrder&, const GenerationOrder&) = default;
};

GenerationOrder make_order(std::size_t n, std::size_t m, bool discrete = true);

// Builds an order from the two blocks; throws DimensionError on shape mismatch.
GenerationOrder concat_order(const Matrix& alignment, const Matrix& segmentation, bool discrete);

// Every violated condition as a human-readable line; empty iff the order is
// feasible. Discreteness and acyclicity are checked when require_discrete is
// set or the order is flagged discrete. Throws DimensionError on bad shape.
std::vector<std::string> validate_order(const GenerationOrder& order, bool require_discrete);

// True when the concept graph i -> j (S_ij rounded to 1, j < m) has no cycle.
// `segmentation` is m x (m+1).
bool segmentation_acyclic(const Matrix& segmentation);

// Raw logits plus the alignment and segmentation masks (entries 0 or -inf).
struct LogitSet {
  Matrix w_raw;   // (n+m) x (m+1)
  Matrix a_mask;  // n x (m+1)
  Matrix s_mask;  // m x (m+1)

  std::size_t n() const { return a_mask.rows(); }
  std::size_t m() const { return s_mask.rows(); }

  // Stacked mask, (n+m) x (m+1).
  Matrix mask() const { return vstack(a_mask, s_mask); }
  // W = w_raw + mask.
  Matrix masked() const;
};

// LogitSet with zero raw logits over the given masks.
LogitSet zero_logits(const Matrix& a_mask, const Matrix& s_mask);

// Throws MaskError naming the first row or column (j < m) with no finite
// entry, and DimensionError for inconsistent shapes.
void check_finite_support(const Matrix& masked_logits, std::size_t m);

}  // namespace latent_order
