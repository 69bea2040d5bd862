#pragma once

#include <optional>
#include <vector>

#include "latent_order/core.hpp"
#include "latent_order/matrix.hpp"

namespace latent_order {

struct MaskOptions {
  // Discrete m x (m+1) segmentation to freeze, e.g. from greedy_segment.
  std::optional<Matrix> prefixed_S;
  bool enforce_copy_alignment = true;
};

struct MaskPair {
  Matrix a_mask;  // n x (m+1)
  Matrix s_mask;  // m x (m+1)
};

// Preorder DFS from the root. Children are visited by edge label, then by
// child id; a node reached twice keeps its first position.
std::vector<int> dfs_order(const RootedGraph& graph);

// Child lists sorted the way dfs_order visits them.
std::vector<std::vector<int>> ordered_children(const RootedGraph& graph);

// s_mask allows i -> j (j < m) only when i precedes j in dfs_order and always
// allows i -> terminal. With enforce_copy_alignment, a node with a nonempty
// copyable_from can only be aligned to those tokens. A prefixed S pins each
// row to its chosen column. Throws ValidationError for a bad prefixed S and
// MaskError when a row or column is left without a finite entry.
MaskPair build_masks(const Instance& instance, const MaskOptions& options = {});

}  // namespace latent_order
