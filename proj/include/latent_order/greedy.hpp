#pragma once

#include "latent_order/core.hpp"
#include "latent_order/matrix.hpp"

namespace latent_order {

// Greedy segmentation baseline. Walks the graph in dfs_order's child order and
// merges a child's chain into the current one iff the merged chain has at most
// T nodes and at most one copyable node. Returns a discrete m x (m+1) S in
// which every chain tail points to the terminal column.
Matrix greedy_segment(const RootedGraph& graph, int T = 4);

}  // namespace latent_order
