#include "latent_order/masks.hpp"

#include <algorithm>
#include <tuple>

#include "latent_order/error.hpp"

namespace latent_order {

std::vector<std::vector<int>> ordered_children(const RootedGraph& graph) {
  const std::size_t m = graph.size();
  std::vector<std::vector<const Edge*>> out_edges(m);
  for (const auto& e : graph.edges) out_edges[static_cast<std::size_t>(e.src)].push_back(&e);
  std::vector<std::vector<int>> children(m);
  for (std::size_t u = 0; u < m; ++u) {
    auto& es = out_edges[u];
    std::sort(es.begin(), es.end(), [](const Edge* a, const Edge* b) {
      return std::tie(a->label, a->dst) < std::tie(b->label, b->dst);
    });
    for (const Edge* e : es) children[u].push_back(e->dst);
  }
  return children;
}

std::vector<int> dfs_order(const RootedGraph& graph) {
  const auto children = ordered_children(graph);
  std::vector<char> seen(graph.size(), 0);
  std::vector<int> order;
  order.reserve(graph.size());
  // explicit stack, children pushed in reverse so the first is popped first
  std::vector<int> stack{graph.root};
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    if (seen[u]) continue;
    seen[u] = 1;
    order.push_back(u);
    const auto& ch = children[u];
    for (auto it = ch.rbegin(); it != ch.rend(); ++it)
      if (!seen[*it]) stack.push_back(*it);
  }
  return order;
}

namespace {

void check_prefixed(const Matrix& s, std::size_t m) {
  if (s.rows() != m || s.cols() != m + 1)
    throw ValidationError("prefixed_S: expected shape " + std::to_string(m) + "x" +
                          std::to_string(m + 1));
  for (std::size_t i = 0; i < m; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j <= m; ++j) {
      const double x = s(i, j);
      if (x != 0.0 && x != 1.0)
        throw ValidationError("prefixed_S[" + std::to_string(i) + "][" + std::to_string(j) +
                              "]: entries must be 0 or 1");
      sum += x;
    }
    if (sum != 1.0)
      throw ValidationError("prefixed_S[" + std::to_string(i) + "]: row must sum to 1");
  }
  if (!segmentation_acyclic(s)) throw ValidationError("prefixed_S: concept graph has a cycle");
}

}  // namespace

MaskPair build_masks(const Instance& instance, const MaskOptions& options) {
  check_instance(instance);
  const std::size_t n = instance.n();
  const std::size_t m = instance.m();
  MaskPair out{Matrix(n, m + 1), Matrix(m, m + 1)};

  const auto order = dfs_order(instance.graph);
  std::vector<std::size_t> pos(m);
  for (std::size_t p = 0; p < order.size(); ++p) pos[static_cast<std::size_t>(order[p])] = p;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (!(pos[i] < pos[j])) out.s_mask(i, j) = kMasked;

  if (options.enforce_copy_alignment) {
    for (const auto& node : instance.graph.nodes) {
      if (!node.copyable()) continue;
      const auto i = static_cast<std::size_t>(node.id);
      for (std::size_t k = 0; k < n; ++k) {
        if (!std::binary_search(node.copyable_from.begin(), node.copyable_from.end(),
                                static_cast<int>(k)))
          out.a_mask(k, i) = kMasked;
      }
    }
  }

  if (options.prefixed_S) {
    const Matrix& fixed = *options.prefixed_S;
    check_prefixed(fixed, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j <= m; ++j)
        if (fixed(i, j) == 0.0) out.s_mask(i, j) = kMasked;
  }

  check_finite_support(vstack(out.a_mask, out.s_mask), m);
  return out;
}

}  // namespace latent_order
