#include "latent_order/greedy.hpp"

#include "latent_order/error.hpp"
#include "latent_order/masks.hpp"

namespace latent_order {

namespace {

struct Chain {
  int size;      // n
  int copyable;  // z
  int tail;      // k
};

class Greedy {
 public:
  Greedy(const RootedGraph& g, int T)
      : g_(g), T_(T), children_(ordered_children(g)), visited_(g.size(), 0),
        s_(g.size(), g.size() + 1) {}

  Matrix run() {
    visit(g_.root);
    const std::size_t m = g_.size();
    for (std::size_t i = 0; i < m; ++i) {
      bool linked = false;
      for (std::size_t j = 0; j < m; ++j) linked = linked || s_(i, j) == 1.0;
      if (!linked) s_(i, m) = 1.0;
    }
    return s_;
  }

 private:
  Chain visit(int i) {
    visited_[static_cast<std::size_t>(i)] = 1;
    Chain cur{1, g_.nodes[static_cast<std::size_t>(i)].copyable() ? 1 : 0, i};
    for (int j : children_[static_cast<std::size_t>(i)]) {
      if (visited_[static_cast<std::size_t>(j)]) continue;
      const Chain sub = visit(j);
      if (cur.size + sub.size <= T_ && cur.copyable + sub.copyable <= 1) {
        s_(static_cast<std::size_t>(cur.tail), static_cast<std::size_t>(j)) = 1.0;
        cur.size += sub.size;
        cur.copyable += sub.copyable;
        cur.tail = sub.tail;
      }
    }
    return cur;
  }

  const RootedGraph& g_;
  int T_;
  std::vector<std::vector<int>> children_;
  std::vector<char> visited_;
  Matrix s_;
};

}  // namespace

Matrix greedy_segment(const RootedGraph& graph, int T) {
  if (T < 1) throw ConfigError("T must be at least 1");
  check_graph(graph);
  return Greedy(graph, T).run();
}

}  // namespace latent_order
