#include "latent_order/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "latent_order/error.hpp"

namespace latent_order {

namespace {

std::string describe(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

void check_graph(const RootedGraph& graph) {
  const auto m = static_cast<int>(graph.nodes.size());
  if (m == 0) throw ValidationError("nodes: graph has no nodes");
  for (int i = 0; i < m; ++i) {
    if (graph.nodes[i].id != i)
      throw ValidationError("nodes[" + std::to_string(i) + "].id: expected dense id " +
                            std::to_string(i) + ", got " + std::to_string(graph.nodes[i].id));
  }
  if (graph.root < 0 || graph.root >= m)
    throw ValidationError("root: node " + std::to_string(graph.root) + " does not exist");

  std::vector<std::vector<int>> children(m);
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto& edge = graph.edges[e];
    const std::string where = "edges[" + std::to_string(e) + "]";
    if (edge.src < 0 || edge.src >= m)
      throw ValidationError(where + ".src: dangling endpoint " + std::to_string(edge.src));
    if (edge.dst < 0 || edge.dst >= m)
      throw ValidationError(where + ".dst: dangling endpoint " + std::to_string(edge.dst));
    if (edge.src == edge.dst)
      throw ValidationError(where + ": self-loop on node " + std::to_string(edge.src));
    children[edge.src].push_back(edge.dst);
  }

  std::vector<char> seen(m, 0);
  std::vector<int> stack{graph.root};
  seen[graph.root] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : children[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  for (int i = 0; i < m; ++i) {
    if (!seen[i])
      throw ValidationError("nodes[" + std::to_string(i) + "]: unreachable from root " +
                            std::to_string(graph.root));
  }
}

void check_instance(const Instance& instance) {
  if (instance.tokens.empty()) throw ValidationError("tokens: need at least one token");
  check_graph(instance.graph);
  const auto n = static_cast<int>(instance.tokens.size());
  for (const auto& node : instance.graph.nodes) {
    for (int k : node.copyable_from) {
      if (k < 0 || k >= n)
        throw ValidationError("nodes[" + std::to_string(node.id) + "].copyable_from: token " +
                              std::to_string(k) + " out of range (n=" + std::to_string(n) + ")");
    }
  }
}

GenerationOrder make_order(std::size_t n, std::size_t m, bool discrete) {
  return GenerationOrder{Matrix(n + m, m + 1), n, m, discrete};
}

GenerationOrder concat_order(const Matrix& alignment, const Matrix& segmentation, bool discrete) {
  const std::size_t m = segmentation.rows();
  if (segmentation.cols() != m + 1 || alignment.cols() != m + 1)
    throw DimensionError("concat_order: blocks must have m+1 columns");
  return GenerationOrder{vstack(alignment, segmentation), alignment.rows(), m, discrete};
}

bool segmentation_acyclic(const Matrix& segmentation) {
  const std::size_t m = segmentation.rows();
  // Kahn's algorithm on the concept graph.
  std::vector<int> indegree(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (segmentation(i, j) > 0.5) ++indegree[j];
  std::vector<std::size_t> ready;
  for (std::size_t j = 0; j < m; ++j)
    if (indegree[j] == 0) ready.push_back(j);
  std::size_t removed = 0;
  while (!ready.empty()) {
    const std::size_t u = ready.back();
    ready.pop_back();
    ++removed;
    for (std::size_t j = 0; j < m; ++j) {
      if (segmentation(u, j) > 0.5 && --indegree[j] == 0) ready.push_back(j);
    }
  }
  return removed == m;
}

std::vector<std::string> validate_order(const GenerationOrder& order, bool require_discrete) {
  const std::size_t n = order.n;
  const std::size_t m = order.m;
  const Matrix& o = order.matrix;
  if (o.rows() != n + m || o.cols() != m + 1) {
    throw DimensionError("validate_order: matrix is " + std::to_string(o.rows()) + "x" +
                         std::to_string(o.cols()) + ", expected " + std::to_string(n + m) + "x" +
                         std::to_string(m + 1));
  }

  std::vector<std::string> violations;
  for (std::size_t i = 0; i < o.rows(); ++i) {
    for (std::size_t j = 0; j < o.cols(); ++j) {
      const double x = o(i, j);
      if (!(x >= -kDiscreteTolerance && x <= 1.0 + kDiscreteTolerance)) {
        violations.push_back("entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                             describe(x) + " outside [0,1]");
      }
    }
  }
  for (std::size_t i = 0; i < o.rows(); ++i) {
    double sum = 0.0;
    for (double x : o.row(i)) sum += x;
    if (!(std::abs(sum - 1.0) <= kSumTolerance))
      violations.push_back("row " + std::to_string(i) + " sums to " + describe(sum));
  }
  for (std::size_t j = 0; j < m; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < o.rows(); ++i) sum += o(i, j);
    if (!(std::abs(sum - 1.0) <= kSumTolerance))
      violations.push_back("column " + std::to_string(j) + " sums to " + describe(sum));
  }

  if (require_discrete || order.discrete) {
    bool integral = true;
    for (std::size_t i = 0; i < o.rows(); ++i) {
      for (std::size_t j = 0; j < o.cols(); ++j) {
        const double x = o(i, j);
        if (std::abs(x) > kDiscreteTolerance && std::abs(x - 1.0) > kDiscreteTolerance) {
          integral = false;
          violations.push_back("entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                               describe(x) + " is not 0/1");
        }
      }
    }
    if (integral && !segmentation_acyclic(order.segmentation()))
      violations.push_back("segmentation contains a cycle among concept nodes");
  }
  return violations;
}

Matrix LogitSet::masked() const {
  const Matrix mk = mask();
  if (!mk.same_shape(w_raw)) throw DimensionError("LogitSet: mask and logits differ in shape");
  Matrix out = w_raw;
  auto ov = out.values();
  const auto mv = mk.values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = is_masked(mv[i]) ? kMasked : ov[i] + mv[i];
  return out;
}

LogitSet zero_logits(const Matrix& a_mask, const Matrix& s_mask) {
  return LogitSet{Matrix(a_mask.rows() + s_mask.rows(), s_mask.cols()), a_mask, s_mask};
}

void check_finite_support(const Matrix& w, std::size_t m) {
  if (w.cols() != m + 1 || w.rows() < m)
    throw DimensionError("logits must be (n+m)x(m+1)");
  for (std::size_t i = 0; i < w.rows(); ++i) {
    const auto r = w.row(i);
    if (std::all_of(r.begin(), r.end(), is_masked))
      throw MaskError("row " + std::to_string(i) + " has no finite entry");
  }
  for (std::size_t j = 0; j < m; ++j) {
    bool any = false;
    for (std::size_t i = 0; i < w.rows() && !any; ++i) any = !is_masked(w(i, j));
    if (!any) throw MaskError("column " + std::to_string(j) + " has no finite entry");
  }
}

}  // namespace latent_order
