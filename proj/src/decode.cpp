#include "latent_order/decode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

#include "latent_order/error.hpp"

namespace latent_order {

void check_scores(const EdgeScores& s) {
  if (s.m == 0) throw ValidationError("scores: m must be at least 1");
  if (s.labels.empty()) throw ValidationError("scores.labels: need at least one label");
  if (s.null_label >= s.labels.size())
    throw ValidationError("scores.null_label: index out of range");
  if (s.label_logprob.size() != s.m * s.m * s.labels.size())
    throw ValidationError("scores.label_logprob: expected m*m*L entries");
  if (s.root_score.size() != s.m) throw ValidationError("scores.root_score: expected m entries");
  if (!s.node_labels.empty() && s.node_labels.size() != s.m)
    throw ValidationError("scores.node_labels: expected m entries");
  for (std::size_t i = 0; i < s.m; ++i)
    for (std::size_t j = 0; j < s.m; ++j) {
      if (i == j) continue;
      double total = 0.0;
      for (std::size_t l = 0; l < s.labels.size(); ++l) total += std::exp(s.logprob(i, j, l));
      if (std::abs(total - 1.0) > 1e-6)
        throw ValidationError("scores.label_logprob[" + std::to_string(i) + "][" +
                              std::to_string(j) + "]: label distribution sums to " +
                              std::to_string(total));
    }
}

int select_root(const EdgeScores& s) {
  if (s.root_score.empty()) throw ValidationError("scores.root_score: empty");
  const auto it = std::max_element(s.root_score.begin(), s.root_score.end());
  return static_cast<int>(it - s.root_score.begin());
}

std::pair<std::size_t, double> best_label(const EdgeScores& s, std::size_t i, std::size_t j) {
  std::size_t best = s.labels.size();
  double value = -std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < s.labels.size(); ++l) {
    if (l == s.null_label) continue;
    if (best == s.labels.size() || s.logprob(i, j, l) > value) {
      best = l;
      value = s.logprob(i, j, l);
    }
  }
  return {best, value};
}

namespace {

// log 0 is clamped so reduced costs never become inf - inf
constexpr double kFloor = -1e15;

struct WEdge {
  int u, v;
  double w;
  int id;  // index into the original edge list
};

// Returns, for each node, the id of its chosen incoming edge (-1 for root).
std::vector<int> edmonds(int count, int root, const std::vector<WEdge>& edges) {
  std::vector<int> in(count, -1);
  std::vector<double> in_w(count, -std::numeric_limits<double>::infinity());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& ed = edges[e];
    if (ed.v == root || ed.u == ed.v) continue;
    if (in[ed.v] < 0 || ed.w > in_w[ed.v]) {
      in[ed.v] = static_cast<int>(e);
      in_w[ed.v] = ed.w;
    }
  }
  for (int v = 0; v < count; ++v)
    if (v != root && in[v] < 0) throw ValidationError("arborescence: node without incoming edge");

  // look for a cycle among the chosen edges
  std::vector<int> cycle_id(count, -1), mark(count, -1);
  int cycles = 0;
  for (int start = 0; start < count; ++start) {
    int v = start;
    while (v != root && mark[v] < 0 && cycle_id[v] < 0) {
      mark[v] = start;
      v = edges[in[v]].u;
    }
    if (v != root && mark[v] == start && cycle_id[v] < 0) {
      int x = v;
      do {
        cycle_id[x] = cycles;
        x = edges[in[x]].u;
      } while (x != v);
      ++cycles;
    }
  }
  if (cycles == 0) {
    std::vector<int> picked(count, -1);
    for (int v = 0; v < count; ++v)
      if (v != root) picked[v] = in[v];
    return picked;
  }

  // contract every cycle found, relabel the rest
  std::vector<int> label(count, -1);
  int next = 0;
  for (int v = 0; v < count; ++v)
    if (cycle_id[v] < 0) label[v] = next++;
  for (int v = 0; v < count; ++v)
    if (cycle_id[v] >= 0) label[v] = next + cycle_id[v];
  const int contracted = next + cycles;

  std::vector<WEdge> reduced;
  std::vector<int> origin;  // reduced edge -> index in `edges`
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& ed = edges[e];
    const int a = label[ed.u];
    const int b = label[ed.v];
    if (a == b) continue;
    double w = ed.w;
    if (cycle_id[ed.v] >= 0) w -= in_w[ed.v];
    reduced.push_back({a, b, w, ed.id});
    origin.push_back(static_cast<int>(e));
  }
  const auto sub = edmonds(contracted, label[root], reduced);

  std::vector<int> picked(count, -1);
  for (int v = 0; v < count; ++v)
    if (cycle_id[v] >= 0) picked[v] = in[v];
  for (int c = 0; c < contracted; ++c) {
    if (sub[c] < 0) continue;
    const int e = origin[sub[c]];
    picked[edges[e].v] = e;  // breaks the cycle at the entry node
  }
  return picked;
}

}  // namespace

std::vector<int> maximum_arborescence(const std::vector<std::vector<double>>& weight, int root) {
  const int m = static_cast<int>(weight.size());
  if (m == 0) throw ValidationError("arborescence: empty graph");
  if (root < 0 || root >= m) throw ValidationError("arborescence: root out of range");
  std::vector<WEdge> edges;
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v)
      if (u != v && v != root)
        edges.push_back({u, v, std::max(weight[u][v], kFloor), static_cast<int>(edges.size())});
  const auto picked = edmonds(m, root, edges);
  std::vector<int> parent(m, -1);
  for (int v = 0; v < m; ++v)
    if (picked[v] >= 0) parent[v] = edges[picked[v]].u;
  return parent;
}

DecodeResult decode_graph_detailed(const EdgeScores& scores, double threshold,
                                   int max_reentrancies) {
  check_scores(scores);
  if (max_reentrancies < 0) throw ConfigError("max_reentrancies must be nonnegative");
  const std::size_t m = scores.m;
  DecodeResult out;
  auto& g = out.graph;
  for (std::size_t i = 0; i < m; ++i)
    g.nodes.push_back({static_cast<int>(i),
                       scores.node_labels.empty() ? "n" + std::to_string(i) : scores.node_labels[i],
                       {}});
  g.root = select_root(scores);

  std::vector<std::vector<double>> weight(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) weight[i][j] = best_label(scores, i, j).second;
  const auto parent = maximum_arborescence(weight, g.root);

  std::set<std::pair<int, int>> present;
  for (std::size_t v = 0; v < m; ++v) {
    if (parent[v] < 0) continue;
    const auto u = static_cast<std::size_t>(parent[v]);
    const auto [l, lp] = best_label(scores, u, v);
    g.edges.push_back({parent[v], static_cast<int>(v), scores.labels[l]});
    present.insert({parent[v], static_cast<int>(v)});
    out.tree_weight += lp;
    ++out.tree_edges;
  }

  struct Candidate {
    double prob;
    int u, v;
    std::size_t label;
  };
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j || present.count({static_cast<int>(i), static_cast<int>(j)})) continue;
      const auto [l, lp] = best_label(scores, i, j);
      const double p = std::exp(lp);
      if (p > threshold) cands.push_back({p, static_cast<int>(i), static_cast<int>(j), l});
    }
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(b.prob, a.u, a.v) < std::tie(a.prob, b.u, b.v);
  });
  for (const auto& c : cands) {
    if (static_cast<int>(out.reentrancies) >= max_reentrancies) break;
    g.edges.push_back({c.u, c.v, scores.labels[c.label]});
    ++out.reentrancies;
  }
  return out;
}

RootedGraph decode_graph(const EdgeScores& scores, double threshold, int max_reentrancies) {
  return decode_graph_detailed(scores, threshold, max_reentrancies).graph;
}

}  // namespace latent_order
