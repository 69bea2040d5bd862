#include "latent_order/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "latent_order/bregman.hpp"
#include "latent_order/error.hpp"
#include "latent_order/greedy.hpp"
#include "latent_order/masks.hpp"
#include "latent_order/metrics.hpp"
#include "latent_order/oracle.hpp"
#include "latent_order/order_ops.hpp"
#include "latent_order/perturb.hpp"

namespace latent_order {

namespace {

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

const char* const kLabelPool[] = {"ARG0", "ARG1", "mod", "op1"};

}  // namespace

RootedGraph random_graph(Rng& rng, std::size_t m, std::size_t n, double copy_prob,
                         std::size_t extra_edges) {
  RootedGraph g;
  std::bernoulli_distribution copy(copy_prob);
  for (std::size_t i = 0; i < m; ++i) {
    Node node{static_cast<int>(i), "c" + std::to_string(i), {}};
    if (copy_prob > 0.0 && copy(rng)) {
      for (std::size_t k = 0; k < n; ++k)
        if (std::bernoulli_distribution(0.5)(rng)) node.copyable_from.push_back(static_cast<int>(k));
      if (node.copyable_from.empty())
        node.copyable_from.push_back(static_cast<int>(uniform_index(rng, 0, n - 1)));
    }
    g.nodes.push_back(std::move(node));
  }
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  g.root = perm[0];
  std::set<std::pair<int, int>> have;
  auto add = [&](int s, int d) {
    if (!have.insert({s, d}).second) return;
    g.edges.push_back({s, d, kLabelPool[uniform_index(rng, 0, 3)]});
  };
  for (std::size_t t = 1; t < m; ++t) add(perm[uniform_index(rng, 0, t - 1)], perm[t]);
  for (std::size_t e = 0; e < extra_edges && m >= 3; ++e) {
    const std::size_t a = uniform_index(rng, 0, m - 2);
    const std::size_t b = uniform_index(rng, a + 1, m - 1);
    add(perm[a], perm[b]);
  }
  return g;
}

Instance random_instance(Rng& rng, std::size_t n, std::size_t m, double copy_prob) {
  Instance inst;
  for (std::size_t k = 0; k < n; ++k) inst.tokens.push_back("w" + std::to_string(k));
  inst.graph = random_graph(rng, m, n, copy_prob);
  return inst;
}

Matrix random_masked_logits(Rng& rng, const Instance& instance, double sigma) {
  const MaskPair masks = build_masks(instance);
  LogitSet set{Matrix(instance.n() + instance.m(), instance.m() + 1), masks.a_mask, masks.s_mask};
  std::normal_distribution<double> normal(0.0, sigma);
  for (double& x : set.w_raw.values()) x = normal(rng);
  return set.masked();
}

GenerationOrder random_discrete_order(Rng& rng, std::size_t n, std::size_t m,
                                      std::size_t max_chain) {
  const std::size_t min_chains = (m + max_chain - 1) / max_chain;
  if (min_chains > n) throw InputError("random_discrete_order: not enough tokens");
  const std::size_t chains = uniform_index(rng, min_chains, std::min(n, m));
  std::vector<std::size_t> sizes(chains, 1);
  for (std::size_t left = m - chains; left > 0; --left) {
    std::vector<std::size_t> open;
    for (std::size_t c = 0; c < chains; ++c)
      if (sizes[c] < max_chain) open.push_back(c);
    ++sizes[open[uniform_index(rng, 0, open.size() - 1)]];
  }
  std::vector<std::size_t> nodes(m), tokens(n);
  std::iota(nodes.begin(), nodes.end(), 0);
  std::iota(tokens.begin(), tokens.end(), 0);
  std::shuffle(nodes.begin(), nodes.end(), rng);
  std::shuffle(tokens.begin(), tokens.end(), rng);

  GenerationOrder o = make_order(n, m, true);
  std::vector<char> owns(n, 0);
  std::size_t at = 0;
  for (std::size_t c = 0; c < chains; ++c) {
    const std::size_t k = tokens[c];
    owns[k] = 1;
    o.matrix(k, nodes[at]) = 1.0;
    for (std::size_t s = 0; s + 1 < sizes[c]; ++s)
      o.matrix(n + nodes[at + s], nodes[at + s + 1]) = 1.0;
    o.matrix(n + nodes[at + sizes[c] - 1], m) = 1.0;
    at += sizes[c];
  }
  for (std::size_t k = 0; k < n; ++k)
    if (!owns[k]) o.matrix(k, m) = 1.0;
  return o;
}

EdgeScores random_scores(Rng& rng, std::size_t m, std::size_t labels, double spread) {
  EdgeScores s;
  s.m = m;
  s.labels.push_back("NONE");
  for (std::size_t l = 1; l < labels; ++l) s.labels.push_back("L" + std::to_string(l));
  s.null_label = 0;
  s.label_logprob.assign(m * m * labels, 0.0);
  s.root_score.resize(m);
  std::normal_distribution<double> normal(0.0, spread);
  for (std::size_t i = 0; i < m; ++i) {
    s.root_score[i] = normal(rng);
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) {
        for (std::size_t l = 0; l < labels; ++l) s.logprob(i, j, l) = -std::log(double(labels));
        continue;
      }
      std::vector<double> z(labels);
      for (double& x : z) x = normal(rng);
      const double peak = *std::max_element(z.begin(), z.end());
      double acc = 0.0;
      for (double x : z) acc += std::exp(x - peak);
      for (std::size_t l = 0; l < labels; ++l) s.logprob(i, j, l) = z[l] - peak - std::log(acc);
    }
  }
  return s;
}

double relative_error(const Matrix& a, const Matrix& b) {
  double diff = 0.0, scale = 1e-12;
  for (std::size_t k = 0; k < a.size(); ++k) {
    diff = std::max(diff, std::abs(a.values()[k] - b.values()[k]));
    scale = std::max({scale, std::abs(a.values()[k]), std::abs(b.values()[k])});
  }
  return diff / scale;
}

namespace {

using Trial = std::function<std::string(Rng&)>;  // empty string = pass

CheckResult run_check(const std::string& name, std::size_t seeds, std::uint64_t base,
                      const Trial& trial) {
  CheckResult r{name, seeds, 0, {}};
  for (std::size_t s = 0; s < seeds; ++s) {
    Rng rng(mix_seed(base, s));
    std::string why;
    try {
      why = trial(rng);
    } catch (const std::exception& e) {
      why = std::string("threw: ") + e.what();
    }
    if (!why.empty()) {
      if (r.failures++ == 0) r.first_failure = "seed " + std::to_string(s) + ": " + why;
    }
  }
  return r;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::vector<std::vector<double>> best_weights(const EdgeScores& s) {
  std::vector<std::vector<double>> w(s.m, std::vector<double>(s.m, 0.0));
  for (std::size_t i = 0; i < s.m; ++i)
    for (std::size_t j = 0; j < s.m; ++j)
      if (i != j) w[i][j] = best_label(s, i, j).second;
  return w;
}

}  // namespace

std::vector<CheckResult> run_verify(std::size_t seeds, std::uint64_t base) {
  std::vector<CheckResult> out;

  out.push_back(run_check("enumeration is valid and complete", seeds, base, [](Rng& rng) {
    const std::size_t m = uniform_index(rng, 1, 3);
    const std::size_t n = uniform_index(rng, 1, 3);
    const Instance inst = random_instance(rng, n, m, 0.3);
    const MaskPair masks = build_masks(inst);
    const Matrix mask = vstack(masks.a_mask, masks.s_mask);
    const auto orders = enumerate_valid_orders(n, m, mask);
    for (const auto& o : orders)
      if (!validate_order(o, true).empty()) return std::string("enumerated order is invalid");
    const std::size_t counted = count_valid_orders(n, m, mask);
    if (counted != orders.size())
      return "enumerated " + std::to_string(orders.size()) + ", counted " + std::to_string(counted);
    return std::string();
  }));

  out.push_back(run_check("projection converges at tau=1", seeds, base, [](Rng& rng) {
    const Instance inst = random_instance(rng, uniform_index(rng, 1, 6), uniform_index(rng, 1, 6));
    const Matrix w = random_masked_logits(rng, inst);
    SolverConfig cfg;
    const SolveResult r = entropic_projection(w, inst.m(), cfg);
    if (!(r.residual < 1e-6)) return "residual " + fmt(r.residual);
    for (std::size_t k = 0; k < w.size(); ++k)
      if (is_masked(w.values()[k]) && r.soft.values()[k] != 0.0)
        return std::string("masked entry is nonzero");
    return std::string();
  }));

  out.push_back(run_check("unrolled gradient matches finite differences", seeds, base,
                          [](Rng& rng) {
    const Instance inst = random_instance(rng, uniform_index(rng, 1, 3), uniform_index(rng, 1, 2));
    const Matrix w = random_masked_logits(rng, inst);
    SolverConfig cfg;
    cfg.tau = std::bernoulli_distribution(0.5)(rng) ? 0.5 : 1.0;
    cfg.residual_early_exit = 0.0;
    Matrix up(w.rows(), w.cols());
    std::normal_distribution<double> normal;
    for (double& x : up.values()) x = normal(rng);
    const SolveResult r = entropic_projection(w, inst.m(), cfg);
    const Matrix g = projection_gradient(r.backward_state, up);
    const Matrix fd = finite_diff_grad(
        [&](const Matrix& x) { return inner(up, entropic_projection(x, inst.m(), cfg).soft); },
        w, 1e-5);
    const double err = relative_error(g, fd);
    if (!(err < 1e-4)) return "relative error " + fmt(err);
    for (std::size_t k = 0; k < w.size(); ++k)
      if (is_masked(w.values()[k]) && g.values()[k] != 0.0)
        return std::string("gradient nonzero at a masked entry");
    return std::string();
  }));

  out.push_back(run_check("hard argmax matches the enumerated optimum", seeds, base, [](Rng& rng) {
    const Instance inst = random_instance(rng, 2, uniform_index(rng, 1, 3));
    const Matrix w = random_masked_logits(rng, inst);
    const GenerationOrder hard = hard_argmax(w, inst.m());
    if (!validate_order(hard, true).empty()) return std::string("hard order infeasible");
    const LpArgmax best = lp_argmax(w, inst.m());
    if (hard != best.order && best.value - best.runner_up >= 1e-3)
      return "differs from the optimum with gap " + fmt(best.value - best.runner_up);
    return std::string();
  }));

  out.push_back(run_check("relaxed states equal autoregressive states", seeds, base, [](Rng& rng) {
    const std::size_t n = uniform_index(rng, 2, 5);
    const std::size_t m = uniform_index(rng, 1, std::min<std::size_t>(6, 4 * n));
    const GenerationOrder o = random_discrete_order(rng, n, m, 4);
    const CellParams cell = make_cell(8, rng());
    Matrix tokens(n, 8), emb(m, 8);
    std::normal_distribution<double> normal;
    for (double& x : tokens.values()) x = normal(rng);
    for (double& x : emb.values()) x = normal(rng);
    const auto relaxed = relaxed_states(o, tokens, emb, cell, 4);
    const auto reference = autoregressive_states(o, tokens, emb, cell, 4);
    const double d = std::max(max_abs_diff(relaxed.node_states, reference.node_states),
                              max_abs_diff(relaxed.tail_states, reference.tail_states));
    if (!(d <= 1e-10)) return "max difference " + fmt(d);
    return std::string();
  }));

  out.push_back(run_check("B and A_inf match the chain oracles", seeds, base, [](Rng& rng) {
    const std::size_t n = uniform_index(rng, 1, 5);
    const std::size_t m = uniform_index(rng, 1, std::min<std::size_t>(5, 4 * n));
    const GenerationOrder o = random_discrete_order(rng, n, m, 4);
    if (compute_B(o, 4) != chain_end_oracle(o)) return std::string("B differs");
    const Matrix a_inf = compute_A_inf(o, 4);
    if (a_inf != chain_membership_oracle(o)) return std::string("A_inf differs");
    Matrix rhs = multiply(a_inf, leading_columns(o.segmentation(), m));
    const Matrix a = leading_columns(o.alignment(), m);
    for (std::size_t k = 0; k < rhs.size(); ++k) rhs.values()[k] += a.values()[k];
    if (!(max_abs_diff(a_inf, rhs) < 1e-8)) return std::string("A_inf not self-consistent");
    return std::string();
  }));

  out.push_back(run_check("greedy segmentation respects its limits", seeds, base, [](Rng& rng) {
    const std::size_t m = uniform_index(rng, 1, 12);
    const RootedGraph g = random_graph(rng, m, 3, 0.4, 3);
    const Matrix s = greedy_segment(g, 4);
    if (s != greedy_segment(g, 4)) return std::string("not deterministic");
    if (!segmentation_acyclic(s)) return std::string("cycle");
    const auto order = dfs_order(g);
    std::vector<std::size_t> pos(m);
    for (std::size_t p = 0; p < m; ++p) pos[order[p]] = p;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (s(i, j) == 1.0 && !(pos[i] < pos[j])) return std::string("link against DFS order");
    for (const auto& grp : segmentation_from_S(s)) {
      if (grp.size() > 4) return std::string("chain longer than 4");
      int copyable = 0;
      for (int v : grp) copyable += g.nodes[v].copyable() ? 1 : 0;
      if (copyable > 1) return std::string("two copyable nodes in a chain");
    }
    return std::string();
  }));

  out.push_back(run_check("arborescence is optimal", seeds, base, [](Rng& rng) {
    const EdgeScores s = random_scores(rng, uniform_index(rng, 1, 5));
    const DecodeResult d = decode_graph_detailed(s);
    const auto best = brute_force_arborescence(best_weights(s), d.graph.root);
    if (std::abs(d.tree_weight - best.weight) > 1e-9)
      return "tree weight " + fmt(d.tree_weight) + " vs optimum " + fmt(best.weight);
    if (d.tree_edges + 1 != s.m) return std::string("wrong number of tree edges");
    check_graph(d.graph);
    return std::string();
  }));

  out.push_back(run_check("same-subgraph F1 is symmetric", seeds, base, [](Rng& rng) {
    const std::size_t m = uniform_index(rng, 1, 8);
    const auto a = random_discrete_order(rng, m, m, 4);
    const auto b = random_discrete_order(rng, m, m, 4);
    const Segmentation sa = segmentation_from_order(a);
    const Segmentation sb = segmentation_from_order(b);
    if (same_subgraph_f1(sa, sb) != same_subgraph_f1(sb, sa)) return std::string("asymmetric");
    return std::string();
  }));

  out.push_back(run_check("KL closed form is nonnegative and convex", seeds, base, [](Rng& rng) {
    const double w = std::normal_distribution<double>(0.0, 2.0)(rng);
    if (!(kl_entry(w) >= 0.0)) return "negative KL at " + fmt(w);
    const double h = 1e-3;
    if (!(kl_entry(w + h) + kl_entry(w - h) - 2 * kl_entry(w) >= -1e-12))
      return "not convex at " + fmt(w);
    return std::string();
  }));

  return out;
}

}  // namespace latent_order
