#pragma once

#include <string>
#include <vector>

#include "latent_order/core.hpp"

namespace latent_order {

// Per-pair label log-probabilities for edges i -> j, plus root scores.
struct EdgeScores {
  std::size_t m = 0;
  std::vector<std::string> labels;  // L labels
  std::size_t null_label = 0;       // index of the no-relation label
  std::vector<double> label_logprob;  // m * m * L, [i][j][l]
  std::vector<double> root_score;     // m
  std::vector<std::string> node_labels;  // optional, m

  std::size_t label_count() const { return labels.size(); }
  double logprob(std::size_t i, std::size_t j, std::size_t l) const {
    return label_logprob[(i * m + j) * labels.size() + l];
  }
  double& logprob(std::size_t i, std::size_t j, std::size_t l) {
    return label_logprob[(i * m + j) * labels.size() + l];
  }
};

// Throws ValidationError on inconsistent sizes or a label distribution
// (i != j) that does not sum to 1 within 1e-6.
void check_scores(const EdgeScores& scores);

// Argmax of root_score, lowest id on ties.
int select_root(const EdgeScores& scores);

// Best non-null label of i -> j and its log-probability.
std::pair<std::size_t, double> best_label(const EdgeScores& scores, std::size_t i, std::size_t j);

// Maximum spanning arborescence (Chu-Liu/Edmonds) over a dense m x m weight
// matrix, weight(i, j) for edge i -> j; the diagonal is ignored. Returns the
// parent of each node, -1 for the root.
std::vector<int> maximum_arborescence(const std::vector<std::vector<double>>& weight, int root);

struct DecodeResult {
  RootedGraph graph;       // tree edges first (by child id), then reentrancies
  double tree_weight = 0;  // sum of best-label log-probabilities on tree edges
  std::size_t tree_edges = 0;
  std::size_t reentrancies = 0;
};

DecodeResult decode_graph_detailed(const EdgeScores& scores, double reentrancy_threshold = 0.5,
                                   int max_reentrancies = 5);

// Tree from maximum_arborescence on best non-null label log-probabilities,
// each edge labeled by its argmax; then non-tree edges whose best label
// probability exceeds the threshold, highest first, at most max_reentrancies,
// never duplicating an existing (src, dst).
RootedGraph decode_graph(const EdgeScores& scores, double reentrancy_threshold = 0.5,
                         int max_reentrancies = 5);

}  // namespace latent_order
