#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "latent_order/core.hpp"
#include "latent_order/matrix.hpp"

namespace latent_order {

inline constexpr int kDefaultChainLimit = 4;

struct AlignmentResult {
  Matrix b;      // m x n: b(j, k) = token k's chain ends at node j
  Matrix a_inf;  // n x m: a_inf(k, j) = node j lies in token k's chain
};

// Markov reading of the order: alignment mass starts on A's first nodes and is
// moved by P = S[:, :m] + Diag(S[:, m]) for T steps, so it comes to rest on the
// node that emits the terminal. Returned node-row, token-column.
Matrix compute_B(const GenerationOrder& order, int T = kDefaultChainLimit);

// A_inf = A[:, :m], then T times A_inf <- A_inf S[:, :m] + A[:, :m].
Matrix compute_A_inf(const GenerationOrder& order, int T = kDefaultChainLimit);

AlignmentResult derive_alignment(const GenerationOrder& order, int T = kDefaultChainLimit);

struct Subgraph {
  int token = 0;
  std::vector<int> chain;  // in generation order
  friend bool operator==(const Subgraph&, const Subgraph&) = default;
};

// Chains of a discrete valid order, by ascending token. Tokens aligned to the
// terminal own no chain. Throws ValidationError on an invalid order.
std::vector<Subgraph> extract_segmentation(const GenerationOrder& order);

// Stand-in recurrent cell: tanh(U h + V v + b), d x d Gaussian weights scaled
// by 1/sqrt(d). `linear` drops the tanh (test hook).
struct CellParams {
  Matrix U;
  Matrix V;
  std::vector<double> bias;
  std::size_t d = 0;
  std::uint64_t seed = 0;
  bool linear = false;
};

CellParams make_cell(std::size_t d = 8, std::uint64_t seed = 0, bool linear = false);

std::vector<double> apply_cell(const CellParams& cell, std::span<const double> state,
                               std::span<const double> embedding);

struct RecurrentStates {
  Matrix node_states;  // m x d
  Matrix tail_states;  // n x d
};

// T rounds of h_node_i <- sum_j S_ji cell(h_node_j, v_j) + sum_k A_ki h_token_k
// from zero, then h_tail_k = sum_j B_jk cell(h_node_j, v_j)
// + (1 - sum_j B_jk) h_token_k. Works for soft orders.
RecurrentStates relaxed_states(const GenerationOrder& order, const Matrix& token_states,
                               const Matrix& node_embeddings, const CellParams& cell,
                               int T = kDefaultChainLimit);

// Test-time computation: walk each token's chain applying the cell. Throws
// ValidationError for an invalid order or a chain longer than T.
RecurrentStates autoregressive_states(const GenerationOrder& order, const Matrix& token_states,
                                      const Matrix& node_embeddings, const CellParams& cell,
                                      int T = kDefaultChainLimit);

}  // namespace latent_order
