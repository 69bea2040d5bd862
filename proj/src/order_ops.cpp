#include "latent_order/order_ops.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "latent_order/error.hpp"

namespace latent_order {

namespace {

void check_T(int T) {
  if (T < 1) throw ConfigError("T must be at least 1");
}

void check_discrete_valid(const GenerationOrder& order) {
  const auto problems = validate_order(order, true);
  if (!problems.empty()) throw ValidationError("invalid discrete order: " + problems.front());
}

// Transition P = S[:, :m] + Diag(S[:, m]).
Matrix transition(const GenerationOrder& order) {
  const std::size_t m = order.m;
  Matrix p(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) p(i, j) = order.matrix(order.n + i, j);
    p(i, i) += order.matrix(order.n + i, m);
  }
  return p;
}

void check_states(const GenerationOrder& order, const Matrix& tokens, const Matrix& emb,
                  const CellParams& cell) {
  if (tokens.rows() != order.n || tokens.cols() != cell.d)
    throw DimensionError("token_states must be n x d");
  if (emb.rows() != order.m || emb.cols() != cell.d)
    throw DimensionError("node_embeddings must be m x d");
}

}  // namespace

Matrix compute_B(const GenerationOrder& order, int T) {
  check_T(T);
  const Matrix p = transition(order);
  Matrix mass = leading_columns(order.alignment(), order.m);  // n x m
  for (int t = 0; t < T; ++t) mass = multiply(mass, p);
  return transpose(mass);
}

Matrix compute_A_inf(const GenerationOrder& order, int T) {
  check_T(T);
  const Matrix a = leading_columns(order.alignment(), order.m);
  const Matrix s = leading_columns(order.segmentation(), order.m);
  Matrix a_inf = a;
  for (int t = 0; t < T; ++t) {
    a_inf = multiply(a_inf, s);
    for (std::size_t k = 0; k < a_inf.size(); ++k) a_inf.values()[k] += a.values()[k];
  }
  return a_inf;
}

AlignmentResult derive_alignment(const GenerationOrder& order, int T) {
  return {compute_B(order, T), compute_A_inf(order, T)};
}

std::vector<Subgraph> extract_segmentation(const GenerationOrder& order) {
  check_discrete_valid(order);
  const std::size_t n = order.n;
  const std::size_t m = order.m;
  auto next_of = [&](std::size_t row) {
    for (std::size_t j = 0; j <= m; ++j)
      if (order.matrix(row, j) > 0.5) return j;
    return m;
  };
  std::vector<Subgraph> out;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t j = next_of(k);
    if (j == m) continue;
    Subgraph g{static_cast<int>(k), {}};
    while (j < m) {
      g.chain.push_back(static_cast<int>(j));
      j = next_of(n + j);
    }
    out.push_back(std::move(g));
  }
  return out;
}

CellParams make_cell(std::size_t d, std::uint64_t seed, bool linear) {
  if (d == 0) throw ConfigError("cell dimension must be positive");
  CellParams cell{Matrix(d, d), Matrix(d, d), std::vector<double>(d), d, seed, linear};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(d)));
  for (double& x : cell.U.values()) x = normal(rng);
  for (double& x : cell.V.values()) x = normal(rng);
  for (double& x : cell.bias) x = normal(rng);
  return cell;
}

std::vector<double> apply_cell(const CellParams& cell, std::span<const double> state,
                               std::span<const double> embedding) {
  std::vector<double> out(cell.d);
  for (std::size_t r = 0; r < cell.d; ++r) {
    double acc = cell.bias[r];
    for (std::size_t c = 0; c < cell.d; ++c)
      acc += cell.U(r, c) * state[c] + cell.V(r, c) * embedding[c];
    out[r] = cell.linear ? acc : std::tanh(acc);
  }
  return out;
}

RecurrentStates relaxed_states(const GenerationOrder& order, const Matrix& token_states,
                               const Matrix& node_embeddings, const CellParams& cell, int T) {
  check_T(T);
  check_states(order, token_states, node_embeddings, cell);
  const std::size_t n = order.n;
  const std::size_t m = order.m;
  const std::size_t d = cell.d;

  // the A-term does not change across rounds
  Matrix from_tokens(m, d);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double a = order.matrix(k, i);
      if (a == 0.0) continue;
      for (std::size_t c = 0; c < d; ++c) from_tokens(i, c) += a * token_states(k, c);
    }

  Matrix h(m, d);
  Matrix out(m, d);
  auto cell_outputs = [&] {
    for (std::size_t j = 0; j < m; ++j) {
      const auto y = apply_cell(cell, h.row(j), node_embeddings.row(j));
      std::copy(y.begin(), y.end(), out.row(j).begin());
    }
  };
  for (int t = 0; t < T; ++t) {
    cell_outputs();
    Matrix next = from_tokens;
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < m; ++i) {
        const double s = order.matrix(n + j, i);
        if (s == 0.0) continue;
        for (std::size_t c = 0; c < d; ++c) next(i, c) += s * out(j, c);
      }
    h = std::move(next);
  }
  cell_outputs();

  const Matrix b = compute_B(order, T);
  Matrix tail(n, d);
  for (std::size_t k = 0; k < n; ++k) {
    double ended = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      ended += b(j, k);
      if (b(j, k) == 0.0) continue;
      for (std::size_t c = 0; c < d; ++c) tail(k, c) += b(j, k) * out(j, c);
    }
    for (std::size_t c = 0; c < d; ++c) tail(k, c) += (1.0 - ended) * token_states(k, c);
  }
  return {std::move(h), std::move(tail)};
}

RecurrentStates autoregressive_states(const GenerationOrder& order, const Matrix& token_states,
                                      const Matrix& node_embeddings, const CellParams& cell,
                                      int T) {
  check_T(T);
  check_states(order, token_states, node_embeddings, cell);
  const auto chains = extract_segmentation(order);
  const std::size_t d = cell.d;
  RecurrentStates st{Matrix(order.m, d), token_states};
  for (const auto& g : chains) {
    if (g.chain.size() > static_cast<std::size_t>(T))
      throw ValidationError("token " + std::to_string(g.token) + " has a chain of " +
                            std::to_string(g.chain.size()) + " nodes, more than T=" +
                            std::to_string(T));
    std::vector<double> h(token_states.row(static_cast<std::size_t>(g.token)).begin(),
                          token_states.row(static_cast<std::size_t>(g.token)).end());
    for (int j : g.chain) {
      const auto row = static_cast<std::size_t>(j);
      std::copy(h.begin(), h.end(), st.node_states.row(row).begin());
      h = apply_cell(cell, h, node_embeddings.row(row));
    }
    std::copy(h.begin(), h.end(), st.tail_states.row(static_cast<std::size_t>(g.token)).begin());
  }
  return st;
}

}  // namespace latent_order
