#include "latent_order/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "latent_order/error.hpp"

namespace latent_order {

namespace {

// Three-color DFS over the concept graph given as "next node" per concept row
// (m means terminal).
bool chains_acyclic(const std::vector<std::size_t>& next, std::size_t m) {
  std::vector<int> color(m, 0);
  for (std::size_t start = 0; start < m; ++start) {
    if (color[start] != 0) continue;
    std::size_t u = start;
    std::vector<std::size_t> path;
    while (u < m && color[u] == 0) {
      color[u] = 1;
      path.push_back(u);
      u = next[u];
    }
    if (u < m && color[u] == 1) return false;
    for (std::size_t v : path) color[v] = 2;
  }
  return true;
}

class Enumerator {
 public:
  Enumerator(std::size_t n, std::size_t m, const Matrix& mask)
      : n_(n), m_(m), rows_(n + m), mask_(mask), choice_(n + m), used_(m, 0) {}

  // Enumerates with the first row fixed to `first_col` (one shard).
  std::vector<GenerationOrder> shard(std::size_t first_col) {
    out_.clear();
    if (is_masked(mask_(0, first_col))) return {};
    choice_[0] = first_col;
    if (first_col < m_) used_[first_col] = 1;
    recurse(1, first_col < m_ ? 1 : 0);
    if (first_col < m_) used_[first_col] = 0;
    return std::move(out_);
  }

 private:
  void recurse(std::size_t row, std::size_t covered) {
    if (m_ - covered > rows_ - row) return;  // too few rows left to cover columns
    if (row == rows_) {
      emit();
      return;
    }
    for (std::size_t j = 0; j <= m_; ++j) {
      if (is_masked(mask_(row, j))) continue;
      if (j < m_ && used_[j]) continue;
      choice_[row] = j;
      if (j < m_) used_[j] = 1;
      recurse(row + 1, covered + (j < m_ ? 1 : 0));
      if (j < m_) used_[j] = 0;
    }
  }

  void emit() {
    std::vector<std::size_t> next(m_);
    for (std::size_t i = 0; i < m_; ++i) next[i] = choice_[n_ + i];
    if (!chains_acyclic(next, m_)) return;
    GenerationOrder order{Matrix(rows_, m_ + 1), n_, m_, true};
    for (std::size_t r = 0; r < rows_; ++r) order.matrix(r, choice_[r]) = 1.0;
    out_.push_back(std::move(order));
  }

  std::size_t n_, m_, rows_;
  const Matrix& mask_;
  std::vector<std::size_t> choice_;
  std::vector<char> used_;
  std::vector<GenerationOrder> out_;
};

}  // namespace

std::vector<GenerationOrder> enumerate_valid_orders(std::size_t n, std::size_t m,
                                                    const Matrix& mask) {
  if (mask.rows() != n + m || mask.cols() != m + 1)
    throw DimensionError("enumerate_valid_orders: mask must be (n+m)x(m+1)");
  if ((n + m) * (m + 1) > kEnumerationCellLimit)
    throw SizeError("enumerate_valid_orders: " + std::to_string((n + m) * (m + 1)) +
                    " cells exceeds the limit of " + std::to_string(kEnumerationCellLimit));

  // One shard per choice of the first row; shards are concatenated in column
  // order so the result does not depend on the thread count.
  const auto shards = static_cast<long>(m + 1);
  std::vector<std::vector<GenerationOrder>> parts(m + 1);
#pragma omp parallel for schedule(dynamic)
  for (long s = 0; s < shards; ++s) {
    Enumerator e(n, m, mask);
    parts[static_cast<std::size_t>(s)] = e.shard(static_cast<std::size_t>(s));
  }
  std::vector<GenerationOrder> all;
  for (auto& p : parts)
    for (auto& o : p) all.push_back(std::move(o));
  return all;
}

LpArgmax lp_argmax(const Matrix& logits, std::size_t m) {
  if (logits.cols() != m + 1 || logits.rows() <= m)
    throw DimensionError("lp_argmax: logits must be (n+m)x(m+1)");
  const std::size_t n = logits.rows() - m;
  const auto orders = enumerate_valid_orders(n, m, logits);
  if (orders.empty()) throw MaskError("lp_argmax: no valid order under the masks");

  std::vector<double> values;
  values.reserve(orders.size());
  for (const auto& o : orders) values.push_back(inner(logits, o.matrix));
  const auto best = static_cast<std::size_t>(
      std::max_element(values.begin(), values.end()) - values.begin());

  LpArgmax out;
  out.order = orders[best];
  out.value = values[best];
  out.candidates = orders.size();
  out.runner_up = -std::numeric_limits<double>::infinity();
  const double tol = 1e-12 * (1.0 + std::abs(out.value));
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (std::abs(values[k] - out.value) <= tol) ++out.tie_count;
    if (k != best) out.runner_up = std::max(out.runner_up, values[k]);
  }
  return out;
}

Matrix finite_diff_grad(const std::function<double(const Matrix&)>& f, const Matrix& x,
                        double step) {
  Matrix grad(x.rows(), x.cols());
  Matrix probe = x;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (is_masked(x.values()[k])) continue;
    const double orig = probe.values()[k];
    probe.values()[k] = orig + step;
    const double up = f(probe);
    probe.values()[k] = orig - step;
    const double down = f(probe);
    probe.values()[k] = orig;
    if (!std::isfinite(up) || !std::isfinite(down))
      throw InputError("finite_diff_grad: non-finite evaluation at coordinate " +
                       std::to_string(k));
    grad.values()[k] = (up - down) / (2.0 * step);
  }
  return grad;
}

MonteCarloEstimate mc_kl(const Matrix& logits, std::size_t samples, std::uint64_t seed) {
  if (samples < 10000) throw InputError("mc_kl: need at least 10^4 samples");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    double log_ratio = 0.0;
    for (double w : logits.values()) {
      if (is_masked(w)) continue;
      const double u = std::clamp(unif(rng), 1e-300, 1.0 - 1e-16);
      const double x = w - std::log(-std::log(u));  // draw from Gumbel(w, 1)
      // log g(x; w) - log g(x; 0), with log g(x; mu) = -(x - mu) - exp(-(x - mu)).
      log_ratio += w - std::exp(-(x - w)) + std::exp(-x);
    }
    sum += log_ratio;
    sum_sq += log_ratio * log_ratio;
  }
  const double mean = sum / static_cast<double>(samples);
  const double var =
      std::max(0.0, sum_sq / static_cast<double>(samples) - mean * mean) *
      static_cast<double>(samples) / static_cast<double>(samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(samples))};
}

}  // namespace latent_order

namespace latent_order {

namespace {

std::size_t discrete_next(const GenerationOrder& order, std::size_t row) {
  for (std::size_t j = 0; j <= order.m; ++j)
    if (order.matrix(row, j) > 0.5) return j;
  return order.m;
}

}  // namespace

Matrix chain_end_oracle(const GenerationOrder& order) {
  Matrix b(order.m, order.n);
  for (std::size_t k = 0; k < order.n; ++k) {
    std::size_t j = discrete_next(order, k);
    if (j == order.m) continue;
    std::size_t steps = 0;
    while (true) {
      const std::size_t next = discrete_next(order, order.n + j);
      if (next == order.m || ++steps > order.m) break;
      j = next;
    }
    b(j, k) = 1.0;
  }
  return b;
}

Matrix chain_membership_oracle(const GenerationOrder& order) {
  Matrix a(order.n, order.m);
  for (std::size_t k = 0; k < order.n; ++k) {
    std::size_t j = discrete_next(order, k);
    for (std::size_t steps = 0; j < order.m && steps <= order.m; ++steps) {
      a(k, j) = 1.0;
      j = discrete_next(order, order.n + j);
    }
  }
  return a;
}

namespace {

struct ColumnCounter {
  std::size_t n, m;
  const Matrix& mask;
  std::vector<int> owner;  // row that generates column j
  std::vector<char> row_used;
  std::size_t count = 0;

  bool acyclic() const {
    // next[i] for concept rows; unassigned rows go to the terminal
    std::vector<std::size_t> next(m, m);
    for (std::size_t j = 0; j < m; ++j)
      if (static_cast<std::size_t>(owner[j]) >= n) next[owner[j] - n] = j;
    for (std::size_t s = 0; s < m; ++s) {
      std::size_t u = s;
      for (std::size_t steps = 0; u < m; ++steps) {
        if (steps > m) return false;
        u = next[u];
      }
    }
    return true;
  }

  void go(std::size_t j) {
    if (j == m) {
      // rows left unassigned must be allowed to emit the terminal
      for (std::size_t r = 0; r < n + m; ++r)
        if (!row_used[r] && is_masked(mask(r, m))) return;
      if (acyclic()) ++count;
      return;
    }
    for (std::size_t r = 0; r < n + m; ++r) {
      if (row_used[r] || is_masked(mask(r, j))) continue;
      row_used[r] = 1;
      owner[j] = static_cast<int>(r);
      go(j + 1);
      row_used[r] = 0;
    }
  }
};

}  // namespace

std::size_t count_valid_orders(std::size_t n, std::size_t m, const Matrix& mask) {
  if (mask.rows() != n + m || mask.cols() != m + 1)
    throw DimensionError("count_valid_orders: mask must be (n+m)x(m+1)");
  ColumnCounter c{n, m, mask, std::vector<int>(m, -1), std::vector<char>(n + m, 0)};
  c.go(0);
  return c.count;
}

ArborescenceOptimum brute_force_arborescence(const std::vector<std::vector<double>>& weight,
                                             int root) {
  const int m = static_cast<int>(weight.size());
  if (m > 6) throw SizeError("brute_force_arborescence: at most 6 nodes");
  ArborescenceOptimum best{-std::numeric_limits<double>::infinity(), 0};
  std::vector<int> parent(m, -1);
  auto reaches_root = [&](int v) {
    for (int steps = 0; steps <= m; ++steps) {
      if (v == root) return true;
      v = parent[v];
    }
    return false;
  };
  std::function<void(int)> go = [&](int v) {
    if (v == m) {
      for (int u = 0; u < m; ++u)
        if (!reaches_root(u)) return;
      double w = 0.0;
      for (int u = 0; u < m; ++u)
        if (u != root) w += weight[parent[u]][u];
      ++best.trees;
      best.weight = std::max(best.weight, w);
      return;
    }
    if (v == root) return go(v + 1);
    for (int p = 0; p < m; ++p) {
      if (p == v) continue;
      parent[v] = p;
      go(v + 1);
    }
    parent[v] = -1;
  };
  go(0);
  return best;
}

}  // namespace latent_order
