#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "latent_order/core.hpp"
#include "latent_order/matrix.hpp"

namespace latent_order {

// Brute-force references. Nothing here calls the solver, so tests can pit the
// two against each other.

// Enumeration is refused above this many matrix cells, (n+m) * (m+1).
inline constexpr std::size_t kEnumerationCellLimit = 64;

// Every discrete order whose nonzero entries sit on finite entries of `mask`
// ((n+m) x (m+1), 0 or -inf; any finite value counts as permitted), with unit
// row sums, unit column sums for j < m, and an acyclic concept graph. The
// output is complete, duplicate-free and in lexicographic order of the chosen
// column per row. Throws SizeError above kEnumerationCellLimit.
std::vector<GenerationOrder> enumerate_valid_orders(std::size_t n, std::size_t m,
                                                    const Matrix& mask);

struct LpArgmax {
  GenerationOrder order;
  double value = 0.0;
  std::size_t tie_count = 0;  // orders attaining `value`
  // Best value among the remaining orders; equals `value` on ties and is
  // -inf when there is a single valid order.
  double runner_up = 0.0;
  std::size_t candidates = 0;
};

// Exact maximizer of <W, O> over enumerate_valid_orders(mask of W).
LpArgmax lp_argmax(const Matrix& logits, std::size_t m);

// Central differences per coordinate. Coordinates where x is -inf are left at
// zero. Throws InputError when f is non-finite at a probed point.
Matrix finite_diff_grad(const std::function<double(const Matrix&)>& f, const Matrix& x,
                        double step);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

// Monte-Carlo KL(Gumbel(W, 1) || Gumbel(0, 1)) summed over finite entries of
// W, from `samples` draws of the shifted Gumbels. Requires samples >= 10^4.
MonteCarloEstimate mc_kl(const Matrix& logits, std::size_t samples, std::uint64_t seed);

// Walks each token's chain in a discrete order: the m x n matrix with a 1 at
// (last node, token) for every nonempty chain.
Matrix chain_end_oracle(const GenerationOrder& order);

// n x m matrix with a 1 at (token, node) whenever the node is on the token's
// chain.
Matrix chain_membership_oracle(const GenerationOrder& order);

// Counts valid orders by a column-first recursion (each concept column picks
// its generating row), independent of enumerate_valid_orders.
std::size_t count_valid_orders(std::size_t n, std::size_t m, const Matrix& mask);

struct ArborescenceOptimum {
  double weight = 0.0;
  std::size_t trees = 0;  // spanning arborescences examined
};

// Best total weight over every parent assignment rooted at `root` (m <= 6).
ArborescenceOptimum brute_force_arborescence(const std::vector<std::vector<double>>& weight,
                                             int root);

}  // namespace latent_order
