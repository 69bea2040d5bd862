#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "latent_order/core.hpp"
#include "latent_order/decode.hpp"
#include "latent_order/matrix.hpp"

namespace latent_order {

// Random fixtures shared by the property battery and the test suites.
using Rng = std::mt19937_64;

// Rooted DAG on m nodes: a random spanning tree from the root plus up to
// `extra_edges` forward edges. Labels come from a small pool so ties on
// labels happen; each node is copyable with probability copy_prob from a
// random nonempty subset of n tokens.
RootedGraph random_graph(Rng& rng, std::size_t m, std::size_t n = 1, double copy_prob = 0.0,
                         std::size_t extra_edges = 1);

Instance random_instance(Rng& rng, std::size_t n, std::size_t m, double copy_prob = 0.0);

// build_masks(instance) plus N(0, sigma^2) entries.
Matrix random_masked_logits(Rng& rng, const Instance& instance, double sigma = 1.0);

// Discrete valid order whose chains have at most max_chain nodes. Needs
// ceil(m / max_chain) <= n.
GenerationOrder random_discrete_order(Rng& rng, std::size_t n, std::size_t m,
                                      std::size_t max_chain);

// Label distributions drawn from a softmax of N(0, spread^2) scores; label 0
// is the no-relation label.
EdgeScores random_scores(Rng& rng, std::size_t m, std::size_t labels = 3, double spread = 2.0);

// Relative error ||a - b||_inf / max(||a||_inf, ||b||_inf, 1e-12).
double relative_error(const Matrix& a, const Matrix& b);

struct CheckResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::string first_failure;

  bool passed() const { return failures == 0; }
};

// Property battery over `seeds` random trials per check.
std::vector<CheckResult> run_verify(std::size_t seeds, std::uint64_t base_seed);

}  // namespace latent_order
