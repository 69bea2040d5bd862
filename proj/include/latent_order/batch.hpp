#pragma once

#include <cstdint>
#include <vector>

#include "latent_order/bregman.hpp"
#include "latent_order/core.hpp"

namespace latent_order {

struct BatchItem {
  Matrix logits;  // perturbed, masked
  std::size_t m = 0;
};

// One solve per item, OpenMP across items. Results are in input order and do
// not depend on the thread count. The first failing item's exception is
// rethrown after all items finish.
std::vector<SolveResult> solve_batch(const std::vector<BatchItem>& items,
                                     const SolverConfig& config);

// Plain loop; the reference for solve_batch.
std::vector<SolveResult> solve_batch_serial(const std::vector<BatchItem>& items,
                                            const SolverConfig& config);

// Draws sample i with seed mix_seed(seed, i) and solves it.
std::vector<SolveResult> perturb_and_solve(const LogitSet& logits, std::size_t samples,
                                           std::uint64_t seed, const SolverConfig& config);

}  // namespace latent_order
