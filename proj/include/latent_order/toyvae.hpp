#pragma once

#include <cstdint>
#include <vector>

#include "latent_order/bregman.hpp"
#include "latent_order/core.hpp"

namespace latent_order {

// log-likelihood <theta, O>: linear in the order, so the best order is
// lp_argmax(theta) and recovery can be checked exactly.
struct ToyDecoder {
  Matrix theta;  // (n+m) x (m+1)
};

// One-sample ELBO: perturb with `seed`, solve under `config`, return
// <theta, O> - kl_free_bits(logits, lambda).
double elbo_estimate(const LogitSet& logits, const ToyDecoder& decoder, double lambda,
                     std::uint64_t seed, const SolverConfig& config);

struct TrainConfig {
  int steps = 500;
  double learning_rate = 0.1;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  OutputMode mode = OutputMode::straight_through;
  double tau = 1.0;
  int solver_iterations = 500;
};

struct TrainResult {
  Matrix w;                  // learned raw logits
  GenerationOrder learned;   // hard_argmax of the masked learned logits
  GenerationOrder target;    // lp_argmax of the masked theta
  bool recovered = false;
  std::vector<double> elbo_trace;  // one value per step
};

// Gradient ascent on the one-sample ELBO from W = 0 with a fresh Gumbel draw
// per step (seed mix_seed(config.seed, step)). Masks come from build_masks.
// The forward order is the soft solution, its 0.5-rounding, or the hard
// argmax depending on the mode; the backward pass is always the soft
// solution's gradient. Throws TrainingError when W stops being finite.
TrainResult train_toy(const Instance& instance, const ToyDecoder& decoder,
                      const TrainConfig& config);

}  // namespace latent_order
