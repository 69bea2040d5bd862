#pragma once

#include <cstdint>
#include <functional>

#include "latent_order/core.hpp"
#include "latent_order/matrix.hpp"

namespace latent_order {

// Uniforms are clamped to this distance from 0 and 1 before the transform.
inline constexpr double kUniformClamp = 1e-12;

struct PerturbationDraw {
  Matrix epsilon;
  std::uint64_t seed = 0;
};

// Supplies uniforms in row-major order; used to force values in tests.
using UniformSource = std::function<double()>;

// -log(-log(u)) with u clamped to [1e-12, 1 - 1e-12].
double gumbel_from_uniform(double u);

// Seeded source of doubles in [0, 1) with 53 random bits, identical on every
// platform (std::uniform_real_distribution is not).
UniformSource seeded_uniforms(std::uint64_t seed);

PerturbationDraw draw_perturbation(std::size_t rows, std::size_t cols, std::uint64_t seed);
PerturbationDraw draw_perturbation(std::size_t rows, std::size_t cols, const UniformSource& source,
                                   std::uint64_t seed = 0);

// w_raw + epsilon with the masks reapplied, so masked entries stay -inf.
Matrix perturbed_logits(const LogitSet& logits, const PerturbationDraw& draw);
Matrix sample_perturbed_logits(const LogitSet& logits, std::uint64_t seed);

// KL(Gumbel(w, 1) || Gumbel(0, 1)) = w + exp(-w) - 1.
double kl_entry(double w);

// Sum of kl_entry over the unmasked entries of w_raw.
double kl_gumbel(const LogitSet& logits);

// max(lambda, KL) on the total KL. Throws InputError for negative lambda.
double kl_free_bits(const LogitSet& logits, double lambda);

// Gradient of kl_free_bits w.r.t. w_raw: 1 - exp(-w) where unmasked, and zero
// everywhere when the free-bits floor is active.
Matrix kl_free_bits_grad(const LogitSet& logits, double lambda);

// Stateless 64-bit mixer used to derive per-instance seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace latent_order
