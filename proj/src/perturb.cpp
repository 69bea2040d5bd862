#include "latent_order/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "latent_order/error.hpp"

namespace latent_order {

double gumbel_from_uniform(double u) {
  u = std::clamp(u, kUniformClamp, 1.0 - kUniformClamp);
  return -std::log(-std::log(u));
}

UniformSource seeded_uniforms(std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [rng] { return static_cast<double>((*rng)() >> 11) * 0x1.0p-53; };
}

PerturbationDraw draw_perturbation(std::size_t rows, std::size_t cols, const UniformSource& source,
                                   std::uint64_t seed) {
  PerturbationDraw draw{Matrix(rows, cols), seed};
  for (double& e : draw.epsilon.values()) e = gumbel_from_uniform(source());
  return draw;
}

PerturbationDraw draw_perturbation(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  return draw_perturbation(rows, cols, seeded_uniforms(seed), seed);
}

Matrix perturbed_logits(const LogitSet& logits, const PerturbationDraw& draw) {
  Matrix w = logits.masked();
  if (!w.same_shape(draw.epsilon)) throw DimensionError("perturbation shape differs from logits");
  auto wv = w.values();
  const auto ev = draw.epsilon.values();
  for (std::size_t k = 0; k < wv.size(); ++k)
    if (!is_masked(wv[k])) wv[k] += ev[k];
  return w;
}

Matrix sample_perturbed_logits(const LogitSet& logits, std::uint64_t seed) {
  return perturbed_logits(logits,
                          draw_perturbation(logits.w_raw.rows(), logits.w_raw.cols(), seed));
}

double kl_entry(double w) { return w + std::exp(-w) - 1.0; }

double kl_gumbel(const LogitSet& logits) {
  const Matrix w = logits.masked();
  double kl = 0.0;
  for (double x : w.values())
    if (!is_masked(x)) kl += kl_entry(x);
  return kl;
}

double kl_free_bits(const LogitSet& logits, double lambda) {
  if (!(lambda >= 0.0)) throw InputError("lambda must be nonnegative");
  return std::max(lambda, kl_gumbel(logits));
}

Matrix kl_free_bits_grad(const LogitSet& logits, double lambda) {
  const Matrix w = logits.masked();
  Matrix g(w.rows(), w.cols());
  if (kl_gumbel(logits) < lambda) return g;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double x = w.values()[k];
    if (!is_masked(x)) g.values()[k] = 1.0 - std::exp(-x);
  }
  return g;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace latent_order
