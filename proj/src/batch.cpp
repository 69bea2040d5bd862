#include "latent_order/batch.hpp"

#include <exception>

#include "latent_order/perturb.hpp"

namespace latent_order {

std::vector<SolveResult> solve_batch(const std::vector<BatchItem>& items,
                                     const SolverConfig& config) {
  config.check();
  std::vector<SolveResult> out(items.size());
  std::vector<std::exception_ptr> errors(items.size());
  const auto count = static_cast<long>(items.size());
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < count; ++k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      out[i] = entropic_projection(items[i].logits, items[i].m, config);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<SolveResult> solve_batch_serial(const std::vector<BatchItem>& items,
                                            const SolverConfig& config) {
  config.check();
  std::vector<SolveResult> out;
  out.reserve(items.size());
  for (const auto& item : items) out.push_back(entropic_projection(item.logits, item.m, config));
  return out;
}

std::vector<SolveResult> perturb_and_solve(const LogitSet& logits, std::size_t samples,
                                           std::uint64_t seed, const SolverConfig& config) {
  std::vector<BatchItem> items(samples);
  for (std::size_t i = 0; i < samples; ++i)
    items[i] = {sample_perturbed_logits(logits, mix_seed(seed, i)), logits.m()};
  return solve_batch(items, config);
}

}  // namespace latent_order
