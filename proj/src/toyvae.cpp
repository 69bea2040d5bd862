#include "latent_order/toyvae.hpp"

#include <cmath>

#include "latent_order/error.hpp"
#include "latent_order/masks.hpp"
#include "latent_order/oracle.hpp"
#include "latent_order/perturb.hpp"

namespace latent_order {

double elbo_estimate(const LogitSet& logits, const ToyDecoder& decoder, double lambda,
                     std::uint64_t seed, const SolverConfig& config) {
  if (!decoder.theta.same_shape(logits.w_raw))
    throw DimensionError("decoder theta and logits differ in shape");
  const Matrix w = sample_perturbed_logits(logits, seed);
  const SolveResult solved = entropic_projection(w, logits.m(), config);
  return inner(decoder.theta, solved.order.matrix) - kl_free_bits(logits, lambda);
}

TrainResult train_toy(const Instance& instance, const ToyDecoder& decoder,
                      const TrainConfig& config) {
  if (config.steps < 0) throw ConfigError("steps must be nonnegative");
  if (!(config.learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  const MaskPair masks = build_masks(instance);
  const std::size_t n = instance.n();
  const std::size_t m = instance.m();
  if (decoder.theta.rows() != n + m || decoder.theta.cols() != m + 1)
    throw DimensionError("decoder theta must be (n+m)x(m+1)");
  for (double x : decoder.theta.values())
    if (!std::isfinite(x)) throw InputError("decoder theta must be finite");

  LogitSet logits{Matrix(n + m, m + 1), masks.a_mask, masks.s_mask};
  SolverConfig solver;
  solver.tau = config.tau;
  solver.iterations = config.solver_iterations;
  // Rounded forward passes still need the soft backward state.
  solver.mode = config.mode == OutputMode::rounded ? OutputMode::soft : config.mode;

  TrainResult result;
  result.elbo_trace.reserve(static_cast<std::size_t>(config.steps));
  for (int step = 0; step < config.steps; ++step) {
    const Matrix w_tilde = sample_perturbed_logits(logits, mix_seed(config.seed, step));
    const SolveResult solved = entropic_projection(w_tilde, m, solver);
    const Matrix forward =
        config.mode == OutputMode::rounded ? round_order(solved.soft, n, m).matrix
                                           : solved.order.matrix;
    result.elbo_trace.push_back(inner(decoder.theta, forward) - kl_free_bits(logits, config.lambda));

    // d<theta, O>/dO = theta for every forward choice
    const Matrix g_rec = projection_gradient(solved.backward_state, decoder.theta);
    const Matrix g_kl = kl_free_bits_grad(logits, config.lambda);
    for (std::size_t k = 0; k < logits.w_raw.size(); ++k) {
      double& x = logits.w_raw.values()[k];
      x += config.learning_rate * (g_rec.values()[k] - g_kl.values()[k]);
      if (!std::isfinite(x))
        throw TrainingError("logits diverged at step " + std::to_string(step), step);
    }
  }

  const Matrix learned = logits.masked();
  LogitSet target_set{decoder.theta, masks.a_mask, masks.s_mask};
  const LpArgmax best = lp_argmax(target_set.masked(), m);
  result.w = logits.w_raw;
  result.learned = hard_argmax(learned, m);
  result.target = best.order;
  const double tol = 1e-9 * (1.0 + std::abs(best.value));
  result.recovered = result.learned.matrix == best.order.matrix ||
                     (best.tie_count > 1 &&
                      std::abs(inner(decoder.theta, result.learned.matrix) - best.value) <= tol);
  return result;
}

}  // namespace latent_order
