#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "latent_order/core.hpp"
#include "latent_order/matrix.hpp"

namespace latent_order {

enum class OutputMode { soft, rounded, straight_through };

std::string_view to_string(OutputMode mode);
// Accepts "soft", "rounded", "straight_through" (also "st"); throws ConfigError.
OutputMode parse_mode(std::string_view text);

// Temperature used by hard_argmax before rounding.
inline constexpr double kHardTau = 0.01;

struct SolverConfig {
  double tau = 1.0;
  int iterations = 500;
  OutputMode mode = OutputMode::soft;
  double residual_early_exit = 1e-9;
  // Mask entries that no feasible order can use before iterating (see
  // support.hpp). The projection is unchanged; convergence becomes linear.
  bool prune_forced_zeros = true;

  // Throws ConfigError("tau must be positive") and friends.
  void check() const;
};

// Record of the executed sweeps, enough to reverse-accumulate through them.
class BackwardState {
 public:
  bool empty() const { return row_normalized_.empty(); }
  std::size_t iterations() const { return row_normalized_.size(); }
  double tau() const { return tau_; }
  OutputMode mode() const { return mode_; }

  // exp(LogO^(t)) for t = 1..iterations(): the row-normalized iterates.
  const std::vector<Matrix>& iterates() const { return row_normalized_; }

 private:
  friend class BregmanSolver;
  friend Matrix projection_gradient(const BackwardState&, const Matrix&);

  double tau_ = 1.0;
  std::size_t m_ = 0;
  OutputMode mode_ = OutputMode::soft;
  Matrix support_;  // 1 where the (pruned) logits are finite
  std::vector<Matrix> column_normalized_;  // exp(LogO^(t+1/2))
  std::vector<Matrix> row_normalized_;     // exp(LogO^(t+1))
};

struct SolveResult {
  GenerationOrder order;  // soft, rounded or hard depending on the mode
  Matrix soft;            // soft solution at the configured tau
  BackwardState backward_state;
  double residual = 0.0;  // max row/column constraint violation at exit
  int iterations_run = 0;
};

// Entropy-regularized projection of perturbed logits onto the order polytope:
// LogO = W/tau, then alternate column log-softmax over columns j < m (the
// terminal column is left as is) and row log-softmax over every row. Throws
// InputError on NaN/+inf logits and MaskError on a starved row or column.
SolveResult entropic_projection(const Matrix& perturbed_logits, std::size_t m,
                                const SolverConfig& config);

struct HardArgmaxReport {
  GenerationOrder rounded;      // 0.5-rounding of the low-temperature solution
  bool rounded_feasible = false;
  bool used_enumeration = false;
  double residual = 0.0;
};

// Feasible integer maximizer of <W, O>: low-temperature projection, rounding,
// validation, enumeration fallback on small instances. Throws
// UnresolvedTieError when rounding fails on an instance too large to enumerate.
GenerationOrder hard_argmax(const Matrix& perturbed_logits, std::size_t m,
                            HardArgmaxReport* report = nullptr);

// dL/dW from dL/dO by reverse accumulation through the recorded sweeps. For
// straight-through this is the gradient of the soft solution at the same tau.
Matrix projection_gradient(const BackwardState& state, const Matrix& upstream);

// <W, O> - tau <O, log O>, the regularized objective as usually written.
double entropic_objective(const Matrix& logits, const Matrix& order, double tau);

// <W, O> - tau <O, log O - 1>; equal to the above plus tau * sum(O).
double bregman_objective(const Matrix& logits, const Matrix& order, double tau);

// Max |row sum - 1| and |column sum - 1| over columns j < m.
double constraint_residual(const Matrix& order, std::size_t m);

// Thresholds every entry at 0.5.
GenerationOrder round_order(const Matrix& soft, std::size_t n, std::size_t m);

}  // namespace latent_order
