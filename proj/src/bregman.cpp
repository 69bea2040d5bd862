#include "latent_order/bregman.hpp"

#include <algorithm>
#include <cmath>

#include "latent_order/error.hpp"
#include "latent_order/oracle.hpp"
#include "latent_order/support.hpp"

namespace latent_order {

std::string_view to_string(OutputMode mode) {
  switch (mode) {
    case OutputMode::soft:
      return "soft";
    case OutputMode::rounded:
      return "rounded";
    case OutputMode::straight_through:
      return "straight_through";
  }
  return "soft";
}

OutputMode parse_mode(std::string_view text) {
  if (text == "soft") return OutputMode::soft;
  if (text == "rounded") return OutputMode::rounded;
  if (text == "straight_through" || text == "straight-through" || text == "st")
    return OutputMode::straight_through;
  throw ConfigError("unknown mode '" + std::string(text) +
                    "' (expected soft, rounded or straight_through)");
}

void SolverConfig::check() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("tau must be positive");
  if (iterations < 1) throw ConfigError("iterations must be at least 1");
  if (!(residual_early_exit >= 0.0)) throw ConfigError("residual_early_exit must be >= 0");
}

namespace {

void check_logits(const Matrix& w, std::size_t m) {
  if (w.cols() != m + 1 || w.rows() <= m)
    throw DimensionError("logits must be (n+m)x(m+1) with n >= 1");
  for (double x : w.values()) {
    if (std::isnan(x) || x == std::numeric_limits<double>::infinity())
      throw InputError("logits contain NaN or +inf at a non-masked entry");
  }
  check_finite_support(w, m);
}

// In-place log-softmax over column j (rows with -inf are skipped).
void log_normalize_column(Matrix& log_o, std::size_t j) {
  double peak = kMasked;
  for (std::size_t i = 0; i < log_o.rows(); ++i) peak = std::max(peak, log_o(i, j));
  double acc = 0.0;
  for (std::size_t i = 0; i < log_o.rows(); ++i) acc += std::exp(log_o(i, j) - peak);
  const double lse = peak + std::log(acc);
  for (std::size_t i = 0; i < log_o.rows(); ++i) log_o(i, j) -= lse;
}

void log_normalize_row(Matrix& log_o, std::size_t i) {
  const auto r = log_o.row(i);
  const double peak = *std::max_element(r.begin(), r.end());
  double acc = 0.0;
  for (double x : r) acc += std::exp(x - peak);
  const double lse = peak + std::log(acc);
  for (double& x : r) x -= lse;
}

Matrix exp_of(const Matrix& log_o) {
  Matrix out(log_o.rows(), log_o.cols());
  auto ov = out.values();
  const auto lv = log_o.values();
  for (std::size_t k = 0; k < lv.size(); ++k) ov[k] = std::exp(lv[k]);
  return out;
}

}  // namespace

class BregmanSolver {
 public:
  BregmanSolver(const Matrix& w, std::size_t m, const SolverConfig& config, bool record)
      : w_(w), m_(m), config_(config), record_(record) {}

  SolveResult run() {
    SolveResult result;
    BackwardState& state = result.backward_state;
    state.tau_ = config_.tau;
    state.m_ = m_;
    state.mode_ = config_.mode;
    state.support_ = Matrix(w_.rows(), w_.cols());
    for (std::size_t k = 0; k < w_.size(); ++k)
      state.support_.values()[k] = is_masked(w_.values()[k]) ? 0.0 : 1.0;

    Matrix log_o = w_;
    for (double& x : log_o.values()) x /= config_.tau;

    Matrix current;
    double residual = 0.0;
    int t = 0;
    while (t < config_.iterations) {
      for (std::size_t j = 0; j < m_; ++j) log_normalize_column(log_o, j);
      if (record_) state.column_normalized_.push_back(exp_of(log_o));
      for (std::size_t i = 0; i < log_o.rows(); ++i) log_normalize_row(log_o, i);
      current = exp_of(log_o);
      ++t;
      residual = constraint_residual(current, m_);
      if (record_) state.row_normalized_.push_back(current);
      if (residual < config_.residual_early_exit) break;
    }

    result.soft = current;
    result.residual = residual;
    result.iterations_run = t;
    return result;
  }

 private:
  const Matrix& w_;
  std::size_t m_;
  SolverConfig config_;
  bool record_;
};

double constraint_residual(const Matrix& o, std::size_t m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < o.rows(); ++i) {
    double sum = 0.0;
    for (double x : o.row(i)) sum += x;
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  for (std::size_t j = 0; j < m; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < o.rows(); ++i) sum += o(i, j);
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

GenerationOrder round_order(const Matrix& soft, std::size_t n, std::size_t m) {
  GenerationOrder out{Matrix(soft.rows(), soft.cols()), n, m, true};
  for (std::size_t k = 0; k < soft.size(); ++k)
    out.matrix.values()[k] = soft.values()[k] > 0.5 ? 1.0 : 0.0;
  return out;
}

SolveResult entropic_projection(const Matrix& perturbed_logits, std::size_t m,
                                const SolverConfig& config) {
  config.check();
  check_logits(perturbed_logits, m);
  const std::size_t n = perturbed_logits.rows() - m;
  const Matrix w = config.prune_forced_zeros ? prune_forced_zeros(perturbed_logits, m)
                                             : perturbed_logits;

  const bool record = config.mode != OutputMode::rounded;
  SolveResult result = BregmanSolver(w, m, config, record).run();

  switch (config.mode) {
    case OutputMode::soft:
      result.order = GenerationOrder{result.soft, n, m, false};
      break;
    case OutputMode::rounded:
      result.order = round_order(result.soft, n, m);
      break;
    case OutputMode::straight_through:
      result.order = hard_argmax(perturbed_logits, m);
      break;
  }
  return result;
}

GenerationOrder hard_argmax(const Matrix& perturbed_logits, std::size_t m,
                            HardArgmaxReport* report) {
  SolverConfig config;
  config.tau = kHardTau;
  config.mode = OutputMode::rounded;
  const SolveResult solved = entropic_projection(perturbed_logits, m, config);
  const std::size_t n = perturbed_logits.rows() - m;

  HardArgmaxReport local;
  HardArgmaxReport& rep = report ? *report : local;
  rep.rounded = solved.order;
  rep.residual = solved.residual;
  rep.rounded_feasible = validate_order(solved.order, true).empty();
  rep.used_enumeration = false;
  if (rep.rounded_feasible) return solved.order;

  if ((n + m) * (m + 1) > kEnumerationCellLimit) {
    throw UnresolvedTieError(
        "rounding the low-temperature solution is infeasible and the instance is too large to "
        "enumerate; re-perturb and retry");
  }
  rep.used_enumeration = true;
  return lp_argmax(perturbed_logits, m).order;
}

Matrix projection_gradient(const BackwardState& state, const Matrix& upstream) {
  if (state.mode_ == OutputMode::rounded)
    throw UnsupportedModeError("projection_gradient: rounded mode has no gradient");
  if (state.empty()) throw UnsupportedModeError("projection_gradient: no recorded iterations");
  const Matrix& final_o = state.row_normalized_.back();
  if (!upstream.same_shape(final_o)) throw DimensionError("projection_gradient: shape mismatch");

  const std::size_t rows = final_o.rows();
  const std::size_t cols = final_o.cols();
  // d/dLogO at the output: exp is elementwise.
  Matrix g(rows, cols);
  for (std::size_t k = 0; k < g.size(); ++k)
    g.values()[k] = upstream.values()[k] * final_o.values()[k];

  for (std::size_t t = state.row_normalized_.size(); t-- > 0;) {
    const Matrix& p = state.row_normalized_[t];
    for (std::size_t i = 0; i < rows; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < cols; ++j) sum += g(i, j);
      for (std::size_t j = 0; j < cols; ++j) g(i, j) -= p(i, j) * sum;
    }
    const Matrix& q = state.column_normalized_[t];
    for (std::size_t j = 0; j < state.m_; ++j) {
      double sum = 0.0;
      for (std::size_t i = 0; i < rows; ++i) sum += g(i, j);
      for (std::size_t i = 0; i < rows; ++i) g(i, j) -= q(i, j) * sum;
    }
  }

  for (std::size_t k = 0; k < g.size(); ++k) {
    g.values()[k] = state.support_.values()[k] == 0.0 ? 0.0 : g.values()[k] / state.tau_;
  }
  return g;
}

namespace {

double neg_entropy_term(const Matrix& o) {
  double acc = 0.0;
  for (double x : o.values())
    if (x > 0.0) acc += x * std::log(x);
  return acc;
}

}  // namespace

double entropic_objective(const Matrix& logits, const Matrix& order, double tau) {
  return inner(logits, order) - tau * neg_entropy_term(order);
}

double bregman_objective(const Matrix& logits, const Matrix& order, double tau) {
  double mass = 0.0;
  for (double x : order.values()) mass += x;
  return entropic_objective(logits, order, tau) + tau * mass;
}

}  // namespace latent_order
