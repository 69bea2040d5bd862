#include "latent_order/support.hpp"

#include <optional>

#include "latent_order/error.hpp"

namespace latent_order {

namespace {

// Bipartite graph between rows and the m constrained columns, with one row
// and one column optionally removed.
class RowColumnGraph {
 public:
  RowColumnGraph(const Matrix& w, std::size_t m) : w_(w), m_(m) {}

  // Is there a matching that covers every remaining column and every
  // remaining row whose terminal entry is masked? By the Mendelsohn-Dulmage
  // theorem it suffices to find one matching for each side separately.
  bool coverable(std::optional<std::size_t> skip_row, std::optional<std::size_t> skip_col) const {
    skip_row_ = skip_row;
    skip_col_ = skip_col;
    return covers_columns() && covers_must_rows();
  }

 private:
  bool edge(std::size_t i, std::size_t j) const {
    return !is_masked(w_(i, j)) && skip_row_ != i && skip_col_ != j;
  }

  bool augment_from_column(std::size_t j, std::vector<int>& row_owner,
                           std::vector<char>& visited) const {
    for (std::size_t i = 0; i < w_.rows(); ++i) {
      if (!edge(i, j) || visited[i]) continue;
      visited[i] = 1;
      if (row_owner[i] < 0 ||
          augment_from_column(static_cast<std::size_t>(row_owner[i]), row_owner, visited)) {
        row_owner[i] = static_cast<int>(j);
        return true;
      }
    }
    return false;
  }

  bool augment_from_row(std::size_t i, std::vector<int>& col_owner,
                        std::vector<char>& visited) const {
    for (std::size_t j = 0; j < m_; ++j) {
      if (!edge(i, j) || visited[j]) continue;
      visited[j] = 1;
      if (col_owner[j] < 0 ||
          augment_from_row(static_cast<std::size_t>(col_owner[j]), col_owner, visited)) {
        col_owner[j] = static_cast<int>(i);
        return true;
      }
    }
    return false;
  }

  bool covers_columns() const {
    std::vector<int> row_owner(w_.rows(), -1);
    for (std::size_t j = 0; j < m_; ++j) {
      if (skip_col_ == j) continue;
      std::vector<char> visited(w_.rows(), 0);
      if (!augment_from_column(j, row_owner, visited)) return false;
    }
    return true;
  }

  bool covers_must_rows() const {
    std::vector<int> col_owner(m_, -1);
    for (std::size_t i = 0; i < w_.rows(); ++i) {
      if (skip_row_ == i || !is_masked(w_(i, m_))) continue;
      std::vector<char> visited(m_, 0);
      if (!augment_from_row(i, col_owner, visited)) return false;
    }
    return true;
  }

  const Matrix& w_;
  std::size_t m_;
  mutable std::optional<std::size_t> skip_row_;
  mutable std::optional<std::size_t> skip_col_;
};

}  // namespace

SupportAnalysis analyze_support(const Matrix& w, std::size_t m) {
  if (w.cols() != m + 1) throw DimensionError("analyze_support: expected m+1 columns");
  SupportAnalysis out;
  out.usable.assign(w.size(), 0);
  const RowColumnGraph graph(w, m);
  out.feasible = graph.coverable(std::nullopt, std::nullopt);
  if (!out.feasible) return out;

  for (std::size_t i = 0; i < w.rows(); ++i) {
    for (std::size_t j = 0; j <= m; ++j) {
      if (is_masked(w(i, j))) continue;
      // Fixing row i to column j; the terminal column has no capacity limit.
      const bool ok = j < m ? graph.coverable(i, j) : graph.coverable(i, std::nullopt);
      out.usable[i * w.cols() + j] = ok ? 1 : 0;
      if (!ok) ++out.forced_zeros;
    }
  }
  return out;
}

Matrix prune_forced_zeros(const Matrix& w, std::size_t m) {
  const SupportAnalysis support = analyze_support(w, m);
  if (!support.feasible) throw MaskError("no feasible generation order under the masks");
  Matrix out = w;
  auto values = out.values();
  for (std::size_t k = 0; k < values.size(); ++k)
    if (!support.usable[k]) values[k] = kMasked;
  return out;
}

}  // namespace latent_order
