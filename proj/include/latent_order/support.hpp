#pragma once

#include <cstddef>
#include <vector>

#include "latent_order/matrix.hpp"

namespace latent_order {

// Structural analysis of a masked (n+m) x (m+1) logit pattern.
//
// An integer point of the order polytope is an assignment of every row to one
// finite column such that each column j < m receives exactly one row. A
// finite entry that no such assignment uses is zero at every feasible point,
// so it can be masked without changing the projection. Without that, the
// alternating normalization only approaches such entries at rate O(1/t).
struct SupportAnalysis {
  bool feasible = false;
  // usable[i * cols + j] != 0 iff some integer point uses entry (i, j).
  std::vector<char> usable;
  std::size_t forced_zeros = 0;  // finite entries that are not usable
};

SupportAnalysis analyze_support(const Matrix& masked_logits, std::size_t m);

// Copy of `masked_logits` with forced-zero entries set to -inf. Throws
// MaskError when no feasible order exists.
Matrix prune_forced_zeros(const Matrix& masked_logits, std::size_t m);

}  // namespace latent_order
