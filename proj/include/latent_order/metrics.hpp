#pragma once

#include <vector>

#include "latent_order/core.hpp"
#include "latent_order/matrix.hpp"

namespace latent_order {

// Node groups; each group is one subgraph.
using Segmentation = std::vector<std::vector<int>>;

// sum_{i, j<m} S_ij / m. Throws ValidationError for m = 0 or bad rows.
double segmentation_density(const Matrix& S);

// Groups linked by S_ij = 1 (j < m), each sorted, ordered by smallest member.
Segmentation segmentation_from_S(const Matrix& S);
Segmentation segmentation_from_order(const GenerationOrder& order);

// F1 of the unordered same-group node pairs of `a` against those of `b`.
// 1.0 when both pair sets are empty, 0.0 when exactly one is. Throws
// ValidationError unless both partition the same node set.
double same_subgraph_f1(const Segmentation& a, const Segmentation& b);

}  // namespace latent_order
