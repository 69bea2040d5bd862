#include "latent_order/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

#include "latent_order/error.hpp"
#include "latent_order/order_ops.hpp"

namespace latent_order {

namespace {

void check_rows(const Matrix& S) {
  if (S.rows() == 0) throw ValidationError("segmentation has no nodes");
  if (S.cols() != S.rows() + 1) throw ValidationError("segmentation must be m x (m+1)");
  for (std::size_t i = 0; i < S.rows(); ++i) {
    double sum = 0.0;
    for (double x : S.row(i)) sum += x;
    if (std::abs(sum - 1.0) > kSumTolerance)
      throw ValidationError("segmentation row " + std::to_string(i) + " sums to " +
                            std::to_string(sum));
  }
}

std::set<std::pair<int, int>> pairs_of(const Segmentation& s) {
  std::set<std::pair<int, int>> out;
  for (const auto& g : s)
    for (std::size_t a = 0; a < g.size(); ++a)
      for (std::size_t b = a + 1; b < g.size(); ++b)
        out.insert(std::minmax(g[a], g[b]));
  return out;
}

std::vector<int> members(const Segmentation& s, const char* which) {
  std::vector<int> all;
  for (const auto& g : s) all.insert(all.end(), g.begin(), g.end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw ValidationError(std::string(which) + ": a node appears in two subgraphs");
  return all;
}

}  // namespace

double segmentation_density(const Matrix& S) {
  check_rows(S);
  const std::size_t m = S.rows();
  double links = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) links += S(i, j);
  return links / static_cast<double>(m);
}

Segmentation segmentation_from_S(const Matrix& S) {
  check_rows(S);
  const std::size_t m = S.rows();
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (S(i, j) > 0.5) parent[find(i)] = find(j);
  std::vector<std::vector<int>> by_root(m);
  for (std::size_t i = 0; i < m; ++i) by_root[find(i)].push_back(static_cast<int>(i));
  Segmentation out;
  for (auto& g : by_root)
    if (!g.empty()) out.push_back(std::move(g));
  std::sort(out.begin(), out.end());
  return out;
}

Segmentation segmentation_from_order(const GenerationOrder& order) {
  Segmentation out;
  for (const auto& sub : extract_segmentation(order)) {
    auto g = sub.chain;
    std::sort(g.begin(), g.end());
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double same_subgraph_f1(const Segmentation& a, const Segmentation& b) {
  if (members(a, "seg_a") != members(b, "seg_b"))
    throw ValidationError("segmentations cover different node sets");
  const auto pa = pairs_of(a);
  const auto pb = pairs_of(b);
  if (pa.empty() && pb.empty()) return 1.0;
  if (pa.empty() || pb.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto& p : pa) common += pb.count(p);
  return 2.0 * static_cast<double>(common) / static_cast<double>(pa.size() + pb.size());
}

}  // namespace latent_order
