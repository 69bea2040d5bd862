#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace latent_order {

// Masked logits are stored as -inf. exp(-inf) == 0 and -inf + finite == -inf,
// so log-space sweeps stay total without special cases.
inline constexpr double kMasked = -std::numeric_limits<double>::infinity();

inline bool is_masked(double x) { return x == kMasked; }

// Dense row-major matrix of doubles. Sizes in this library are tiny
// ((n+m) x (m+1) with n, m in the tens at most), so no expression templates.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Frobenius inner product; entries where either side is zero contribute nothing,
// which keeps <W, O> finite when W is -inf on entries where O is exactly 0.
double inner(const Matrix& a, const Matrix& b);

double max_abs_diff(const Matrix& a, const Matrix& b);

Matrix multiply(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

// Rows [first, first + count) as a new matrix.
Matrix row_block(const Matrix& a, std::size_t first, std::size_t count);

// Columns [0, count) as a new matrix.
Matrix leading_columns(const Matrix& a, std::size_t count);

// Stacks `top` over `bottom`; column counts must agree.
Matrix vstack(const Matrix& top, const Matrix& bottom);

}  // namespace latent_order
