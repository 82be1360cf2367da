#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace dremnet {

using Vector = std::vector<double>;

/// Dense row-major matrix sized for the small square blocks the DREM
/// transform works with (d is typically 1..6).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  /// Copy of this matrix with row `r` and column `c` removed.
  Matrix minor(std::size_t r, std::size_t c) const;
  Matrix transposed() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double max_abs(const Matrix& m);

// Determinant and adjugate. Sizes up to kCofactorLimit use closed-form
// cofactor expansion, which is exact whenever every intermediate product is
// representable (e.g. small integer entries). Larger matrices go through
// fraction-free (Bareiss) elimination with row pivoting.
inline constexpr std::size_t kCofactorLimit = 4;

double determinant(const Matrix& m);
Matrix adjugate(const Matrix& m);

}  // namespace dremnet
