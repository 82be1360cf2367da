#include "dremnet/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace dremnet {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("Matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::minor(std::size_t r, std::size_t c) const {
  Matrix out(rows_ - 1, cols_ - 1);
  for (std::size_t i = 0, oi = 0; i < rows_; ++i) {
    if (i == r) continue;
    for (std::size_t j = 0, oj = 0; j < cols_; ++j) {
      if (j == c) continue;
      out(oi, oj++) = (*this)(i, j);
    }
    ++oi;
  }
  return out;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("Matrix product: shape mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("Matrix-vector product: shape mismatch");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

double max_abs(const Matrix& m) {
  double out = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (double v : m.row(i)) out = std::max(out, std::abs(v));
  return out;
}

namespace {

double det2(double a, double b, double c, double d) { return a * d - b * c; }

double det3(const Matrix& m) {
  return m(0, 0) * det2(m(1, 1), m(1, 2), m(2, 1), m(2, 2)) -
         m(0, 1) * det2(m(1, 0), m(1, 2), m(2, 0), m(2, 2)) +
         m(0, 2) * det2(m(1, 0), m(1, 1), m(2, 0), m(2, 1));
}

double det4(const Matrix& m) {
  // Laplace expansion along the first row using 2x2 minors of rows 2..3.
  const double s01 = det2(m(2, 0), m(2, 1), m(3, 0), m(3, 1));
  const double s02 = det2(m(2, 0), m(2, 2), m(3, 0), m(3, 2));
  const double s03 = det2(m(2, 0), m(2, 3), m(3, 0), m(3, 3));
  const double s12 = det2(m(2, 1), m(2, 2), m(3, 1), m(3, 2));
  const double s13 = det2(m(2, 1), m(2, 3), m(3, 1), m(3, 3));
  const double s23 = det2(m(2, 2), m(2, 3), m(3, 2), m(3, 3));
  const double c0 = m(1, 1) * s23 - m(1, 2) * s13 + m(1, 3) * s12;
  const double c1 = m(1, 0) * s23 - m(1, 2) * s03 + m(1, 3) * s02;
  const double c2 = m(1, 0) * s13 - m(1, 1) * s03 + m(1, 3) * s01;
  const double c3 = m(1, 0) * s12 - m(1, 1) * s02 + m(1, 2) * s01;
  return m(0, 0) * c0 - m(0, 1) * c1 + m(0, 2) * c2 - m(0, 3) * c3;
}

double bareiss_determinant(Matrix a) {
  const std::size_t n = a.rows();
  double sign = 1.0;
  double prev = 1.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0.0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0.0) ++p;
      if (p == n) return 0.0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      a(i, k) = 0.0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

}  // namespace

double determinant(const Matrix& m) {
  if (!m.square()) throw std::invalid_argument("determinant: matrix is not square");
  switch (m.rows()) {
    case 0:
      return 1.0;
    case 1:
      return m(0, 0);
    case 2:
      return det2(m(0, 0), m(0, 1), m(1, 0), m(1, 1));
    case 3:
      return det3(m);
    case 4:
      return det4(m);
    default:
      return bareiss_determinant(m);
  }
}

Matrix adjugate(const Matrix& m) {
  if (!m.square()) throw std::invalid_argument("adjugate: matrix is not square");
  const std::size_t n = m.rows();
  if (n == 0) return {};
  if (n == 1) return Matrix::identity(1);
  if (n == 2) return Matrix{{m(1, 1), -m(0, 1)}, {-m(1, 0), m(0, 0)}};
  Matrix adj(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double cofactor = determinant(m.minor(i, j));
      adj(j, i) = ((i + j) % 2 == 0) ? cofactor : -cofactor;
    }
  return adj;
}

}  // namespace dremnet
