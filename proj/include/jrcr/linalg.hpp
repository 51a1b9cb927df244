#pragma once

#include <cstddef>
#include <vector>

namespace jrcr {

// Small dense row-major matrix. Everything in this project is at most a few
// dozen rows, so no BLAS; plain loops are plenty.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  Matrix& operator+=(const Matrix& o);
  Matrix& operator*=(double c);

  std::vector<double> operator*(const std::vector<double>& x) const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

// LU solve with partial pivoting. Throws NumericalError on a (near-)singular
// system; the message includes the offending pivot.
std::vector<double> solve(Matrix a, std::vector<double> b);

Matrix inverse(const Matrix& a);

// Eigenvalues of a symmetric matrix (Jacobi sweeps), ascending.
std::vector<double> sym_eigenvalues(Matrix a);

double dot(const std::vector<double>& a, const std::vector<double>& b);

// x' A x
double quad_form(const Matrix& a, const std::vector<double>& x);

}  // namespace jrcr
