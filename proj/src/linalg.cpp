#include "jrcr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "jrcr/errors.hpp"

namespace jrcr {

Matrix& Matrix::operator+=(const Matrix& o) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double c) {
  for (auto& v : data_) v *= c;
  return *this;
}

std::vector<double> Matrix::operator*(const std::vector<double>& x) const {
  std::vector<double> y(rows_, 0.0);
  for (int r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (int c = 0; c < cols_; ++c) acc += (*this)(r, c) * x[c];
    y[r] = acc;
  }
  return y;
}

std::vector<double> solve(Matrix a, std::vector<double> b) {
  const int n = a.rows();
  if (n != a.cols() || static_cast<int>(b.size()) != n)
    throw NumericalError("solve: dimension mismatch");
  std::vector<int> piv(n);
  for (int i = 0; i < n; ++i) piv[i] = i;

  double max_abs = 0.0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) max_abs = std::max(max_abs, std::abs(a(r, c)));
  const double tiny = (max_abs > 0 ? max_abs : 1.0) * 1e-14;

  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int r = k + 1; r < n; ++r)
      if (std::abs(a(r, k)) > std::abs(a(p, k))) p = r;
    if (std::abs(a(p, k)) <= tiny)
      throw NumericalError("solve: singular system (pivot " + std::to_string(a(p, k)) +
                           " at column " + std::to_string(k) + ")");
    if (p != k) {
      for (int c = 0; c < n; ++c) std::swap(a(p, c), a(k, c));
      std::swap(b[p], b[k]);
    }
    for (int r = k + 1; r < n; ++r) {
      const double m = a(r, k) / a(k, k);
      a(r, k) = 0.0;
      for (int c = k + 1; c < n; ++c) a(r, c) -= m * a(k, c);
      b[r] -= m * b[k];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= a(r, c) * b[c];
    b[r] = acc / a(r, r);
  }
  return b;
}

Matrix inverse(const Matrix& a) {
  const int n = a.rows();
  Matrix inv(n, n);
  for (int c = 0; c < n; ++c) {
    std::vector<double> e(n, 0.0);
    e[c] = 1.0;
    const auto col = solve(a, e);
    for (int r = 0; r < n; ++r) inv(r, c) = col[r];
  }
  return inv;
}

std::vector<double> sym_eigenvalues(Matrix a) {
  const int n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double quad_form(const Matrix& a, const std::vector<double>& x) {
  double acc = 0.0;
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) acc += x[r] * a(r, c) * x[c];
  return acc;
}

}  // namespace jrcr
