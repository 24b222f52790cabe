#include "pointopt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pointopt {

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::fabs(v));
  return m;
}

double Matrix::max_asymmetry() const {
  double m = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      m = std::max(m, std::fabs((*this)(i, j) - (*this)(j, i)));
  return m;
}

EigenDecomposition jacobi_eigen(const Matrix& input) {
  const std::size_t n = input.size();
  Matrix a = input;
  Matrix v(n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  EigenDecomposition out;
  out.vectors = Matrix(n);
  if (n == 0) return out;

  const double scale = std::max(a.max_abs(), 1e-300);
  const double tol = 1e-15 * scale;
  int sweeps = 0;
  for (; sweeps < 100; ++sweeps) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::fabs(a(p, q)));
    if (off <= tol) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) <= tol * 1e-2) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  out.sweeps = sweeps;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

static void check_symmetric(const Matrix& a) {
  if (a.empty()) throw std::invalid_argument("empty matrix");
  if (a.max_asymmetry() > 1e-12 * std::max(a.max_abs(), 1.0))
    throw std::invalid_argument("matrix is not symmetric within tolerance");
}

std::pair<double, std::vector<double>> min_eigenvalue_sym(const Matrix& a) {
  check_symmetric(a);
  EigenDecomposition e = jacobi_eigen(a);
  const std::size_t n = a.size();
  std::vector<double> vec(n);
  for (std::size_t i = 0; i < n; ++i) vec[i] = e.vectors(i, 0);
  return {e.values.front(), vec};
}

double max_eigenvalue_sym(const Matrix& a) {
  check_symmetric(a);
  return jacobi_eigen(a).values.back();
}

double determinant(Matrix a) {
  const std::size_t n = a.size();
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a(r, col)) > std::fabs(a(piv, col))) piv = r;
    if (a(piv, col) == 0.0) return 0.0;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(piv, c), a(col, c));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
    }
  }
  return det;
}

}  // namespace pointopt
