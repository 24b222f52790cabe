#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace pointopt {

/// Dense row-major square matrix, sized for the secular problems (N <= 4096).
class Matrix {
public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  const std::vector<double>& data() const { return a_; }

  double max_abs() const;
  double max_asymmetry() const;

private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column k pairs with values[k]
  int sweeps = 0;
};

/// Cyclic Jacobi diagonalization of a symmetric matrix.
EigenDecomposition jacobi_eigen(const Matrix& a);

/// Smallest eigenvalue and a unit eigenvector; throws std::invalid_argument
/// if the input is asymmetric beyond 1e-12 * max|entry|.
std::pair<double, std::vector<double>> min_eigenvalue_sym(const Matrix& a);

double max_eigenvalue_sym(const Matrix& a);

/// Determinant via LU with partial pivoting (destroys a local copy).
double determinant(Matrix a);

}  // namespace pointopt
