#pragma once

#include <cstddef>
#include <vector>

#include "error.hpp"

namespace spcecon {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);

// Dense row-major matrix. Everything here is small (q x q with q rarely
// above a handful), so no blocking or fancy storage.
class Mat {
public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Mat identity(std::size_t n);

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const Mat&, const Mat&) = default;

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat operator*(const Mat& a, const Mat& b);
Mat scaled(const Mat& a, double c);
Mat transpose(const Mat& a);
Vec mul(const Mat& a, const Vec& x);
bool is_symmetric(const Mat& a, double rel_tol = 1e-12);

// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
// A pivot below 1e-12 times the largest diagonal entry of the input is
// treated as a singularity.
class Cholesky {
public:
  explicit Cholesky(const Mat& a);

  const Mat& lower() const { return l_; }
  std::size_t dim() const { return l_.rows(); }

  void solve_lower_inplace(Vec& b) const;  // L y = b
  Vec solve(const Vec& b) const;           // A x = b
  double quad_inv(const Vec& v) const;     // v' A^{-1} v
  Vec mul_lower(const Vec& e) const;       // L e
  void mul_lower_into(const Vec& e, Vec& out) const;
  Mat inverse() const;

private:
  Mat l_;
};

}  // namespace spcecon
