#include "linalg.hpp"

#include <cmath>

namespace spcecon {

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat operator+(const Mat& a, const Mat& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), Errc::invalid_argument,
          "matrix dimension mismatch in +");
  Mat out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

Mat operator-(const Mat& a, const Mat& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), Errc::invalid_argument,
          "matrix dimension mismatch in -");
  Mat out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

Mat operator*(const Mat& a, const Mat& b) {
  require(a.cols() == b.rows(), Errc::invalid_argument, "matrix dimension mismatch in *");
  Mat out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

Mat scaled(const Mat& a, double c) {
  Mat out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) *= c;
  return out;
}

Mat transpose(const Mat& a) {
  Mat out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

Vec mul(const Mat& a, const Vec& x) {
  require(a.cols() == x.size(), Errc::invalid_argument, "matrix/vector dimension mismatch");
  Vec out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    out[i] = s;
  }
  return out;
}

bool is_symmetric(const Mat& a, double rel_tol) {
  if (!a.square()) return false;
  double scale = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) scale = std::max(scale, std::fabs(a(i, j)));
  if (scale == 0.0) return true;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (std::fabs(a(i, j) - a(j, i)) > rel_tol * scale) return false;
  return true;
}

Cholesky::Cholesky(const Mat& a) {
  require(a.square() && a.rows() >= 1, Errc::invalid_argument,
          "Cholesky requires a square matrix");
  const std::size_t n = a.rows();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::fabs(a(i, i)));
  const double pivot_tol = 1e-12 * max_diag;

  l_ = Mat(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l_(j, k) * l_(j, k);
    if (!(d >= pivot_tol) || pivot_tol == 0.0) {
      fail(Errc::singular_matrix, "covariance matrix is not positive definite");
    }
    const double ljj = std::sqrt(d);
    l_(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l_(i, k) * l_(j, k);
      l_(i, j) = s / ljj;
    }
  }
}

void Cholesky::solve_lower_inplace(Vec& b) const {
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l_(i, k) * b[k];
    b[i] = s / l_(i, i);
  }
}

Vec Cholesky::solve(const Vec& b) const {
  require(b.size() == dim(), Errc::invalid_argument, "solve dimension mismatch");
  Vec y = b;
  solve_lower_inplace(y);
  // back substitution with L'
  const std::size_t n = dim();
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l_(k, ii) * y[k];
    y[ii] = s / l_(ii, ii);
  }
  return y;
}

double Cholesky::quad_inv(const Vec& v) const {
  require(v.size() == dim(), Errc::invalid_argument, "quad_inv dimension mismatch");
  Vec y = v;
  solve_lower_inplace(y);
  return dot(y, y);
}

Vec Cholesky::mul_lower(const Vec& e) const {
  Vec out(dim(), 0.0);
  mul_lower_into(e, out);
  return out;
}

void Cholesky::mul_lower_into(const Vec& e, Vec& out) const {
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k <= i; ++k) s += l_(i, k) * e[k];
    out[i] = s;
  }
}

Mat Cholesky::inverse() const {
  const std::size_t n = dim();
  Mat out(n, n);
  Vec e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e.assign(n, 0.0);
    e[j] = 1.0;
    Vec col = solve(e);
    for (std::size_t i = 0; i < n; ++i) out(i, j) = col[i];
  }
  return out;
}

}  // namespace spcecon
