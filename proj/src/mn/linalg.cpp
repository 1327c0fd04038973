#include "mn/linalg.hpp"

#include <cmath>

#include "mn/error.hpp"

namespace mn {

namespace {

constexpr int kDirectNormLimit = 64;

double power_iteration_norm(const Matrix& a) {
  const Eigen::Index n = a.cols();
  Vector v = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  double sigma_prev = 0.0;
  for (int iter = 0; iter < 10000; ++iter) {
    Vector w = a * v;
    const double sigma = w.norm();
    if (sigma == 0.0) return 0.0;
    Vector u = a.transpose() * w;
    const double scale = u.norm();
    if (scale == 0.0) return sigma;
    v = u / scale;
    if (iter > 0 && std::abs(sigma - sigma_prev) <= 1e-10 * std::max(sigma, 1.0))
      return sigma;
    sigma_prev = sigma;
  }
  fail(ErrorCode::numeric, "operator_norm: power iteration did not converge");
}

Eigen::PartialPivLU<Matrix> checked_lu(const Matrix& a, double pivot_rtol) {
  if (a.rows() != a.cols() || a.rows() == 0)
    fail(ErrorCode::invalid_argument, "checked_lu: matrix must be square and non-empty");
  if (!a.allFinite()) fail(ErrorCode::numeric, "checked_lu: non-finite entries");
  Eigen::PartialPivLU<Matrix> lu(a);
  const double inf_norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (min_pivot < pivot_rtol * inf_norm || inf_norm == 0.0)
    fail(ErrorCode::singular, "matrix is singular to working precision");
  return lu;
}

}  // namespace

double operator_norm(const Matrix& a) {
  if (a.size() == 0) fail(ErrorCode::invalid_argument, "operator_norm: empty matrix");
  if (!a.allFinite()) fail(ErrorCode::numeric, "operator_norm: non-finite entries");
  if (a.rows() <= kDirectNormLimit && a.cols() <= kDirectNormLimit) {
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
  }
  return power_iteration_norm(a);
}

double banach_inverse_bound(const Matrix& b) {
  if (b.rows() != b.cols())
    fail(ErrorCode::invalid_argument, "banach_inverse_bound: matrix must be square");
  const Matrix deviation = b - Matrix::Identity(b.rows(), b.cols());
  const double gap = operator_norm(deviation);
  if (!(gap < 1.0))
    fail(ErrorCode::singular, "banach_inverse_bound: ||B - I|| >= 1");
  return 1.0 / (1.0 - gap);
}

Vector solve_checked(const Matrix& a, const Vector& rhs, double pivot_rtol) {
  return checked_lu(a, pivot_rtol).solve(rhs);
}

Matrix solve_checked(const Matrix& a, const Matrix& rhs, double pivot_rtol) {
  return checked_lu(a, pivot_rtol).solve(rhs);
}

Matrix inverse_checked(const Matrix& a, double pivot_rtol) {
  return checked_lu(a, pivot_rtol).inverse();
}

}  // namespace mn
