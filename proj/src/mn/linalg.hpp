#pragma once

#include <Eigen/Dense>

namespace mn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Spectral norm (largest singular value).  Direct decomposition up to 64x64,
/// power iteration on A^T A with tolerance 1e-10 beyond that.
double operator_norm(const Matrix& a);

/// 1 / (1 - ||B - I||), an upper bound on ||B^{-1}||; requires ||B - I|| < 1.
double banach_inverse_bound(const Matrix& b);

/// LU solve with partial pivoting; throws when the smallest pivot falls below
/// pivot_rtol times the infinity norm of the matrix.
Vector solve_checked(const Matrix& a, const Vector& rhs, double pivot_rtol = 1e-14);
Matrix solve_checked(const Matrix& a, const Matrix& rhs, double pivot_rtol = 1e-14);
Matrix inverse_checked(const Matrix& a, double pivot_rtol = 1e-14);

}  // namespace mn
