#pragma once

#include "common.hpp"

namespace mdhp::numerics {

/// Thin SVD a = u * diag(singular_values) * v^H with r = min(rows, cols).
struct SvdResult {
  CMat u;               // m x r, orthonormal columns
  RVec singular_values; // descending, >= 0
  CMat v;               // n x r, orthonormal columns
};

SvdResult svd(const CMat& a);

double frobenius_norm(const CMat& a);

/// Least squares: returns X minimizing ||b - a*X||_F via the normal
/// equations. Requires a to have full column rank; guarded at condition
/// number 1e12 on a^H a.
CMat ls_solve(const CMat& a, const CMat& b);

/// log2 determinant of a Hermitian positive-definite matrix. The input is
/// symmetrized first; it must satisfy ||a - a^H||_F <= 1e-8 * ||a||_F.
double logdet2_hpd(const CMat& a);

/// Box-constrained least squares over a real unknown row vector d:
///   minimize ||target - d * map||_2^2  subject to |d_i| <= bound.
struct BoxLsProblem {
  CRowVec target;  // q, 1 x n_s
  CMat map;        // G, m x n_s (one row per unknown)
  double bound = 0.0;
};

RVec solve_box_ls(const BoxLsProblem& p);

/// Real quadratic core of solve_box_ls:
///   minimize x^T a x - 2 b^T x  subject to |x_i| <= bound,
/// with a symmetric positive semidefinite. Projected gradient with exact
/// line search, accelerated by safeguarded Newton steps on the free set;
/// runs to KKT tolerance 1e-9 or 10000 iterations. Descent is monotone
/// from x = 0, so the returned objective never exceeds the one at zero.
RVec solve_box_qp(const RMat& a, const RVec& b, double bound);

/// Rotates each column so its first non-negligible entry is real positive.
/// Resolves the per-column phase ambiguity of singular vectors so that
/// downstream results are deterministic.
void phase_standardize_columns(CMat& m);

}  // namespace mdhp::numerics
