#include "numerics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mdhp::numerics {

namespace {

constexpr double kConditionGuard = 1e12;

void check_finite(const CMat& a, const char* who) {
  if (!a.allFinite()) fail(ErrorCode::kInvalidArgument, std::string(who) + ": non-finite entries");
}

double box_objective(const RMat& a, const RVec& b, const RVec& x) {
  return x.dot(a * x) - 2.0 * b.dot(x);
}

}  // namespace

SvdResult svd(const CMat& a) {
  require(a.rows() > 0 && a.cols() > 0, ErrorCode::kInvalidArgument, "svd: empty matrix");
  check_finite(a, "svd");
  Eigen::JacobiSVD<CMat> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success)
    fail(ErrorCode::kSvdFailure, "svd: factorization did not converge");
  return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

double frobenius_norm(const CMat& a) {
  return a.norm();
}

CMat ls_solve(const CMat& a, const CMat& b) {
  require(a.rows() == b.rows(), ErrorCode::kDimensionMismatch, "ls_solve: row counts differ");
  require(a.rows() >= a.cols() && a.cols() > 0, ErrorCode::kDimensionMismatch,
          "ls_solve: need rows >= cols >= 1");
  check_finite(a, "ls_solve");
  check_finite(b, "ls_solve");

  const CMat gram = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<CMat> es(gram, Eigen::EigenvaluesOnly);
  const double lam_min = es.eigenvalues()(0);
  const double lam_max = es.eigenvalues()(es.eigenvalues().size() - 1);
  if (!(lam_max > 0.0) || lam_min <= lam_max / kConditionGuard)
    fail(ErrorCode::kRankDeficient, "ls_solve: normal equations numerically singular");

  return gram.llt().solve(a.adjoint() * b);
}

double logdet2_hpd(const CMat& a) {
  require(a.rows() == a.cols() && a.rows() > 0, ErrorCode::kDimensionMismatch,
          "logdet2_hpd: matrix must be square");
  check_finite(a, "logdet2_hpd");
  const double fn = a.norm();
  if ((a - a.adjoint()).norm() > 1e-8 * fn)
    fail(ErrorCode::kNotHermitian, "logdet2_hpd: input is not Hermitian within tolerance");

  const CMat h = 0.5 * (a + a.adjoint());
  Eigen::LLT<CMat> llt(h);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::kNotPositiveDefinite, "logdet2_hpd: matrix is not positive definite");

  // |a| = prod L_ii^2 with real positive Cholesky pivots.
  double acc = 0.0;
  const auto& packed = llt.matrixLLT();
  for (Eigen::Index i = 0; i < packed.rows(); ++i)
    acc += std::log2(std::real(packed(i, i)));
  return 2.0 * acc;
}

RVec solve_box_ls(const BoxLsProblem& p) {
  require(p.bound > 0.0, ErrorCode::kInvalidArgument, "solve_box_ls: bound must be > 0");
  require(p.map.cols() == p.target.cols(), ErrorCode::kDimensionMismatch,
          "solve_box_ls: map columns must match target length");
  // Real embedding: ||q - d*G||^2 = d^T Re(G G^H) d - 2 Re(G q^H)^T d + ||q||^2.
  const RMat a = (p.map * p.map.adjoint()).real();
  const RVec b = (p.map * p.target.adjoint()).real();
  return solve_box_qp(a, b, p.bound);
}

RVec solve_box_qp(const RMat& a, const RVec& b, double bound) {
  require(a.rows() == a.cols() && a.rows() == b.size(), ErrorCode::kDimensionMismatch,
          "solve_box_qp: inconsistent dimensions");
  require(bound > 0.0, ErrorCode::kInvalidArgument, "solve_box_qp: bound must be > 0");

  const int m = static_cast<int>(b.size());
  RVec x = RVec::Zero(m);
  if (b.isZero(0.0)) return x;  // gradient vanishes at the origin

  const double gtol = 1e-9 * std::max(1.0, 2.0 * b.cwiseAbs().maxCoeff());
  const int max_iterations = 10000;

  double fx = 0.0;  // objective at x = 0
  RVec g(m), d(m), trial(m);

  for (int it = 0; it < max_iterations; ++it) {
    g = 2.0 * (a * x - b);

    // Projected KKT residual: interior coordinates need a vanishing
    // gradient, bound coordinates a gradient pushing outward.
    double kkt = 0.0;
    for (int i = 0; i < m; ++i) {
      if (x(i) >= bound)
        kkt = std::max(kkt, std::max(0.0, g(i)));
      else if (x(i) <= -bound)
        kkt = std::max(kkt, std::max(0.0, -g(i)));
      else
        kkt = std::max(kkt, std::abs(g(i)));
    }
    if (kkt <= gtol) break;

    bool moved = false;

    // Newton step on the free set, clipped to the box. Accepted only if it
    // decreases the objective; otherwise fall back to projected gradient.
    {
      std::vector<int> free_set;
      free_set.reserve(m);
      for (int i = 0; i < m; ++i) {
        const bool at_upper = x(i) >= bound;
        const bool at_lower = x(i) <= -bound;
        if ((!at_upper && !at_lower) || (at_upper && g(i) > 0.0) || (at_lower && g(i) < 0.0))
          free_set.push_back(i);
      }
      const int nf = static_cast<int>(free_set.size());
      if (nf > 0) {
        RMat aff(nf, nf);
        RVec rhs(nf);
        for (int r = 0; r < nf; ++r) {
          rhs(r) = -0.5 * g(free_set[r]);
          for (int c = 0; c < nf; ++c) aff(r, c) = a(free_set[r], free_set[c]);
        }
        Eigen::LDLT<RMat> ldlt(aff);
        if (ldlt.info() == Eigen::Success) {
          const RVec dn = ldlt.solve(rhs);
          if (dn.allFinite()) {
            double t = 1.0;
            for (int bt = 0; bt < 4 && !moved; ++bt) {
              trial = x;
              for (int r = 0; r < nf; ++r) trial(free_set[r]) += t * dn(r);
              trial = trial.cwiseMax(-bound).cwiseMin(bound);
              const double ft = box_objective(a, b, trial);
              if (ft < fx) {
                x = trial;
                fx = ft;
                moved = true;
              }
              t *= 0.5;
            }
          }
        }
      }
    }

    if (!moved) {
      // Projected gradient with the exact minimizing step of the quadratic
      // along -g, backtracked after projection until the objective drops.
      d = -g;
      const double gg = g.squaredNorm();
      const double curv = d.dot(a * d);
      double t = curv > 1e-300 * gg ? gg / (2.0 * curv)
                                    : 2.0 * bound / std::sqrt(gg) * m;
      for (int bt = 0; bt < 60; ++bt) {
        trial = (x + t * d).cwiseMax(-bound).cwiseMin(bound);
        const double ft = box_objective(a, b, trial);
        if (ft < fx && (trial - x).squaredNorm() > 0.0) {
          x = trial;
          fx = ft;
          moved = true;
          break;
        }
        t *= 0.5;
      }
      if (!moved) break;  // no further progress representable in double
    }
  }
  return x;
}

void phase_standardize_columns(CMat& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const double cnorm = m.col(c).norm();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const double mag = std::abs(m(r, c));
      if (mag > 1e-12 * cnorm && mag > 0.0) {
        m.col(c) *= std::conj(m(r, c)) / mag;
        break;
      }
    }
  }
}

}  // namespace mdhp::numerics
