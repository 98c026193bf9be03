#include "reference.hpp"

#include <cmath>

namespace mdhp::reference {

UnconstrainedDesign optimal_unconstrained(const CMat& h, int ns) {
  const int r = static_cast<int>(std::min(h.rows(), h.cols()));
  require(ns >= 1 && ns <= r, ErrorCode::kDimensionMismatch,
          "optimal_unconstrained: ns must be in [1, min(rows, cols)]");
  auto sv = numerics::svd(h);
  if (sv.singular_values(ns - 1) <= 1e-10 * sv.singular_values(0))
    fail(ErrorCode::kRankDeficient, "optimal_unconstrained: channel rank below ns");

  UnconstrainedDesign d;
  d.precoder = sv.v.leftCols(ns);
  d.combiner = sv.u.leftCols(ns);
  d.top_singular_values = sv.singular_values.head(ns);
  numerics::phase_standardize_columns(d.precoder);
  numerics::phase_standardize_columns(d.combiner);
  return d;
}

double rate_upper_bound(const RVec& sv, double gamma, int ns) {
  require(ns >= 1 && sv.size() >= ns, ErrorCode::kDimensionMismatch,
          "rate_upper_bound: need at least ns singular values");
  require(gamma >= 0.0, ErrorCode::kInvalidArgument, "rate_upper_bound: gamma must be >= 0");
  double rate = 0.0;
  for (int i = 0; i < ns; ++i)
    rate += std::log2(1.0 + gamma / ns * sv(i) * sv(i));
  return rate;
}

PowerAllocation waterfill(const RVec& sv, double gamma, int ns) {
  require(ns >= 1 && sv.size() >= ns, ErrorCode::kDimensionMismatch,
          "waterfill: need at least ns singular values");
  require(gamma > 0.0, ErrorCode::kInvalidArgument, "waterfill: gamma must be > 0");
  for (int i = 1; i < ns; ++i)
    require(sv(i) <= sv(i - 1) * (1.0 + 1e-12) + 1e-300, ErrorCode::kInvalidArgument,
            "waterfill: singular values must be non-increasing");

  // Inverse-channel terms c_i = ns / (gamma * sv_i^2); p_i = mu - c_i on the
  // active set. Try the largest active set first; the first feasible one
  // satisfies the KKT conditions.
  RVec gains = RVec::Zero(ns);
  for (int k = ns; k >= 1; --k) {
    if (!(sv(k - 1) > 0.0)) continue;
    double csum = 0.0;
    for (int i = 0; i < k; ++i) csum += ns / (gamma * sv(i) * sv(i));
    const double mu = (ns + csum) / k;
    if (mu - ns / (gamma * sv(k - 1) * sv(k - 1)) > 0.0) {
      for (int i = 0; i < k; ++i)
        gains(i) = std::sqrt(mu - ns / (gamma * sv(i) * sv(i)));
      return {gains};
    }
  }
  fail(ErrorCode::kRankDeficient, "waterfill: all singular values are zero");
}

CMat mmse_combiner(const CMat& h, const CMat& f, double gamma, int ns) {
  require(h.cols() == f.rows(), ErrorCode::kDimensionMismatch,
          "mmse_combiner: channel/precoder dimensions inconsistent");
  require(f.cols() == ns, ErrorCode::kDimensionMismatch, "mmse_combiner: f must have ns columns");
  require(gamma >= 0.0, ErrorCode::kInvalidArgument, "mmse_combiner: gamma must be >= 0");

  // (I + c B B^H)^-1 B = B (I + c B^H B)^-1 keeps the inverse at ns x ns.
  const CMat b = h * f;
  const double c = gamma / ns;
  CMat small = c * (b.adjoint() * b);
  small += CMat::Identity(ns, ns);
  const CMat wt = small.llt().solve(b.adjoint());
  return (std::sqrt(gamma) / ns) * wt.adjoint();
}

}  // namespace mdhp::reference
