#include "decomposer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mdhp::decomposer {

CMat PhaseMatrix::realize() const {
  CMat out(phases.rows(), phases.cols());
  for (Eigen::Index c = 0; c < phases.cols(); ++c)
    for (Eigen::Index r = 0; r < phases.rows(); ++r)
      out(r, c) = std::polar(modulus, phases(r, c));
  return out;
}

void DecompositionSettings::validate() const {
  require(convergence_tol > 0.0, ErrorCode::kInvalidArgument, "settings: convergence_tol must be > 0");
  require(shrink_factor > 0.0 && shrink_factor < 1.0, ErrorCode::kInvalidArgument,
          "settings: shrink_factor must be in (0, 1)");
  require(growth_factor > 1.0, ErrorCode::kInvalidArgument, "settings: growth_factor must be > 1");
  require(increment_min > 0.0 && increment_min <= increment_max, ErrorCode::kInvalidArgument,
          "settings: increment bounds must satisfy 0 < min <= max");
  require(initial_increment >= increment_min && initial_increment <= increment_max,
          ErrorCode::kInvalidArgument, "settings: initial_increment outside increment bounds");
  require(proximity_multiplier >= 0.0, ErrorCode::kInvalidArgument,
          "settings: proximity_multiplier must be >= 0");
  require(max_iterations >= 1, ErrorCode::kInvalidArgument, "settings: max_iterations must be >= 1");
}

double error_measure(const CMat& target, const HybridProcessor& hp) {
  require(hp.rf.rows() == target.rows() && hp.baseband.cols() == target.cols() &&
              hp.rf.cols() == hp.baseband.rows(),
          ErrorCode::kDimensionMismatch, "error_measure: inconsistent dimensions");
  const double tnorm = target.norm();
  if (!(tnorm > 0.0)) fail(ErrorCode::kZeroTarget, "error_measure: target has zero norm");
  return (target - hp.rf.realize() * hp.baseband).norm() / tnorm;
}

PhaseMatrix init_rf(const CMat& target, int m, double modulus, Rng& rng) {
  const int n = static_cast<int>(target.rows());
  const int ns = static_cast<int>(target.cols());
  require(ns >= 1, ErrorCode::kDimensionMismatch, "init_rf: target must have columns");
  require(m >= ns && m <= n, ErrorCode::kDimensionMismatch, "init_rf: need ns <= m <= rows");
  require(modulus > 0.0, ErrorCode::kInvalidArgument, "init_rf: modulus must be > 0");

  auto sv = numerics::svd(target);
  if (sv.singular_values(ns - 1) <= 1e-10 * sv.singular_values(0))
    fail(ErrorCode::kRankDeficient, "init_rf: target is rank deficient");

  CMat us = sv.u * sv.singular_values.asDiagonal();
  numerics::phase_standardize_columns(us);

  RMat phases(n, m);
  for (int c = 0; c < ns; ++c)
    for (int r = 0; r < n; ++r) phases(r, c) = wrap_phase(std::arg(us(r, c)));
  for (int c = ns; c < m; ++c)
    for (int r = 0; r < n; ++r) phases(r, c) = rng.uniform(0.0, kTwoPi);
  return {std::move(phases), modulus};
}

CMat baseband_update(const PhaseMatrix& rf, const CMat& target) {
  return numerics::ls_solve(rf.realize(), target);
}

PhaseMatrix rf_update(const PhaseMatrix& rf, const CMat& fb, const CMat& target, double bound) {
  const int n = rf.rows();
  const int m = rf.cols();
  require(fb.rows() == m && fb.cols() == target.cols() && target.rows() == n,
          ErrorCode::kDimensionMismatch, "rf_update: inconsistent dimensions");
  require(bound > 0.0, ErrorCode::kInvalidArgument, "rf_update: bound must be > 0");

  const double mod = rf.modulus;
  const CMat e = [&] {
    CMat u(n, m);
    for (int c = 0; c < m; ++c)
      for (int r = 0; r < n; ++r) u(r, c) = std::polar(1.0, rf.phases(r, c));
    return u;
  }();

  // Row p solves min ||q_p - d * G_p||^2 with G_p = j*mod*diag(e_p)*fb.
  // In real form the quadratic data are
  //   A_p(u,v) = mod^2 * Re(e_pu * C(u,v) * conj(e_pv)),   C = fb fb^H,
  //   b_p(u)   = -mod * Im(e_pu * (fb Q^H)(u,p)),          Q = target - mod*E*fb,
  // so C and fb*Q^H are shared across all rows.
  const CMat q = target - mod * (e * fb);
  const CMat c = fb * fb.adjoint();
  const CMat fq = fb * q.adjoint();

  RMat new_phases(n, m);
  RMat a(m, m);
  RVec b(m);
  for (int p = 0; p < n; ++p) {
    for (int u = 0; u < m; ++u) {
      const Complex eu = e(p, u);
      b(u) = -mod * std::imag(eu * fq(u, p));
      for (int v = 0; v < m; ++v)
        a(u, v) = mod * mod * std::real(eu * c(u, v) * std::conj(e(p, v)));
    }
    const RVec delta = numerics::solve_box_qp(a, b, bound);
    for (int u = 0; u < m; ++u) new_phases(p, u) = wrap_phase(rf.phases(p, u) + delta(u));
  }
  return {std::move(new_phases), mod};
}

double adapt_threshold(double eps_prev, double eps_prev2, double delta_prev,
                       const DecompositionSettings& s) {
  require(s.threshold_mode == ThresholdMode::kAdaptive, ErrorCode::kInvalidArgument,
          "adapt_threshold: settings must use the adaptive mode");
  const bool far_apart = std::abs(eps_prev - eps_prev2) > s.proximity_multiplier * s.convergence_tol;
  const bool decreasing = eps_prev < eps_prev2;
  const double next = (far_apart && decreasing) ? delta_prev * s.growth_factor
                                                : delta_prev * s.shrink_factor;
  return std::clamp(next, s.increment_min, s.increment_max);
}

std::pair<HybridProcessor, DecompositionTrace> decompose(const CMat& target, int m, double modulus,
                                                         const DecompositionSettings& s, Rng& rng,
                                                         const IterationObserver& observer) {
  s.validate();
  require(target.allFinite(), ErrorCode::kInvalidArgument, "decompose: target has non-finite entries");

  PhaseMatrix rf = init_rf(target, m, modulus, rng);
  CMat fb = baseband_update(rf, target);

  DecompositionTrace trace;
  double eps_prev = error_measure(target, {rf, fb});
  double eps_prev2 = std::numeric_limits<double>::infinity();
  trace.error_history.push_back(eps_prev);

  double delta = s.initial_increment;
  for (int k = 1; k <= s.max_iterations; ++k) {
    if (k > 1 && s.threshold_mode == ThresholdMode::kAdaptive)
      delta = adapt_threshold(eps_prev, eps_prev2, delta, s);

    PhaseMatrix next = rf_update(rf, fb, target, delta);
    if (observer) observer(k, rf, next);
    rf = std::move(next);
    fb = baseband_update(rf, target);

    const double eps = error_measure(target, {rf, fb});
    trace.threshold_history.push_back(delta);
    trace.error_history.push_back(eps);
    trace.iterations = k;
    if (std::abs(eps - eps_prev) <= s.convergence_tol) {
      trace.converged = true;
      eps_prev = eps;
      break;
    }
    eps_prev2 = eps_prev;
    eps_prev = eps;
  }
  trace.final_error = trace.error_history.back();

  if (s.normalize_output) {
    const double pnorm = (rf.realize() * fb).norm();
    require(pnorm > 0.0, ErrorCode::kZeroTarget, "decompose: zero product cannot be normalized");
    fb *= std::sqrt(static_cast<double>(target.cols())) / pnorm;
  }
  return {{std::move(rf), std::move(fb)}, std::move(trace)};
}

HybridProcessor decompose_waterfilled(const CMat& target_nonzero, int zero_cols, int m,
                                      double modulus, const DecompositionSettings& s, Rng& rng) {
  require(zero_cols >= 0, ErrorCode::kInvalidArgument, "decompose_waterfilled: zero_cols must be >= 0");
  DecompositionSettings inner = s;
  inner.normalize_output = false;
  auto [hp, trace] = decompose(target_nonzero, m, modulus, inner, rng);

  const int ns_total = static_cast<int>(target_nonzero.cols()) + zero_cols;
  CMat bb(m, ns_total);
  bb.leftCols(target_nonzero.cols()) = hp.baseband;
  bb.rightCols(zero_cols).setZero();
  if (s.normalize_output) {
    const double pnorm = (hp.rf.realize() * bb).norm();
    require(pnorm > 0.0, ErrorCode::kZeroTarget, "decompose_waterfilled: zero product");
    bb *= std::sqrt(static_cast<double>(ns_total)) / pnorm;
  }
  return {std::move(hp.rf), std::move(bb)};
}

PhaseMatrix quantize_phases(const PhaseMatrix& rf, int l_bits) {
  require(l_bits >= 1 && l_bits <= 52, ErrorCode::kInvalidArgument,
          "quantize_phases: l_bits must be in [1, 52]");
  const double levels = std::ldexp(1.0, l_bits);
  const double step = kTwoPi / levels;
  PhaseMatrix out = rf;
  for (Eigen::Index c = 0; c < out.phases.cols(); ++c) {
    for (Eigen::Index r = 0; r < out.phases.rows(); ++r) {
      double idx = std::round(out.phases(r, c) / step);
      if (idx >= levels) idx = 0.0;  // wrap: phases near 2*pi round to 0
      out.phases(r, c) = idx * step;
    }
  }
  return out;
}

}  // namespace mdhp::decomposer
