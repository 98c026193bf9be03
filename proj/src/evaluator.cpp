#include "evaluator.hpp"

#include <cmath>

namespace mdhp::evaluator {

double spectral_efficiency(const CMat& h, const LinkDesign& d) {
  const CMat f = d.precoder.rf.realize() * d.precoder.baseband;
  const CMat w = d.combiner.rf.realize() * d.combiner.baseband;
  require(f.rows() == h.cols() && w.rows() == h.rows(), ErrorCode::kDimensionMismatch,
          "spectral_efficiency: processor dimensions do not match the channel");
  require(f.cols() == d.ns && w.cols() == d.ns, ErrorCode::kDimensionMismatch,
          "spectral_efficiency: processors must have ns columns");
  require(d.gamma >= 0.0, ErrorCode::kInvalidArgument, "spectral_efficiency: gamma must be >= 0");

  const CMat rn = w.adjoint() * w;  // sigma^2 = 1
  Eigen::LLT<CMat> llt(rn);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::kSingularNoiseCovariance,
         "spectral_efficiency: combiner noise covariance is singular");

  const CMat ht = w.adjoint() * h * f;
  const CMat s = llt.matrixL().solve(ht);  // L^-1 Ht
  CMat arg = (d.gamma / d.ns) * (s * s.adjoint());
  arg += CMat::Identity(d.ns, d.ns);
  return numerics::logdet2_hpd(arg);
}

double mutual_information(const CMat& h, const CMat& f, double gamma, int ns) {
  require(h.cols() == f.rows(), ErrorCode::kDimensionMismatch,
          "mutual_information: dimensions inconsistent");
  require(gamma >= 0.0 && ns >= 1, ErrorCode::kInvalidArgument,
          "mutual_information: need gamma >= 0 and ns >= 1");
  const CMat b = h * f;
  CMat arg = (gamma / ns) * (b.adjoint() * b);
  arg += CMat::Identity(b.cols(), b.cols());
  return numerics::logdet2_hpd(arg);
}

double mutual_information_approx(const RVec& sv1, const CMat& v1, const CMat& f, double gamma,
                                 int ns) {
  require(v1.rows() == f.rows() && v1.cols() == ns && f.cols() == ns, ErrorCode::kDimensionMismatch,
          "mutual_information_approx: dimensions inconsistent");
  const double head = reference::rate_upper_bound(sv1, gamma, ns);
  return head - ns + (v1.adjoint() * f).squaredNorm();
}

std::pair<LinkDesign, RateReport> design_link(const CMat& h, const DesignOptions& opt, Rng& rng) {
  return design_link(h, reference::optimal_unconstrained(h, opt.ns), opt, rng);
}

std::pair<LinkDesign, RateReport> design_link(const CMat& h,
                                              const reference::UnconstrainedDesign& des,
                                              const DesignOptions& opt, Rng& rng) {
  require(opt.ns >= 1 && opt.ns <= opt.mt && opt.mt <= h.cols(), ErrorCode::kDimensionMismatch,
          "design_link: need ns <= mt <= nt");
  require(opt.ns <= opt.mr && opt.mr <= h.rows(), ErrorCode::kDimensionMismatch,
          "design_link: need ns <= mr <= nr");
  require(opt.gamma > 0.0, ErrorCode::kInvalidArgument, "design_link: gamma must be > 0");
  if (opt.quant_bits)
    require(*opt.quant_bits >= 1, ErrorCode::kInvalidArgument, "design_link: quant_bits must be >= 1");

  const int ns = opt.ns;
  const double mod_t = 1.0 / std::sqrt(static_cast<double>(h.cols()));
  const double mod_r = 1.0 / std::sqrt(static_cast<double>(h.rows()));

  // Precoder target: V1, scaled by the waterfilling gains when requested.
  // Streams with (numerically) zero power are split off and realized in the
  // baseband factor only.
  CMat f_target = des.precoder;
  int zero_cols = 0;
  double upper = 0.0;
  if (opt.waterfill) {
    const auto pa = reference::waterfill(des.top_singular_values, opt.gamma, ns);
    f_target = des.precoder * pa.gains.asDiagonal();
    for (int i = 0; i < ns; ++i) {
      const double p = pa.gains(i) * pa.gains(i);
      if (p < 1e-12 * ns) ++zero_cols;
      upper += std::log2(1.0 + opt.gamma / ns * p * des.top_singular_values(i) *
                         des.top_singular_values(i));
    }
  } else {
    upper = reference::rate_upper_bound(des.top_singular_values, opt.gamma, ns);
  }

  auto s_pre = opt.settings;
  s_pre.normalize_output = true;
  decomposer::HybridProcessor precoder;
  if (zero_cols > 0) {
    precoder = decomposer::decompose_waterfilled(f_target.leftCols(ns - zero_cols), zero_cols,
                                                 opt.mt, mod_t, s_pre, rng);
  } else {
    precoder = decomposer::decompose(f_target, opt.mt, mod_t, s_pre, rng).first;
  }

  if (opt.quant_bits) {
    precoder.rf = decomposer::quantize_phases(precoder.rf, *opt.quant_bits);
    if (zero_cols > 0) {
      precoder.baseband.leftCols(ns - zero_cols) =
          decomposer::baseband_update(precoder.rf, f_target.leftCols(ns - zero_cols));
      precoder.baseband.rightCols(zero_cols).setZero();
    } else {
      precoder.baseband = decomposer::baseband_update(precoder.rf, f_target);
    }
    const double pnorm = (precoder.rf.realize() * precoder.baseband).norm();
    require(pnorm > 0.0, ErrorCode::kZeroTarget, "design_link: quantized precoder collapsed");
    precoder.baseband *= std::sqrt(static_cast<double>(ns)) / pnorm;
  }

  // The combiner target is the MMSE combiner for the precoder that will
  // actually transmit, so it absorbs the decomposition residual.
  const CMat f_real = precoder.rf.realize() * precoder.baseband;
  const CMat w_star = reference::mmse_combiner(h, f_real, opt.gamma, ns);

  auto s_comb = opt.settings;
  s_comb.normalize_output = false;
  decomposer::HybridProcessor combiner =
      decomposer::decompose(w_star, opt.mr, mod_r, s_comb, rng).first;
  if (opt.quant_bits) {
    combiner.rf = decomposer::quantize_phases(combiner.rf, *opt.quant_bits);
    combiner.baseband = decomposer::baseband_update(combiner.rf, w_star);
  }

  LinkDesign link{std::move(precoder), std::move(combiner), opt.gamma, ns};
  RateReport report;
  report.achieved = spectral_efficiency(h, link);
  report.upper_bound = upper;
  report.eps_precoder = error_measure(f_target, link.precoder);
  report.eps_combiner = error_measure(w_star, link.combiner);
  return {std::move(link), report};
}

}  // namespace mdhp::evaluator
