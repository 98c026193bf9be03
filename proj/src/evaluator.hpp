#pragma once

#include <optional>
#include <utility>

#include "common.hpp"
#include "decomposer.hpp"
#include "reference.hpp"
#include "rng.hpp"

namespace mdhp::evaluator {

struct LinkDesign {
  decomposer::HybridProcessor precoder;  // Nt side
  decomposer::HybridProcessor combiner;  // Nr side
  double gamma = 1.0;                    // linear SNR (P with sigma^2 = 1)
  int ns = 1;
};

struct RateReport {
  double achieved = 0.0;     // bps/Hz through the hybrid chain
  double upper_bound = 0.0;  // unconstrained-processor rate
  double eps_precoder = 0.0;
  double eps_combiner = 0.0;
};

/// Spectral efficiency of the hybrid chain,
///   log2 |I + (gamma/ns) Rn^-1 Ht Ht^H|,
/// with Rn the combiner noise covariance W^H W and Ht = W^H H F. Evaluated
/// through a Cholesky similarity so the log-determinant sees a Hermitian
/// positive-definite argument.
double spectral_efficiency(const CMat& h, const LinkDesign& d);

/// log2 |I + (gamma/ns) H F F^H H^H|.
double mutual_information(const CMat& h, const CMat& f, double gamma, int ns);

/// Diagnostic approximation: rate_upper_bound - ns + ||V1^H F||_F^2.
double mutual_information_approx(const RVec& sv1, const CMat& v1, const CMat& f, double gamma,
                                 int ns);

struct DesignOptions {
  int ns = 1;
  int mt = 1;
  int mr = 1;
  double gamma = 1.0;
  decomposer::DecompositionSettings settings;
  bool waterfill = false;
  std::optional<int> quant_bits;
};

/// Full MD-HP pipeline for one channel realization: unconstrained precoder
/// (optionally waterfilled), precoder decomposition, MMSE combiner against
/// the realized precoder, combiner decomposition, optional phase
/// quantization with a baseband refit, and the resulting rates.
std::pair<LinkDesign, RateReport> design_link(const CMat& h, const DesignOptions& opt, Rng& rng);

/// Same pipeline with the channel SVD precomputed (the harness reuses one
/// factorization across schemes).
std::pair<LinkDesign, RateReport> design_link(const CMat& h,
                                              const reference::UnconstrainedDesign& des,
                                              const DesignOptions& opt, Rng& rng);

}  // namespace mdhp::evaluator
