#pragma once

#include "common.hpp"
#include "numerics.hpp"

namespace mdhp::reference {

/// Unconstrained optimal processors from the channel SVD: the first ns right
/// and left singular vectors, column phases standardized.
struct UnconstrainedDesign {
  CMat precoder;             // F*, nt x ns
  CMat combiner;             // W*, nr x ns
  RVec top_singular_values;  // length ns, descending
};

/// Waterfilling gains (diagonal of Gamma). Squared gains sum to ns.
struct PowerAllocation {
  RVec gains;
};

UnconstrainedDesign optimal_unconstrained(const CMat& h, int ns);

/// Rate upper bound: sum_i log2(1 + (gamma/ns) * sv_i^2) over the first ns
/// singular values.
double rate_upper_bound(const RVec& sv, double gamma, int ns);

/// Maximizes sum log2(1 + (gamma/ns) * p_i * sv_i^2) over p >= 0 with
/// sum p_i = ns; gains are sqrt(p). Exact water level via the active-set
/// sweep over sorted singular values.
PowerAllocation waterfill(const RVec& sv, double gamma, int ns);

/// Unconstrained linear MMSE combiner for the effective precoder f, with
/// noise power 1 and transmit power gamma:
///   W* = (sqrt(gamma)/ns) * (gamma/ns * H F F^H H^H + I)^-1 * H F.
CMat mmse_combiner(const CMat& h, const CMat& f, double gamma, int ns);

}  // namespace mdhp::reference
