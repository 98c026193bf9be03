#pragma once

#include <cstdint>

#include "common.hpp"

namespace mdhp {

// Deterministic random stream (xoshiro256**). The standard-library
// distributions are implementation-defined, so all sampling used by the
// experiments is spelled out here to keep fixed seeds reproducible across
// toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1).
  double uniform();

  /// Uniform double in [a, b).
  double uniform(double a, double b);

  /// Circularly-symmetric complex Gaussian CN(0, 1): real and imaginary
  /// parts are independent N(0, 1/2).
  Complex complex_normal();

  /// Zero-mean Laplacian with the given scale b (standard deviation b*sqrt(2)).
  double laplacian(double scale);

 private:
  std::uint64_t state_[4];
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Derives an independent stream seed from a base seed and two indices
/// (e.g. trial number and a role tag). Pure function of its inputs.
std::uint64_t derive_stream(std::uint64_t base, std::uint64_t a, std::uint64_t b);

}  // namespace mdhp
