#include "rng.hpp"

#include <cmath>

namespace mdhp {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_stream(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  std::uint64_t st = base;
  std::uint64_t h = splitmix64(st);
  st = h ^ (a * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL);
  h = splitmix64(st);
  st = h ^ (b * 0xbf58476d1ce4e5b9ULL + 0x2545f4914f6cdd1dULL);
  return splitmix64(st);
}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& w : state_) w = splitmix64(sm);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double a, double b) {
  return a + (b - a) * uniform();
}

Complex Rng::complex_normal() {
  // Box-Muller in polar form: |z|^2 ~ Exp(1), phase uniform.
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-std::log(1.0 - u1));
  return std::polar(r, kTwoPi * u2);
}

double Rng::laplacian(double scale) {
  const double u = uniform() - 0.5;
  const double mag = -scale * std::log(1.0 - 2.0 * std::abs(u));
  return u < 0.0 ? -mag : mag;
}

}  // namespace mdhp
