#include "channel.hpp"

#include <cmath>

namespace mdhp::channel {

namespace {

double truncated_laplacian(Rng& rng, double sigma) {
  const double scale = sigma / std::numbers::sqrt2;
  double x;
  do {
    x = rng.laplacian(scale);
  } while (std::abs(x) > kTwoPi);
  return x;
}

}  // namespace

void validate(const UlaGeometry& g) {
  require(g.element_count >= 1, ErrorCode::kInvalidArgument, "ula: element_count must be >= 1");
  require(g.spacing_over_wavelength > 0.0, ErrorCode::kInvalidArgument,
          "ula: spacing_over_wavelength must be > 0");
}

void validate(const MmWaveParams& p) {
  require(p.clusters >= 1 && p.paths_per_cluster >= 1, ErrorCode::kInvalidArgument,
          "mmwave: clusters and paths_per_cluster must be >= 1");
  require(p.tx_sector_min < p.tx_sector_max, ErrorCode::kInvalidArgument,
          "mmwave: tx sector bounds must satisfy min < max");
  require(p.rx_sector_min < p.rx_sector_max, ErrorCode::kInvalidArgument,
          "mmwave: rx sector bounds must satisfy min < max");
  require(p.tx_spread > 0.0 && p.rx_spread > 0.0, ErrorCode::kInvalidArgument,
          "mmwave: angular spreads must be > 0");
  validate(p.tx_geometry);
  validate(p.rx_geometry);
}

CVec ula_response(const UlaGeometry& g, double angle) {
  validate(g);
  const int n = g.element_count;
  const double step = kTwoPi * g.spacing_over_wavelength * std::sin(angle);
  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  CVec a(n);
  for (int k = 0; k < n; ++k) a(k) = std::polar(amp, step * k);
  return a;
}

CMat gen_rayleigh(int nr, int nt, Rng& rng) {
  require(nr >= 1 && nt >= 1, ErrorCode::kInvalidArgument, "gen_rayleigh: dimensions must be >= 1");
  CMat h(nr, nt);
  for (int c = 0; c < nt; ++c)
    for (int r = 0; r < nr; ++r) h(r, c) = rng.complex_normal();
  return h;
}

PathSet sample_paths(const MmWaveParams& p, Rng& rng) {
  validate(p);
  PathSet paths;
  paths.reserve(static_cast<std::size_t>(p.clusters) * p.paths_per_cluster);
  for (int i = 0; i < p.clusters; ++i) {
    const double aoa_mean = rng.uniform(p.rx_sector_min, p.rx_sector_max);
    const double aod_mean = rng.uniform(p.tx_sector_min, p.tx_sector_max);
    for (int l = 0; l < p.paths_per_cluster; ++l) {
      PathRecord rec;
      rec.cluster = i;
      rec.path = l;
      rec.aoa = aoa_mean + truncated_laplacian(rng, p.rx_spread);
      rec.aod = aod_mean + truncated_laplacian(rng, p.tx_spread);
      rec.gain = rng.complex_normal();
      paths.push_back(rec);
    }
  }
  return paths;
}

CMat mmwave_from_paths(const MmWaveParams& p, const PathSet& paths) {
  validate(p);
  require(paths.size() == static_cast<std::size_t>(p.clusters) * p.paths_per_cluster,
          ErrorCode::kDimensionMismatch, "mmwave_from_paths: path count does not match parameters");
  const int nr = p.rx_geometry.element_count;
  const int nt = p.tx_geometry.element_count;
  const int np = static_cast<int>(paths.size());

  CMat ar(nr, np), at(nt, np);
  CVec gains(np);
  for (int k = 0; k < np; ++k) {
    ar.col(k) = ula_response(p.rx_geometry, paths[k].aoa);
    at.col(k) = ula_response(p.tx_geometry, paths[k].aod);
    gains(k) = paths[k].gain;
  }
  const double scale =
      std::sqrt(static_cast<double>(nt) * nr / (static_cast<double>(p.clusters) * p.paths_per_cluster));
  return scale * (ar * gains.asDiagonal() * at.adjoint());
}

CMat gen_mmwave(const MmWaveParams& p, Rng& rng) {
  return mmwave_from_paths(p, sample_paths(p, rng));
}

}  // namespace mdhp::channel
