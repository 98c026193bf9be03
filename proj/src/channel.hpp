#pragma once

#include <vector>

#include "common.hpp"
#include "rng.hpp"

namespace mdhp::channel {

/// Uniform linear array described by element count and spacing d/lambda.
struct UlaGeometry {
  int element_count = 1;
  double spacing_over_wavelength = 0.5;
};

/// Clustered channel parameters. All angles are radians; degrees only exist
/// at the experiment-config boundary.
struct MmWaveParams {
  int clusters = 8;
  int paths_per_cluster = 10;
  double tx_sector_min = 0.0, tx_sector_max = 0.0;  // AoD interval
  double rx_sector_min = 0.0, rx_sector_max = 0.0;  // AoA interval
  double tx_spread = 0.0;  // sigma_phi
  double rx_spread = 0.0;  // sigma_theta
  UlaGeometry tx_geometry;
  UlaGeometry rx_geometry;
};

struct PathRecord {
  int cluster = 0;
  int path = 0;
  Complex gain;  // CN(0,1)
  double aoa = 0.0;
  double aod = 0.0;
};

using PathSet = std::vector<PathRecord>;

/// Array response vector: entry k is exp(j*k*2pi*(d/lambda)*sin(angle))/sqrt(N).
/// Always unit Euclidean norm.
CVec ula_response(const UlaGeometry& g, double angle);

/// i.i.d. CN(0,1) channel, nr x nt. Entries are drawn in column-major order
/// so a fixed seed reproduces the matrix bit for bit.
CMat gen_rayleigh(int nr, int nt, Rng& rng);

/// Draws cluster means uniformly over the configured sectors, then per-path
/// angles from a Laplacian around the mean (scale sigma/sqrt(2)) truncated to
/// +-2pi offsets by rejection. Per cluster the draw order is: AoA mean, AoD
/// mean, then for each path AoA offset, AoD offset, gain.
PathSet sample_paths(const MmWaveParams& p, Rng& rng);

/// Assembles sqrt(Nt*Nr/(Nc*Np)) * sum gain * a_r(aoa) * a_t(aod)^H.
CMat mmwave_from_paths(const MmWaveParams& p, const PathSet& paths);

CMat gen_mmwave(const MmWaveParams& p, Rng& rng);

void validate(const UlaGeometry& g);
void validate(const MmWaveParams& p);

}  // namespace mdhp::channel
