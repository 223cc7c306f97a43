#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "pixhom/pixhom.hpp"

namespace pixhom::testing {

/// Seed shared by every randomized test; change it and the tests still
/// have to pass.
inline constexpr std::uint64_t kSeed = 20261015;

/// Draws from the raw engine only, so sequences are identical across
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = kSeed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  bool chance(double p) { return uniform() < p; }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

 private:
  std::mt19937_64 engine_;
};

inline IsotropicModuli random_moduli(Rng& rng, double lo = 0.1, double hi = 10.0) {
  return {rng.log_uniform(lo, hi), rng.log_uniform(lo, hi)};
}

/// Connected mask with roughly `hole_probability` holes; redraws until the
/// periodic extension is connected.
inline CellGeometry random_connected_mask(Rng& rng, int nx, int ny, double hole_probability, double l1 = 1.0,
                                          double l2 = 1.0) {
  while (true) {
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(nx) * ny);
    for (auto& m : mask) m = rng.chance(hole_probability) ? 0 : 1;
    try {
      return CellGeometry::create(nx, ny, l1, l2, mask);
    } catch (const GeometryError&) {
    }
  }
}

/// Mask invariant under the symmetry group of the square: one draw per
/// orbit of quarter turns and mirrors. Rejects draws outside
/// [min_rho, max_rho] or with disconnected material.
inline CellGeometry random_d4_mask(Rng& rng, int n, double hole_probability, double min_rho = 0.5,
                                   double max_rho = 0.95) {
  while (true) {
    std::vector<int> value(static_cast<std::size_t>(n) * n, -1);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        if (value[j * n + i] >= 0) continue;
        const int v = rng.chance(hole_probability) ? 0 : 1;
        int a = i;
        int b = j;
        for (int r = 0; r < 4; ++r) {
          value[b * n + a] = v;
          value[a * n + b] = v;
          const int na = n - 1 - b;
          b = a;
          a = na;
        }
      }
    }
    std::vector<std::uint8_t> mask(value.begin(), value.end());
    try {
      CellGeometry g = CellGeometry::create(n, n, 1.0, 1.0, mask);
      const double rho = volume_fraction(g);
      if (rho >= min_rho && rho <= max_rho) return g;
    } catch (const GeometryError&) {
    }
  }
}

inline CellGeometry full_cell(int nx, int ny, double l1 = 1.0, double l2 = 1.0) {
  return CellGeometry::create(nx, ny, l1, l2, std::vector<std::uint8_t>(static_cast<std::size_t>(nx) * ny, 1));
}

/// n x n cell with a centered h x h hole (n - h even).
inline CellGeometry centered_hole(int n, int h) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(n) * n, 1);
  const int a = (n - h) / 2;
  for (int j = a; j < a + h; ++j) {
    for (int i = a; i < a + h; ++i) mask[j * n + i] = 0;
  }
  return CellGeometry::create(n, n, 1.0, 1.0, mask);
}

}  // namespace pixhom::testing
