#pragma once

// Naive reference routines that produce ground truth for tests and fixture
// files. Nothing here shares a code path with the main modules: determinants,
// polynomial expansion and exponential sums are all re-done by hand.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "toepdecomp/decomposition.hpp"
#include "toepdecomp/polyroots.hpp"
#include "toepdecomp/toeplitz.hpp"

namespace toepdecomp::oracle {

// splitmix64. Part of the fixture-file contract:
// a given seed must yield the same instance in every implementation.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // Top 53 bits mapped to [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

enum class Sign { Plus, Minus };

struct PlantedInstance {
  std::vector<SpectralAtom> atoms;  // ascending x
  int n = 0;
  AmplitudeVector c;
  double c0 = 0.0;
};

inline constexpr double kDefaultMinSeparation = 0.05;  // radians

// Nodes uniform on the circle, then repelled to the minimum separation;
// |rho| uniform in [0.1, 2] with the requested signs.
PlantedInstance synthesize_instance(int m, int n, std::span<const Sign> signs, std::uint64_t seed,
                                    double min_separation = kDefaultMinSeparation);

// Random sign pattern with at least one of each sign when m >= 2.
std::vector<Sign> mixed_signs(int m, SplitMix64& rng);

PowerSums direct_power_sums(std::span<const Complex> roots, int n);

// Gaussian elimination with full pivoting.
Complex determinant(Eigen::MatrixXcd a);

// a_l = (-1)^{m-l} det(rows 1..m, columns {1..m+1} minus {l+1}) / D.
Polynomial coeffs_via_determinants(const HermitianToeplitz& c, int m);

struct Reconstruction {
  std::vector<Complex> c;  // c_1..c_range
  double c0 = 0.0;
};

// Direct sums rho_j e^{i 2 pi x_j p}; uses the atom positions x, not epsilon.
Reconstruction reconstruct(std::span<const SpectralAtom> atoms, int p_range);

// Expands prod (z - r_j) by convolution.
std::vector<Complex> expand_roots(std::span<const Complex> roots);

}  // namespace toepdecomp::oracle
