#include "toepdecomp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "toepdecomp/error.hpp"

namespace toepdecomp::oracle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Sorted angles in [0, 2pi) with every circular gap >= sep, or false.
bool repel(std::vector<double>& theta, double sep) {
  const std::size_t m = theta.size();
  if (m < 2) return true;
  for (int round = 0; round < 20000; ++round) {
    std::sort(theta.begin(), theta.end());
    bool settled = true;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = (i + 1) % m;
      double gap = theta[j] - theta[i];
      if (j == 0) gap += kTwoPi;
      if (gap < sep) {
        settled = false;
        const double push = 0.5 * (sep - gap) * 1.05 + 1e-12;
        theta[i] -= push;
        theta[j] += push;
      }
    }
    for (double& t : theta) {
      t = std::fmod(t, kTwoPi);
      if (t < 0) t += kTwoPi;
    }
    if (settled) {
      std::sort(theta.begin(), theta.end());
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<Sign> mixed_signs(int m, SplitMix64& rng) {
  std::vector<Sign> signs(m);
  for (auto& s : signs) s = (rng.next() >> 63) ? Sign::Minus : Sign::Plus;
  if (m >= 2) {
    const bool has_plus = std::find(signs.begin(), signs.end(), Sign::Plus) != signs.end();
    const bool has_minus = std::find(signs.begin(), signs.end(), Sign::Minus) != signs.end();
    const std::size_t slot = rng.next() % m;
    if (!has_plus) signs[slot] = Sign::Plus;
    if (!has_minus) signs[slot] = Sign::Minus;
  }
  return signs;
}

PlantedInstance synthesize_instance(int m, int n, std::span<const Sign> signs, std::uint64_t seed,
                                    double min_separation) {
  if (m < 1 || m > n) throw Error(ErrorKind::InvalidInput, "need 1 <= m <= n");
  if (static_cast<int>(signs.size()) != m) {
    throw Error(ErrorKind::InvalidInput, "sign pattern length must equal m");
  }
  if (m * min_separation >= kTwoPi) {
    throw Error(ErrorKind::InfeasibleSeparation,
                std::to_string(m) + " nodes cannot be separated by " +
                    std::to_string(min_separation) + " rad");
  }
  SplitMix64 rng(seed);
  std::vector<double> theta(m);
  for (double& t : theta) t = rng.uniform(0.0, kTwoPi);
  if (!repel(theta, min_separation)) {
    throw Error(ErrorKind::InfeasibleSeparation, "node repulsion did not settle");
  }

  std::vector<SpectralAtom> atoms(m);
  for (int j = 0; j < m; ++j) {
    const double magnitude = rng.uniform(0.1, 2.0);
    atoms[j].x = theta[j] / kTwoPi;
    if (atoms[j].x >= 1.0) atoms[j].x = 0.0;
    atoms[j].epsilon = std::polar(1.0, kTwoPi * atoms[j].x);
    atoms[j].rho = signs[j] == Sign::Plus ? magnitude : -magnitude;
  }
  auto rec = reconstruct(atoms, n);
  return PlantedInstance{std::move(atoms), n, AmplitudeVector(std::move(rec.c)), rec.c0};
}

PowerSums direct_power_sums(std::span<const Complex> roots, int n) {
  PowerSums out;
  out.degree = static_cast<int>(roots.size());
  out.sigma.assign(n + 1, Complex{});
  for (const Complex& r : roots) {
    Complex power = 1.0;
    for (int p = 0; p <= n; ++p) {
      out.sigma[p] += power;
      power *= r;
    }
  }
  return out;
}

Complex determinant(Eigen::MatrixXcd a) {
  const int n = static_cast<int>(a.rows());
  Complex det = 1.0;
  for (int k = 0; k < n; ++k) {
    int pr = k, pc = k;
    double best = -1.0;
    for (int r = k; r < n; ++r)
      for (int s = k; s < n; ++s)
        if (std::abs(a(r, s)) > best) {
          best = std::abs(a(r, s));
          pr = r;
          pc = s;
        }
    if (best == 0.0) return 0.0;
    if (pr != k) {
      a.row(pr).swap(a.row(k));
      det = -det;
    }
    if (pc != k) {
      a.col(pc).swap(a.col(k));
      det = -det;
    }
    det *= a(k, k);
    for (int r = k + 1; r < n; ++r) {
      const Complex f = a(r, k) / a(k, k);
      for (int s = k; s < n; ++s) a(r, s) -= f * a(k, s);
    }
  }
  return det;
}

Polynomial coeffs_via_determinants(const HermitianToeplitz& c, int m) {
  if (m < 1 || m >= c.order()) {
    throw Error(ErrorKind::IndexOutOfRange, "determinant formula needs order > m");
  }
  auto block = [&](int skip_col) {
    Eigen::MatrixXcd out(m, m);
    for (int r = 0; r < m; ++r) {
      int col = 0;
      for (int s = 0; s <= m; ++s) {
        if (s == skip_col) continue;
        out(r, col++) = c.entry(r, s);
      }
    }
    return out;
  };
  const Eigen::MatrixXcd lead = block(m);
  const Complex d = determinant(lead);
  // Only an exactly vanishing determinant is refused: ill-conditioned minors are
  // legitimate inputs here and the comparison against the solver is the point.
  if (!(std::abs(d) > 0.0) || !std::isfinite(std::abs(d))) {
    throw Error(ErrorKind::SingularMinor, "leading minor of order " + std::to_string(m) +
                                              " is singular");
  }
  std::vector<Complex> a(m + 1);
  for (int l = 0; l < m; ++l) {
    const double sign = (m - l) % 2 == 0 ? 1.0 : -1.0;
    a[l] = sign * determinant(block(l)) / d;
  }
  a[m] = 1.0;
  return Polynomial(std::move(a));
}

Reconstruction reconstruct(std::span<const SpectralAtom> atoms, int p_range) {
  Reconstruction out;
  out.c.assign(p_range, Complex{});
  for (const auto& a : atoms) {
    out.c0 += a.rho;
    for (int p = 1; p <= p_range; ++p) {
      out.c[p - 1] += a.rho * std::polar(1.0, kTwoPi * a.x * p);
    }
  }
  return out;
}

std::vector<Complex> expand_roots(std::span<const Complex> roots) {
  std::vector<Complex> a{1.0};
  for (const Complex& r : roots) {
    std::vector<Complex> next(a.size() + 1, Complex{});
    for (std::size_t i = 0; i < a.size(); ++i) {
      next[i] += -r * a[i];
      next[i + 1] += a[i];
    }
    a.swap(next);
  }
  return a;
}

}  // namespace toepdecomp::oracle
