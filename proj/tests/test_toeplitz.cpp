#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "toepdecomp/error.hpp"
#include "toepdecomp/oracle.hpp"
#include "toepdecomp/toeplitz.hpp"

namespace td = toepdecomp;
using td::Complex;

namespace {

td::HermitianToeplitz hat(std::vector<Complex> c) {
  return td::build_hat_matrix(td::AmplitudeVector(std::move(c)));
}

void expect_values(const std::vector<double>& got, const std::vector<double>& want, double tol) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "index " << i;
}

td::HermitianToeplitz random_generator(td::oracle::SplitMix64& rng, int order) {
  std::vector<Complex> g(order);
  g[0] = rng.uniform(-2, 2);
  for (int k = 1; k < order; ++k) g[k] = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
  return td::HermitianToeplitz(g);
}

}  // namespace

TEST(AmplitudeVector, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(td::AmplitudeVector({}), td::Error);
  EXPECT_THROW(td::AmplitudeVector({Complex(NAN, 0)}), td::Error);
  EXPECT_THROW(td::AmplitudeVector({Complex(0, INFINITY)}), td::Error);
}

TEST(AmplitudeVector, NegativeIndicesConjugate) {
  td::AmplitudeVector c({{1, 2}, {3, -4}});
  EXPECT_EQ(c.at(-2), Complex(3, 4));
  EXPECT_EQ(c.at(0, 0.5), Complex(0.5, 0));
  EXPECT_EQ(c.at(1), Complex(1, 2));
}

TEST(HermitianToeplitz, RejectsComplexDiagonal) {
  EXPECT_THROW(td::HermitianToeplitz({Complex(1, 0.1), 0.0}), td::Error);
}

TEST(BuildHatMatrix, CornerOnlyData) {
  const auto m = hat({0, 0, 1});
  ASSERT_EQ(m.order(), 4);
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s) {
      const bool corner = (r == 0 && s == 3) || (r == 3 && s == 0);
      EXPECT_EQ(m.entry(r, s), corner ? Complex(1) : Complex(0));
    }
}

TEST(BuildHatMatrix, SingleZeroValue) {
  const auto m = hat({0});
  EXPECT_EQ(m.order(), 2);
  EXPECT_EQ(m.max_abs(), 0.0);
}

TEST(BuildHatMatrix, BandedData) {
  const auto m = hat({1, 0, 1});
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s) {
      const int d = std::abs(r - s);
      EXPECT_EQ(m.entry(r, s), (d == 1 || d == 3) ? Complex(1) : Complex(0));
    }
}

TEST(ShiftedMatrix, SetsDiagonal) {
  EXPECT_EQ(td::shifted_matrix(hat({0, 0, 1}), -1.0).entry(2, 2), Complex(1));
  EXPECT_EQ(td::shifted_matrix(hat({1, 0, 1}), -2.0).diagonal(), 2.0);
  const auto h = hat({{0.3, 0.1}, 2});
  const auto same = td::shifted_matrix(h, 0.0);
  for (int k = 0; k < h.order(); ++k) EXPECT_EQ(same.g(k), h.g(k));
}

TEST(HermitianEigen, CornerOnlySpectrum) {
  expect_values(td::hermitian_eigenvalues(hat({0, 0, 1})), {-1, 0, 0, 1}, 1e-12);
}

TEST(HermitianEigen, ZeroMatrix) {
  expect_values(td::hermitian_eigenvalues(td::HermitianToeplitz({0, 0, 0})), {0, 0, 0}, 0.0);
}

TEST(HermitianEigen, BandedSpectrum) {
  expect_values(td::hermitian_eigenvalues(hat({1, 0, 1})), {-2, 0, 0, 2}, 1e-12);
}

TEST(HermitianEigen, ReconstructsAndOrthonormal) {
  td::oracle::SplitMix64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = random_generator(rng, 2 + trial % 9);
    const auto eig = td::hermitian_eigen(m);
    const Eigen::MatrixXcd a = m.dense();
    const Eigen::VectorXd lam = Eigen::Map<const Eigen::VectorXd>(eig.values.data(), eig.values.size());
    const Eigen::MatrixXcd back = eig.vectors * lam.asDiagonal() * eig.vectors.adjoint();
    EXPECT_LE((a - back).cwiseAbs().maxCoeff(), 1e-10 * (1 + m.max_abs()));
    const Eigen::MatrixXcd gram = eig.vectors.adjoint() * eig.vectors;
    EXPECT_LE((gram - Eigen::MatrixXcd::Identity(m.order(), m.order())).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_TRUE(std::is_sorted(eig.values.begin(), eig.values.end()));
  }
}

TEST(ClusterEigenvalues, SplitsDistinctValues) {
  const auto s = td::cluster_eigenvalues(std::vector<double>{-1, 0, 0, 1}, 1e-8);
  ASSERT_EQ(s.distinct.size(), 3u);
  EXPECT_EQ(s.distinct[0].value, -1);
  EXPECT_EQ(s.distinct[1].multiplicity, 2);
  EXPECT_EQ(s.distinct[2].multiplicity, 1);
}

TEST(ClusterEigenvalues, SingleValue) {
  const auto s = td::cluster_eigenvalues(std::vector<double>{5}, 1e-3);
  ASSERT_EQ(s.distinct.size(), 1u);
  EXPECT_EQ(s.distinct[0].value, 5);
  EXPECT_EQ(s.distinct[0].multiplicity, 1);
}

TEST(ClusterEigenvalues, MergesWithinTolerance) {
  const auto s = td::cluster_eigenvalues(std::vector<double>{0, 1e-12, 1}, 1e-8);
  ASSERT_EQ(s.distinct.size(), 2u);
  EXPECT_NEAR(s.distinct[0].value, 0.0, 1e-12);
  EXPECT_EQ(s.distinct[0].multiplicity, 2);
  EXPECT_EQ(s.distinct[1].value, 1);
}

TEST(ClusterEigenvalues, InvariantsOnRandomSpectra) {
  td::oracle::SplitMix64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = td::build_hat_matrix(td::AmplitudeVector([&] {
      std::vector<Complex> c(1 + trial % 8);
      for (auto& v : c) v = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
      return c;
    }()));
    const auto s = td::spectrum_of(m);
    int total = 0;
    for (std::size_t l = 0; l < s.distinct.size(); ++l) {
      total += s.distinct[l].multiplicity;
      if (l > 0) EXPECT_GT(s.distinct[l].value - s.distinct[l - 1].value, s.cluster_tol);
    }
    EXPECT_EQ(total, m.order());
    const double trace = std::accumulate(s.raw.begin(), s.raw.end(), 0.0);
    double biggest = 0;
    for (double v : s.raw) biggest = std::max(biggest, std::abs(v));
    EXPECT_LE(std::abs(trace), m.order() * 1e-10 * std::max(1.0, biggest));
  }
}

TEST(StrictPrincipalMinor, Examples) {
  const auto c1 = td::shifted_matrix(hat({0, 0, 1}), -1.0);
  for (int off = 0; off < 4; ++off) EXPECT_NEAR(std::abs(td::strict_principal_minor_det(c1, 1, off) - 1.0), 0, 1e-15);
  const td::HermitianToeplitz g({{2.5, 0}, {1, 1}});
  EXPECT_EQ(td::strict_principal_minor_det(g, 1, 0), Complex(2.5));
  EXPECT_NEAR(std::abs(td::strict_principal_minor_det(hat({0, 0, 1}), 3, 0)), 0, 1e-15);
}

TEST(StrictPrincipalMinor, OutOfRange) {
  const auto m = hat({1, 2});
  EXPECT_THROW(td::strict_principal_minor_det(m, 2, 2), td::Error);
  EXPECT_THROW(td::strict_principal_minor_det(m, 0, 0), td::Error);
  EXPECT_THROW(td::strict_principal_minor_det(m, 4, 0), td::Error);
}

TEST(PrincipalRank, Examples) {
  EXPECT_EQ(td::principal_rank(hat({0, 0, 1}), 1e-9), 0);
  EXPECT_EQ(td::principal_rank(td::HermitianToeplitz({1, 0, 0, 0}), 1e-9), 4);
  EXPECT_EQ(td::principal_rank(hat({1, 0, 1}), 1e-9), 2);
}

// Rank-deficient but with a nonsingular leading block of the rank size; the
// planted nodes sit 0.05 rad apart so det of that block is tiny.
TEST(PrincipalRank, CloseNodesStillFullLeadingBlock) {
  const int m = 3;
  const std::vector<double> theta{0.4, 0.45, 2.0};
  const std::vector<double> rho{1.0, -0.7, 0.3};
  std::vector<Complex> g(7);
  for (int p = 0; p < 7; ++p)
    for (int j = 0; j < m; ++j) g[p] += rho[j] * std::polar(1.0, p * theta[j]);
  const td::HermitianToeplitz c(g);
  EXPECT_EQ(td::matrix_rank(c, 1e-9), m);
  EXPECT_EQ(td::principal_rank(c, 1e-9), m);
}

TEST(MatrixRank, Examples) {
  EXPECT_EQ(td::matrix_rank(hat({0, 0, 1}), 1e-9), 2);
  EXPECT_EQ(td::matrix_rank(hat({1, 0, 1}), 1e-9), 2);
  EXPECT_EQ(td::matrix_rank(td::shifted_matrix(hat({0, 0, 1}), -1.0), 1e-9), 3);
}

TEST(ToeplitzProperties, HermitianAndReflectionSymmetric) {
  td::oracle::SplitMix64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto m = random_generator(rng, 1 + trial % 8);
    const int n = m.order();
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) {
        EXPECT_EQ(m.entry(r, s), std::conj(m.entry(s, r)));
        EXPECT_EQ(m.entry(r, s), m.entry(n - 1 - s, n - 1 - r));
      }
  }
}

TEST(ToeplitzProperties, EqualContiguousPrincipalMinors) {
  td::oracle::SplitMix64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto m = random_generator(rng, 2 + trial % 7);
    for (int size = 1; size <= m.order(); ++size) {
      const Complex ref = td::strict_principal_minor_det(m, size, 0);
      EXPECT_LE(std::abs(ref.imag()), 1e-10 * (1 + std::abs(ref)));
      for (int off = 1; off + size <= m.order(); ++off) {
        EXPECT_LE(std::abs(td::strict_principal_minor_det(m, size, off) - ref), 1e-9 * (1 + std::abs(ref)));
      }
    }
  }
}

TEST(ToeplitzProperties, ShiftedRankMatchesMultiplicity) {
  td::oracle::SplitMix64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = td::oracle::synthesize_instance(1 + trial % 4, 4 + trial % 5,
                                                      std::vector<td::oracle::Sign>(1 + trial % 4, td::oracle::Sign::Plus),
                                                      rng.next());
    const auto h = td::build_hat_matrix(inst.c);
    const auto s = td::spectrum_of(h);
    for (const auto& cl : s.distinct) {
      EXPECT_EQ(td::matrix_rank(td::shifted_matrix(h, cl.value), 1e-9), h.order() - cl.multiplicity);
    }
  }
}
