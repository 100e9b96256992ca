#include "toepdecomp/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "toepdecomp/error.hpp"

namespace toepdecomp {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double max_abs_of(std::span<const Complex> xs) {
  double best = 0.0;
  for (const Complex& x : xs) best = std::max(best, std::abs(x));
  return best;
}

Eigen::MatrixXcd block_of(const HermitianToeplitz& m, int size, int row_offset,
                          int col_offset) {
  if (size < 1 || row_offset < 0 || col_offset < 0 || row_offset + size > m.order() ||
      col_offset + size > m.order()) {
    throw Error(ErrorKind::IndexOutOfRange,
                "minor of size " + std::to_string(size) + " at (" +
                    std::to_string(row_offset) + ", " + std::to_string(col_offset) +
                    ") does not fit a matrix of order " + std::to_string(m.order()));
  }
  Eigen::MatrixXcd out(size, size);
  for (int r = 0; r < size; ++r)
    for (int s = 0; s < size; ++s) out(r, s) = m.entry(row_offset + r, col_offset + s);
  return out;
}

}  // namespace

AmplitudeVector::AmplitudeVector(std::vector<Complex> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorKind::InvalidInput, "n must be >= 1");
  for (std::size_t p = 0; p < values_.size(); ++p) {
    if (!finite(values_[p])) {
      throw Error(ErrorKind::InvalidInput, "c_" + std::to_string(p + 1) + " is not finite");
    }
  }
}

Complex AmplitudeVector::at(int p, double c0) const {
  if (p == 0) return c0;
  if (std::abs(p) > size()) {
    throw Error(ErrorKind::IndexOutOfRange, "c_" + std::to_string(p) + " outside the data");
  }
  return p > 0 ? values_[p - 1] : std::conj(values_[-p - 1]);
}

double AmplitudeVector::max_abs() const { return max_abs_of(values_); }

HermitianToeplitz::HermitianToeplitz(std::vector<Complex> generator)
    : generator_(std::move(generator)) {
  if (generator_.empty()) throw Error(ErrorKind::InvalidInput, "empty Toeplitz generator");
  for (const Complex& g : generator_) {
    if (!finite(g)) throw Error(ErrorKind::InvalidInput, "non-finite Toeplitz generator");
  }
  const double g0 = generator_[0].real();
  if (std::abs(generator_[0].imag()) > 1e-12 * (1.0 + std::abs(g0))) {
    throw Error(ErrorKind::InvalidInput, "diagonal of a Hermitian Toeplitz matrix must be real");
  }
  generator_[0] = g0;
}

double HermitianToeplitz::max_abs() const { return max_abs_of(generator_); }

HermitianToeplitz HermitianToeplitz::leading(int m) const {
  if (m < 1 || m > order()) {
    throw Error(ErrorKind::IndexOutOfRange, "leading block of order " + std::to_string(m));
  }
  return HermitianToeplitz({generator_.begin(), generator_.begin() + m});
}

Eigen::MatrixXcd HermitianToeplitz::dense() const { return block_of(*this, order(), 0, 0); }

HermitianToeplitz build_hat_matrix(const AmplitudeVector& c) {
  std::vector<Complex> gen;
  gen.reserve(c.size() + 1);
  gen.emplace_back(0.0);
  gen.insert(gen.end(), c.values().begin(), c.values().end());
  return HermitianToeplitz(std::move(gen));
}

HermitianToeplitz shifted_matrix(const HermitianToeplitz& hat, double chi) {
  std::vector<Complex> gen(hat.generator().begin(), hat.generator().end());
  gen[0] = hat.diagonal() - chi;
  return HermitianToeplitz(std::move(gen));
}

HermitianEigen hermitian_eigen(const HermitianToeplitz& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m.dense());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConvergenceFailure,
                "Hermitian eigensolver did not converge (order " + std::to_string(m.order()) +
                    ")");
  }
  HermitianEigen out;
  const auto& ev = solver.eigenvalues();
  out.values.assign(ev.data(), ev.data() + ev.size());
  out.vectors = solver.eigenvectors();
  return out;
}

std::vector<double> hermitian_eigenvalues(const HermitianToeplitz& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m.dense(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConvergenceFailure,
                "Hermitian eigensolver did not converge (order " + std::to_string(m.order()) +
                    ")");
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

EigenSpectrum cluster_eigenvalues(std::span<const double> raw, double tol) {
  EigenSpectrum out;
  out.raw.assign(raw.begin(), raw.end());
  out.cluster_tol = tol;
  double sum = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (i > 0 && raw[i] - raw[i - 1] <= tol) {
      auto& open = out.distinct.back();
      ++open.multiplicity;
      sum += raw[i];
      open.value = sum / open.multiplicity;
    } else {
      out.distinct.push_back({raw[i], 1});
      sum = raw[i];
    }
  }
  return out;
}

double default_cluster_tol(std::span<const double> raw, double rel) {
  double scale = 0.0;
  for (double x : raw) scale = std::max(scale, std::abs(x));
  return rel * (1.0 + scale);
}

EigenSpectrum spectrum_of(const HermitianToeplitz& m, double rel_tol) {
  const auto values = hermitian_eigenvalues(m);
  return cluster_eigenvalues(values, default_cluster_tol(values, rel_tol));
}

Complex strict_principal_minor_det(const HermitianToeplitz& m, int size, int offset) {
  return contiguous_minor_det(m, size, offset, offset);
}

Complex contiguous_minor_det(const HermitianToeplitz& m, int size, int row_offset,
                             int col_offset) {
  return block_of(m, size, row_offset, col_offset).partialPivLu().determinant();
}

int rank_of_eigenvalues(std::span<const double> values, double tol) {
  double scale = 1.0;
  for (double x : values) scale = std::max(scale, std::abs(x));
  return static_cast<int>(std::count_if(values.begin(), values.end(),
                                        [&](double x) { return std::abs(x) > tol * scale; }));
}

int matrix_rank(const HermitianToeplitz& m, double tol) {
  return rank_of_eigenvalues(hermitian_eigenvalues(m), tol);
}

int principal_rank(const HermitianToeplitz& m, double tol) {
  const auto eig = hermitian_eigen(m);
  const int rank = rank_of_eigenvalues(eig.values, tol);
  if (rank == m.order()) return rank;
  if (rank >= 1) {
    // The leading rank x rank block equals U_top diag(lambda) U_top^H, where U_top holds the
    // first `rank` rows of the range basis. Its singularity is decided on U_top, whose
    // singular values lie in [0, 1] whatever the scale of the nonzero eigenvalues.
    std::vector<int> order(eig.values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(eig.values[a]) > std::abs(eig.values[b]);
    });
    Eigen::MatrixXcd top(rank, rank);
    for (int k = 0; k < rank; ++k) top.col(k) = eig.vectors.col(order[k]).head(rank);
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(top);
    if (svd.singularValues().minCoeff() > tol) return rank;
  }
  for (int size = std::min(rank, m.order()) - 1; size >= 1; --size) {
    if (matrix_rank(m.leading(size), tol) == size) return size;
  }
  return 0;
}

}  // namespace toepdecomp
