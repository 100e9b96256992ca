#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace toepdecomp {

using Complex = std::complex<double>;

// The data c_1..c_n. Negative indices are implied: c_{-p} = conj(c_p).
// c_0 is not part of the data; it is supplied by whoever asks for it.
class AmplitudeVector {
 public:
  explicit AmplitudeVector(std::vector<Complex> values);

  int size() const { return static_cast<int>(values_.size()); }
  std::span<const Complex> values() const { return values_; }

  // c_p for 1 <= |p| <= n; p == 0 yields c0.
  Complex at(int p, double c0 = 0.0) const;
  double max_abs() const;

 private:
  std::vector<Complex> values_;
};

// Square Hermitian Toeplitz matrix, entry(r, s) = g_{s-r}, g_{-k} = conj(g_k).
// Indices are zero-based.
class HermitianToeplitz {
 public:
  explicit HermitianToeplitz(std::vector<Complex> generator);

  int order() const { return static_cast<int>(generator_.size()); }
  std::span<const Complex> generator() const { return generator_; }

  Complex g(int k) const {
    return k >= 0 ? generator_[k] : std::conj(generator_[-k]);
  }
  Complex entry(int r, int s) const { return g(s - r); }
  double diagonal() const { return generator_[0].real(); }
  double max_abs() const;

  // Leading principal block of order m, itself Hermitian Toeplitz.
  HermitianToeplitz leading(int m) const;
  Eigen::MatrixXcd dense() const;

 private:
  std::vector<Complex> generator_;
};

struct EigenCluster {
  double value;
  int multiplicity;
};

struct EigenSpectrum {
  std::vector<double> raw;  // ascending
  std::vector<EigenCluster> distinct;
  double cluster_tol = 0.0;
};

struct HermitianEigen {
  std::vector<double> values;  // ascending
  Eigen::MatrixXcd vectors;    // columns; M = V diag(values) V^H
};

HermitianToeplitz build_hat_matrix(const AmplitudeVector& c);
HermitianToeplitz shifted_matrix(const HermitianToeplitz& hat, double chi);

// Throws ConvergenceFailure when the tridiagonal QL iteration does not settle.
HermitianEigen hermitian_eigen(const HermitianToeplitz& m);
std::vector<double> hermitian_eigenvalues(const HermitianToeplitz& m);

// Greedy left-to-right merge: a value joins the open cluster when it lies
// within tol of the previous value. Cluster value is the member mean.
EigenSpectrum cluster_eigenvalues(std::span<const double> raw, double tol);
double default_cluster_tol(std::span<const double> raw, double rel = 1e-8);
EigenSpectrum spectrum_of(const HermitianToeplitz& m, double rel_tol = 1e-8);

// Determinant of rows/cols offset..offset+m-1 (partial-pivot LU).
Complex strict_principal_minor_det(const HermitianToeplitz& m, int size, int offset);
// Rows row_offset.., columns col_offset.. of the given size.
Complex contiguous_minor_det(const HermitianToeplitz& m, int size, int row_offset,
                             int col_offset);

int rank_of_eigenvalues(std::span<const double> values, double tol);
int matrix_rank(const HermitianToeplitz& m, double tol);

// Largest order of a nonsingular leading principal block; 0 if none. Blocks larger
// than rank(m) are singular; the rank-sized block is judged on the top rows of an
// orthonormal range basis, smaller blocks on their own eigenvalues (matrix_rank rule).
int principal_rank(const HermitianToeplitz& m, double tol);

}  // namespace toepdecomp
