#pragma once

#include <span>
#include <string>
#include <vector>

#include "toepdecomp/toeplitz.hpp"

namespace toepdecomp {

// Monic complex polynomial, coefficients a_0..a_m in ascending powers.
// Construction divides through by the leading coefficient.
class Polynomial {
 public:
  explicit Polynomial(std::vector<Complex> coeffs);
  static Polynomial from_roots(std::span<const Complex> roots);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  Complex operator[](int l) const { return coeffs_[l]; }

  Complex operator()(Complex z) const;
  Complex derivative_at(Complex z) const;
  double max_abs() const;

  // Quotient of P by (z - root), remainder dropped. Degree m-1, monic.
  Polynomial deflate(Complex root) const;

 private:
  std::vector<Complex> coeffs_;
};

// sigma_p = sum of p-th powers of the roots, p = 0..last.
struct PowerSums {
  std::vector<Complex> sigma;
  int degree = 0;

  int last() const { return static_cast<int>(sigma.size()) - 1; }
  // Negative indices use sigma_{-p} = conj(sigma_p), valid for
  // self-reciprocal sources only.
  Complex at(int p) const { return p >= 0 ? sigma[p] : std::conj(sigma[-p]); }
};

enum class RootVerdict { AllUnimodularDistinct, RepeatedRoots, OffCircleRoots, NotSelfReciprocal };
std::string to_string(RootVerdict v);

struct UnimodularityReport {
  bool self_reciprocal = false;
  int sigma_matrix_order = 0;
  std::vector<double> leading_minor_dets;  // Delta_1..Delta_{N+1}
  std::vector<double> sigma_eigenvalues;
  int sigma_rank = 0;
  RootVerdict verdict = RootVerdict::NotSelfReciprocal;
  std::string details;
};

struct LemmaTolerances {
  double coeff = 1e-8;  // self-reciprocal symmetry, times (1 + max|a_l|)
  double rank = 1e-9;   // definiteness and rank of the power-sum matrix
};

// Solves the m x m system whose matrix is the leading block of C and whose
// right-hand side is -(c_m, c_{m-1}, .., c_1). Needs C.order() > m.
Polynomial resolvent_from_linear_system(const HermitianToeplitz& c, int m);

// Least-squares solution of every recurrence row sum_l a_l c_{q+l} = -c_{q+m},
// q = -(order-1) .. order-1-m, that C supplies. Same polynomial as the square
// system on exact data; on rounded data the extra rows damp the error.
Polynomial resolvent_from_recurrence(const HermitianToeplitz& c, int m);

bool self_reciprocal_check(const Polynomial& p, double tol);

// Newton identities for sigma_0..sigma_{N-1}, then the linear recurrence
// sum_l a_l sigma_{p+l} = 0 up to sigma_last (default N).
PowerSums newton_power_sums(const Polynomial& p, int last = -1);

// Throws NotSelfReciprocal unless the caller vouches for the symmetry.
HermitianToeplitz build_sigma_matrix(const PowerSums& sig, bool self_reciprocal);

UnimodularityReport unimodularity_check(const Polynomial& p, LemmaTolerances tol);
UnimodularityReport unimodularity_check(const Polynomial& p, double tol);

// Companion-matrix eigenvalues plus one Newton step each, ordered by
// argument in [0, 2pi) and then by modulus.
std::vector<Complex> polynomial_roots(const Polynomial& p, double tol);

// P / gcd(P, P') with a truncated Euclidean remainder sequence.
Polynomial square_free_part(const Polynomial& p, double tol);

// Closed-form membership test for distinct unimodular roots, degree 2 or 3.
bool low_degree_region_check(const Polynomial& p, double tol = 1e-10);

// Position x in [0, 1) with z = |z| e^{i 2 pi x}. Arguments within 1e-13 of
// a full turn fold back to 0 so that z = 1 sorts first.
double node_position(Complex z);
void sort_by_argument(std::vector<Complex>& zs);

}  // namespace toepdecomp
