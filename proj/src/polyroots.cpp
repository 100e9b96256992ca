#include "toepdecomp/polyroots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "toepdecomp/error.hpp"

namespace toepdecomp {

namespace {

using Coeffs = std::vector<Complex>;

double max_abs_of(std::span<const Complex> xs) {
  double best = 0.0;
  for (const Complex& x : xs) best = std::max(best, std::abs(x));
  return best;
}

Coeffs derivative(std::span<const Complex> a) {
  Coeffs d;
  for (std::size_t l = 1; l < a.size(); ++l) d.push_back(static_cast<double>(l) * a[l]);
  return d;
}

void scale_to_unit(Coeffs& a) {
  const double s = max_abs_of(a);
  if (s > 0) {
    for (Complex& x : a) x /= s;
  }
}

// Long division a = q b + r; returns r with deg r < deg b.
Coeffs remainder(Coeffs a, const Coeffs& b, Coeffs* quotient = nullptr) {
  const int db = static_cast<int>(b.size()) - 1;
  const int da = static_cast<int>(a.size()) - 1;
  if (quotient) quotient->assign(std::max(da - db + 1, 1), Complex{});
  for (int k = da; k >= db; --k) {
    const Complex f = a[k] / b[db];
    if (quotient) (*quotient)[k - db] = f;
    for (int j = 0; j <= db; ++j) a[k - db + j] -= f * b[j];
  }
  a.resize(std::max(db, 1));
  if (db == 0) a[0] = 0.0;
  return a;
}

double wrap_angle(double t) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  t = std::fmod(t, two_pi);
  if (t > std::numbers::pi) t -= two_pi;
  if (t <= -std::numbers::pi) t += two_pi;
  return t;
}

}  // namespace

Polynomial::Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() < 2) throw Error(ErrorKind::InvalidInput, "polynomial degree must be >= 1");
  for (const Complex& a : coeffs_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw Error(ErrorKind::InvalidInput, "non-finite polynomial coefficient");
    }
  }
  const Complex lead = coeffs_.back();
  if (lead == Complex{}) throw Error(ErrorKind::InvalidInput, "leading coefficient is zero");
  for (Complex& a : coeffs_) a /= lead;
  coeffs_.back() = 1.0;
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots) {
  Coeffs a{1.0};
  for (const Complex& r : roots) {
    Coeffs next(a.size() + 1);
    for (std::size_t l = 0; l < a.size(); ++l) {
      next[l + 1] += a[l];
      next[l] -= r * a[l];
    }
    a = std::move(next);
  }
  return Polynomial(std::move(a));
}

Complex Polynomial::operator()(Complex z) const {
  Complex acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Complex Polynomial::derivative_at(Complex z) const {
  Complex acc = 0.0;
  for (int l = degree(); l >= 1; --l) acc = acc * z + static_cast<double>(l) * coeffs_[l];
  return acc;
}

double Polynomial::max_abs() const { return max_abs_of(coeffs_); }

Polynomial Polynomial::deflate(Complex root) const {
  const int m = degree();
  if (m == 1) throw Error(ErrorKind::InvalidInput, "cannot deflate a linear polynomial");
  Coeffs beta(m);
  beta[m - 1] = 1.0;
  for (int p = m - 1; p >= 1; --p) beta[p - 1] = coeffs_[p] + root * beta[p];
  return Polynomial(std::move(beta));
}

std::string to_string(RootVerdict v) {
  switch (v) {
    case RootVerdict::AllUnimodularDistinct: return "AllUnimodularDistinct";
    case RootVerdict::RepeatedRoots: return "RepeatedRoots";
    case RootVerdict::OffCircleRoots: return "OffCircleRoots";
    case RootVerdict::NotSelfReciprocal: return "NotSelfReciprocal";
  }
  return "Unknown";
}

Polynomial resolvent_from_linear_system(const HermitianToeplitz& c, int m) {
  if (m < 1 || m >= c.order()) {
    throw Error(ErrorKind::IndexOutOfRange,
                "resolvent degree " + std::to_string(m) + " needs a matrix of order > m");
  }
  Eigen::MatrixXcd a(m, m);
  Eigen::VectorXcd b(m);
  for (int i = 0; i < m; ++i) {
    for (int l = 0; l < m; ++l) a(i, l) = c.g(l - i);
    b(i) = -c.g(m - i);
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  if (!(lu.rcond() > 1e-14)) {
    throw Error(ErrorKind::SingularSystem,
                "resolvent system of order " + std::to_string(m) + " is singular");
  }
  Eigen::VectorXcd x = lu.solve(b);
  const double scale = a.cwiseAbs().maxCoeff() * x.cwiseAbs().maxCoeff() + b.cwiseAbs().maxCoeff();
  if ((a * x - b).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw Error(ErrorKind::SingularSystem, "resolvent system solve lost accuracy");
  }
  Coeffs coeffs(x.data(), x.data() + m);
  coeffs.emplace_back(1.0);
  return Polynomial(std::move(coeffs));
}

Polynomial resolvent_from_recurrence(const HermitianToeplitz& c, int m) {
  if (m < 1 || m >= c.order()) {
    throw Error(ErrorKind::IndexOutOfRange,
                "resolvent degree " + std::to_string(m) + " needs a matrix of order > m");
  }
  const int last = c.order() - 1;
  const int rows = 2 * last - m + 1;
  Eigen::MatrixXcd a(rows, m);
  Eigen::VectorXcd b(rows);
  for (int r = 0; r < rows; ++r) {
    const int q = r - last;
    for (int l = 0; l < m; ++l) a(r, l) = c.g(q + l);
    b(r) = -c.g(q + m);
  }
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!(sv(m - 1) > 1e-14 * sv(0))) {
    throw Error(ErrorKind::SingularSystem,
                "recurrence system for degree " + std::to_string(m) + " is rank deficient");
  }
  const Eigen::VectorXcd x = svd.solve(b);
  Coeffs coeffs(x.data(), x.data() + m);
  coeffs.emplace_back(1.0);
  return Polynomial(std::move(coeffs));
}

bool self_reciprocal_check(const Polynomial& p, double tol) {
  const auto a = p.coeffs();
  const int m = p.degree();
  if (std::abs(std::abs(a[0]) - 1.0) > tol) return false;
  for (int l = 0; l <= m; ++l) {
    if (std::abs(std::conj(a[l]) - a[m - l] / a[0]) > tol) return false;
  }
  return true;
}

PowerSums newton_power_sums(const Polynomial& p, int last) {
  const int n = p.degree();
  if (last < 0) last = n;
  const auto a = p.coeffs();
  PowerSums out;
  out.degree = n;
  out.sigma.assign(last + 1, Complex{});
  out.sigma[0] = static_cast<double>(n);
  for (int k = 1; k <= std::min(n - 1, last); ++k) {
    Complex s = -static_cast<double>(k) * a[n - k];
    for (int i = 1; i < k; ++i) s -= a[n - i] * out.sigma[k - i];
    out.sigma[k] = s;
  }
  for (int q = n; q <= last; ++q) {
    Complex s = 0.0;
    for (int l = 0; l < n; ++l) s -= a[l] * out.sigma[q - n + l];
    out.sigma[q] = s;
  }
  return out;
}

HermitianToeplitz build_sigma_matrix(const PowerSums& sig, bool self_reciprocal) {
  if (!self_reciprocal) {
    throw Error(ErrorKind::NotSelfReciprocal,
                "power-sum matrix needs sigma_{-p} = conj(sigma_p)");
  }
  if (sig.last() < sig.degree) {
    throw Error(ErrorKind::InvalidInput, "power sums must extend to sigma_N");
  }
  std::vector<Complex> gen(sig.sigma.begin(), sig.sigma.begin() + sig.degree + 1);
  gen[0] = gen[0].real();
  return HermitianToeplitz(std::move(gen));
}

UnimodularityReport unimodularity_check(const Polynomial& p, LemmaTolerances tol) {
  const int n = p.degree();
  UnimodularityReport rep;
  rep.sigma_matrix_order = n + 1;
  rep.self_reciprocal = self_reciprocal_check(p, tol.coeff * (1.0 + p.max_abs()));
  if (!rep.self_reciprocal) {
    rep.verdict = RootVerdict::NotSelfReciprocal;
    rep.details = "coefficients violate conj(a_l) = a_{N-l}/a_0 or |a_0| = 1";
    return rep;
  }

  const PowerSums sig = newton_power_sums(p);
  const HermitianToeplitz s = build_sigma_matrix(sig, true);
  const double sigma_scale = 1.0 + s.max_abs();
  for (int k = 1; k <= n + 1; ++k) {
    rep.leading_minor_dets.push_back(strict_principal_minor_det(s, k, 0).real());
  }
  rep.sigma_eigenvalues = hermitian_eigenvalues(s);
  rep.sigma_rank = rank_of_eigenvalues(rep.sigma_eigenvalues, tol.rank);

  double eig_scale = 1.0;
  for (double x : rep.sigma_eigenvalues) eig_scale = std::max(eig_scale, std::abs(x));
  const double lowest = rep.sigma_eigenvalues.front();
  auto minor_tol = [&](int k) { return tol.rank * std::pow(sigma_scale, k); };

  int negative_minor = 0;
  bool minors_positive = true;
  for (int k = 1; k <= n; ++k) {
    const double d = rep.leading_minor_dets[k - 1];
    if (d < -minor_tol(k) && negative_minor == 0) negative_minor = k;
    if (!(d > 0.0)) minors_positive = false;
  }
  const bool last_vanishes = std::abs(rep.leading_minor_dets[n]) <= minor_tol(n + 1);

  if (lowest < -tol.rank * eig_scale || negative_minor != 0) {
    rep.verdict = RootVerdict::OffCircleRoots;
    rep.details = negative_minor != 0
                      ? "leading minor Delta_" + std::to_string(negative_minor) + " is negative"
                      : "power-sum matrix has a negative eigenvalue";
  } else if (rep.sigma_rank < n) {
    rep.verdict = RootVerdict::RepeatedRoots;
    rep.details = "power-sum matrix is non-negative with rank " + std::to_string(rep.sigma_rank) +
                  " < " + std::to_string(n);
  } else if (rep.sigma_rank == n && minors_positive && last_vanishes) {
    rep.verdict = RootVerdict::AllUnimodularDistinct;
    rep.details = "power-sum matrix is non-negative with rank " + std::to_string(n);
  } else if (rep.sigma_rank == n) {
    rep.verdict = RootVerdict::RepeatedRoots;
    rep.details = "rank " + std::to_string(n) + " but a leading minor is not positive";
  } else {
    // Mathematically the matrix is always singular; full rank means the
    // coefficients are too noisy for the test to be meaningful.
    rep.verdict = RootVerdict::OffCircleRoots;
    rep.details = "power-sum matrix is numerically nonsingular";
  }
  return rep;
}

UnimodularityReport unimodularity_check(const Polynomial& p, double tol) {
  return unimodularity_check(p, LemmaTolerances{tol, tol});
}

double node_position(Complex z) {
  double x = std::atan2(z.imag(), z.real()) / (2.0 * std::numbers::pi);
  if (x < 0) x += 1.0;
  if (x >= 1.0 - 1e-13) x = 0.0;
  return x;
}

void sort_by_argument(std::vector<Complex>& zs) {
  std::stable_sort(zs.begin(), zs.end(), [](Complex a, Complex b) {
    return node_position(a) < node_position(b);
  });
  // ties in argument are broken by modulus
  std::size_t start = 0;
  for (std::size_t i = 1; i <= zs.size(); ++i) {
    if (i == zs.size() || node_position(zs[i]) - node_position(zs[i - 1]) > 1e-12) {
      std::stable_sort(zs.begin() + start, zs.begin() + i,
                       [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
      start = i;
    }
  }
}

std::vector<Complex> polynomial_roots(const Polynomial& p, double tol) {
  const int m = p.degree();
  const auto a = p.coeffs();
  std::vector<Complex> roots;
  if (m == 1) {
    roots.push_back(-a[0]);
  } else {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < m; ++i) companion(i, m - 1) = -a[i];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorKind::ConvergenceFailure,
                  "companion eigenvalues did not converge (degree " + std::to_string(m) + ")");
    }
    for (int i = 0; i < m; ++i) {
      Complex z = solver.eigenvalues()(i);
      const Complex d = p.derivative_at(z);
      if (d != Complex{}) {
        const Complex polished = z - p(z) / d;
        if (std::abs(p(polished)) < std::abs(p(z))) z = polished;
      }
      roots.push_back(z);
    }
  }
  const double bound = tol * (1.0 + p.max_abs());
  for (const Complex& z : roots) {
    const double scale = std::max(1.0, std::pow(std::abs(z), m));
    if (std::abs(p(z)) > bound * scale) {
      throw Error(ErrorKind::ConvergenceFailure, "root residual above tolerance");
    }
  }
  sort_by_argument(roots);
  return roots;
}

Polynomial square_free_part(const Polynomial& p, double tol) {
  if (p.degree() == 1) return p;
  Coeffs a(p.coeffs().begin(), p.coeffs().end());
  Coeffs b = derivative(a);
  scale_to_unit(a);
  scale_to_unit(b);
  Coeffs gcd;
  while (true) {
    if (b.size() == 1) return p;  // constant gcd
    Coeffs r = remainder(a, b);
    const double thr = tol * (1.0 + max_abs_of(a));
    while (r.size() > 1 && std::abs(r.back()) <= thr) r.pop_back();
    if (r.size() == 1 && std::abs(r[0]) <= thr) {
      gcd = b;
      break;
    }
    a = std::move(b);
    b = std::move(r);
    scale_to_unit(b);
  }
  Coeffs quotient;
  remainder(Coeffs(p.coeffs().begin(), p.coeffs().end()), gcd, &quotient);
  return Polynomial(std::move(quotient));
}

bool low_degree_region_check(const Polynomial& p, double tol) {
  const int n = p.degree();
  if (n != 2 && n != 3) {
    throw Error(ErrorKind::UnsupportedDegree,
                "closed-form region known for degree 2 and 3 only, got " + std::to_string(n));
  }
  const auto a = p.coeffs();
  if (std::abs(std::abs(a[0]) - 1.0) > tol) return false;
  const double phi = std::arg(a[0]);
  if (n == 2) {
    // a_1 = +-rho e^{i phi/2}: a_1^2 must equal |a_1|^2 a_0
    const double rho = std::abs(a[1]);
    if (std::abs(a[1] * a[1] - rho * rho * a[0]) > tol * (1.0 + rho * rho)) return false;
    return rho < 2.0;
  }
  const double rho = std::abs(a[1]);
  if (std::abs(a[2] - std::conj(a[1]) * a[0]) > tol * (1.0 + rho)) return false;
  if (rho <= 1.0) return true;
  if (rho >= 3.0) return false;
  const double psi = std::arg(a[1]);
  const double arg = (std::pow(rho, 4) + 18.0 * rho * rho - 27.0) / (8.0 * std::pow(rho, 3));
  const double wedge = std::acos(std::clamp(arg, -1.0, 1.0));
  return std::abs(wrap_angle(3.0 * psi - 2.0 * phi)) < wedge;
}

}  // namespace toepdecomp
