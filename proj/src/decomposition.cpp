#include "toepdecomp/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include <Eigen/LU>
#include <Eigen/QR>

#include "toepdecomp/error.hpp"

namespace toepdecomp {

namespace {

// Relative agreement demanded between the two weight formulas.
constexpr double kWeightCrossCheck = 1e-7;
constexpr double kUnimodularSlack = 1e-8;
constexpr double kRawRootSlack = 1e-4;
constexpr int kRefineSteps = 12;
constexpr double kMinNodeGap = 1e-6;

double data_scale(const AmplitudeVector& c, double c0) {
  return 1.0 + std::max(c.max_abs(), std::abs(c0));
}

Complex model_value(std::span<const SpectralAtom> atoms, int p) {
  Complex acc = 0.0;
  for (const auto& a : atoms) acc += a.rho * std::pow(a.epsilon, p);
  return acc;
}

double min_pairwise_gap(std::span<const SpectralAtom> atoms) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = i + 1; j < atoms.size(); ++j)
      gap = std::min(gap, std::abs(atoms[i].epsilon - atoms[j].epsilon));
  return gap;
}

// Gauss-Newton on angles and real weights against c_0..c_n. The algebraic nodes
// inherit the conditioning of the square resolvent system; fitting the whole window
// recovers the accuracy the data actually supports. Steps are kept only while the
// residual decreases, so well-posed inputs come back unchanged.
std::vector<Complex> refine_nodes(const AmplitudeVector& c, double c0, std::span<const Complex> nodes) {
  const int m = static_cast<int>(nodes.size());
  const int rows = c.size() + 1;
  Eigen::VectorXd theta(m), rho(m);
  {
    Eigen::MatrixXcd v(rows, m);
    Eigen::VectorXcd rhs(rows);
    for (int p = 0; p < rows; ++p) {
      rhs(p) = c.at(p, c0);
      for (int j = 0; j < m; ++j) v(p, j) = std::pow(nodes[j], p);
    }
    const Eigen::VectorXcd w = v.colPivHouseholderQr().solve(rhs);
    for (int j = 0; j < m; ++j) {
      theta(j) = std::arg(nodes[j]);
      rho(j) = w(j).real();
    }
  }
  auto residual = [&](const Eigen::VectorXd& th, const Eigen::VectorXd& r) {
    Eigen::VectorXd out(2 * rows);
    for (int p = 0; p < rows; ++p) {
      Complex acc = -c.at(p, c0);
      for (int j = 0; j < m; ++j) acc += r(j) * std::polar(1.0, p * th(j));
      out(2 * p) = acc.real();
      out(2 * p + 1) = acc.imag();
    }
    return out;
  };
  Eigen::VectorXd res = residual(theta, rho);
  for (int step = 0; step < kRefineSteps; ++step) {
    Eigen::MatrixXd jac(2 * rows, 2 * m);
    for (int p = 0; p < rows; ++p) {
      for (int j = 0; j < m; ++j) {
        const Complex e = std::polar(1.0, p * theta(j));
        const Complex d_theta = Complex(0.0, p) * rho(j) * e;
        jac(2 * p, j) = d_theta.real();
        jac(2 * p + 1, j) = d_theta.imag();
        jac(2 * p, m + j) = e.real();
        jac(2 * p + 1, m + j) = e.imag();
      }
    }
    const Eigen::VectorXd delta = jac.colPivHouseholderQr().solve(-res);
    const Eigen::VectorXd th = theta + delta.head(m);
    const Eigen::VectorXd r = rho + delta.tail(m);
    const Eigen::VectorXd trial = residual(th, r);
    if (!(trial.norm() < res.norm())) break;
    theta = th;
    rho = r;
    res = trial;
  }
  std::vector<Complex> out(m);
  for (int j = 0; j < m; ++j) out[j] = std::polar(1.0, theta(j));
  sort_by_argument(out);
  return out;
}

std::vector<std::size_t> selected_indices(const CandidateSet& set, Mode mode) {
  const std::size_t nu = set.candidates.size();
  switch (mode.kind) {
    case Mode::Kind::All: {
      std::vector<std::size_t> all(nu);
      for (std::size_t i = 0; i < nu; ++i) all[i] = i;
      return all;
    }
    case Mode::Kind::ClassicalMin: return {0};
    case Mode::Kind::ClassicalMax: return {nu - 1};
    case Mode::Kind::Index:
      if (mode.index < 1 || static_cast<std::size_t>(mode.index) > nu) {
        throw Error(ErrorKind::InvalidIndex, "candidate index " + std::to_string(mode.index) +
                                                 " outside 1.." + std::to_string(nu));
      }
      return {static_cast<std::size_t>(mode.index - 1)};
  }
  return {};
}

}  // namespace

std::string to_string(CandidateStatus s) {
  switch (s) {
    case CandidateStatus::Pending: return "Pending";
    case CandidateStatus::Admissible: return "Admissible";
    case CandidateStatus::PrincipalRankMismatch: return "PrincipalRankMismatch";
    case CandidateStatus::LemmaFailedOffCircle: return "LemmaFailedOffCircle";
    case CandidateStatus::LemmaFailedRepeated: return "LemmaFailedRepeated";
    case CandidateStatus::SolveFailed: return "SolveFailed";
    case CandidateStatus::Degenerate: return "Degenerate";
    case CandidateStatus::Indeterminate: return "Indeterminate";
  }
  return "Unknown";
}

CandidateSet enumerate_candidates(const AmplitudeVector& c, const Tolerances& tol) {
  const auto values = hermitian_eigenvalues(build_hat_matrix(c));
  CandidateSet out;
  out.spectrum = cluster_eigenvalues(values, default_cluster_tol(values, tol.cluster));
  const auto& distinct = out.spectrum.distinct;
  const int order = c.size() + 1;
  int below = 0;
  for (std::size_t l = 0; l < distinct.size(); ++l) {
    DecompositionCandidate cand;
    cand.l = static_cast<int>(l) + 1;
    cand.c0 = -distinct[l].value;
    cand.m = order - distinct[l].multiplicity;
    cand.n_minus = below;
    cand.n_plus = order - below - distinct[l].multiplicity;
    below += distinct[l].multiplicity;
    out.candidates.push_back(cand);
  }
  return out;
}

std::vector<double> rho_via_vandermonde(std::span<const Complex> epsilons,
                                        const AmplitudeVector& c, double c0) {
  const int m = static_cast<int>(epsilons.size());
  if (m < 1 || m > c.size() + 1) {
    throw Error(ErrorKind::IndexOutOfRange, "need 1 <= m <= n + 1 nodes");
  }
  Eigen::MatrixXcd v(m, m);
  Eigen::VectorXcd rhs(m);
  for (int j = 0; j < m; ++j) {
    Complex power = 1.0;
    for (int p = 0; p < m; ++p) {
      v(p, j) = power;
      power *= epsilons[j];
    }
  }
  for (int p = 0; p < m; ++p) rhs(p) = c.at(p, c0);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(v);
  if (!(lu.rcond() > 1e-14)) {
    throw Error(ErrorKind::SingularSystem, "Vandermonde system singular: nodes nearly coincide");
  }
  const Eigen::VectorXcd rho = lu.solve(rhs);
  const double limit = 1e-8 * data_scale(c, c0);
  std::vector<double> out(m);
  for (int j = 0; j < m; ++j) {
    if (std::abs(rho(j).imag()) > limit) {
      throw Error(ErrorKind::NonRealWeights,
                  "weight " + std::to_string(j + 1) + " has imaginary part " +
                      std::to_string(rho(j).imag()));
    }
    out[j] = rho(j).real();
  }
  return out;
}

std::vector<double> rho_via_residue(const Polynomial& p, std::span<const Complex> epsilons,
                                    const AmplitudeVector& c, double c0) {
  const int m = p.degree();
  if (static_cast<int>(epsilons.size()) != m) {
    throw Error(ErrorKind::InvalidInput, "need one node per resolvent root");
  }
  std::vector<double> out;
  out.reserve(m);
  for (const Complex& eps : epsilons) {
    const Complex slope = p.derivative_at(eps);
    if (std::abs(slope) <= 1e-12 * (1.0 + p.max_abs())) {
      throw Error(ErrorKind::DerivativeVanishes, "P'(eps) vanishes: repeated root");
    }
    Complex acc = c.at(m - 1, c0);  // beta_{m-1} = 1
    if (m > 1) {
      const Polynomial beta = p.deflate(eps);
      acc = 0.0;
      for (int q = 0; q < m; ++q) acc += beta[q] * c.at(q, c0);
    }
    out.push_back((acc / slope).real());
  }
  return out;
}

CandidateResult decompose_candidate(const AmplitudeVector& c, const DecompositionCandidate& cand,
                                    const Tolerances& tol) {
  CandidateResult out{cand, std::nullopt};
  auto reject = [&](CandidateStatus s, std::string detail) {
    out.candidate.status = s;
    out.candidate.detail = std::move(detail);
    return out;
  };
  if (cand.m == 0) return reject(CandidateStatus::Degenerate, "shifted matrix is zero");

  std::string stage = "shift";
  try {
    const HermitianToeplitz shifted = shifted_matrix(build_hat_matrix(c), -cand.c0);

    stage = "rank";
    const int rank = matrix_rank(shifted, tol.rank);
    if (rank != cand.m) {
      return reject(CandidateStatus::Indeterminate,
                    "eigenvalue rank " + std::to_string(rank) + " but multiplicity gives " +
                        std::to_string(cand.m));
    }

    stage = "principal rank";
    const int prank = principal_rank(shifted, tol.rank);
    if (prank != cand.m) {
      return reject(CandidateStatus::PrincipalRankMismatch,
                    "rank " + std::to_string(cand.m) + ", principal rank " + std::to_string(prank));
    }

    stage = "resolvent";
    const Polynomial resolvent = resolvent_from_recurrence(shifted, cand.m);

    stage = "lemma";
    const auto lemma = unimodularity_check(resolvent, LemmaTolerances{tol.root, tol.rank});
    switch (lemma.verdict) {
      case RootVerdict::AllUnimodularDistinct: break;
      case RootVerdict::OffCircleRoots:
        return reject(CandidateStatus::LemmaFailedOffCircle, lemma.details);
      case RootVerdict::RepeatedRoots:
        return reject(CandidateStatus::LemmaFailedRepeated, lemma.details);
      case RootVerdict::NotSelfReciprocal:
        return reject(CandidateStatus::SolveFailed, "lemma: " + lemma.details);
    }

    stage = "roots";
    const auto raw_nodes = polynomial_roots(resolvent, tol.root);
    for (const auto& z : raw_nodes) {
      if (std::abs(std::abs(z) - 1.0) > kRawRootSlack) {
        return reject(CandidateStatus::SolveFailed, "roots: node off the unit circle");
      }
    }

    stage = "refinement";
    const auto nodes = refine_nodes(c, cand.c0, raw_nodes);

    stage = "weights";
    const auto rho = rho_via_vandermonde(nodes, c, cand.c0);
    const auto rho_check = rho_via_residue(Polynomial::from_roots(nodes), nodes, c, cand.c0);
    const double zero_weight = 1e-8 * data_scale(c, cand.c0);
    for (std::size_t j = 0; j < rho.size(); ++j) {
      if (std::abs(rho[j]) < zero_weight) {
        return reject(CandidateStatus::SolveFailed, "weights: vanishing weight");
      }
      if (std::abs(rho[j] - rho_check[j]) >
          kWeightCrossCheck * std::max(std::abs(rho[j]), std::abs(rho_check[j]))) {
        return reject(CandidateStatus::SolveFailed,
                      "weights: Vandermonde and residue formulas disagree");
      }
    }

    SpectralDecomposition dec;
    dec.resolvent.assign(resolvent.coeffs().begin(), resolvent.coeffs().end());
    dec.rho_residue = rho_check;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (std::abs(std::abs(nodes[j]) - 1.0) > kUnimodularSlack) {
        return reject(CandidateStatus::SolveFailed, "roots: node off the unit circle");
      }
      dec.atoms.push_back({rho[j], nodes[j], node_position(nodes[j])});
    }
    if (min_pairwise_gap(dec.atoms) <= kMinNodeGap) {
      return reject(CandidateStatus::SolveFailed, "roots: nodes not distinct");
    }

    stage = "reconstruction";
    for (int p = 0; p <= c.size(); ++p) {
      dec.residual = std::max(dec.residual, std::abs(c.at(p, cand.c0) - model_value(dec.atoms, p)));
    }
    if (dec.residual > tol.residual * data_scale(c, cand.c0)) {
      return reject(CandidateStatus::SolveFailed,
                    "reconstruction: residual " + std::to_string(dec.residual));
    }
    const auto positive = std::count_if(rho.begin(), rho.end(), [](double r) { return r > 0; });
    const auto negative = static_cast<long>(rho.size()) - positive;
    dec.inertia_verified = positive == cand.n_plus && negative == cand.n_minus;

    out.candidate.status = CandidateStatus::Admissible;
    out.candidate.detail.clear();
    dec.candidate = out.candidate;
    out.decomposition = std::move(dec);
    return out;
  } catch (const Error& e) {
    return reject(CandidateStatus::SolveFailed,
                  stage + ": " + std::string(to_string(e.kind())) + ": " + e.what());
  } catch (const std::exception& e) {
    return reject(CandidateStatus::SolveFailed, stage + ": " + e.what());
  }
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

VerificationReport verify_decomposition(const SpectralDecomposition& dec, const AmplitudeVector& c,
                                        double tol) {
  const auto& cand = dec.candidate;
  const double scale = data_scale(c, cand.c0);
  VerificationReport rep;

  double residual = 0.0;
  for (int p = -c.size(); p <= c.size(); ++p) {
    residual = std::max(residual, std::abs(c.at(p, cand.c0) - model_value(dec.atoms, p)));
  }
  rep.checks.push_back({"residual", residual <= tol * scale, residual});

  double sum = 0.0;
  long positive = 0, negative = 0;
  double smallest = std::numeric_limits<double>::infinity();
  double worst_modulus = 0.0;
  for (const auto& a : dec.atoms) {
    sum += a.rho;
    positive += a.rho > 0;
    negative += a.rho < 0;
    smallest = std::min(smallest, std::abs(a.rho));
    worst_modulus = std::max(worst_modulus, std::abs(std::abs(a.epsilon) - 1.0));
  }
  const double sum_err = std::abs(sum - cand.c0);
  rep.checks.push_back({"weight_sum", sum_err <= tol * scale, sum_err});
  const bool inertia = positive == cand.n_plus && negative == cand.n_minus;
  rep.checks.push_back(
      {"inertia", inertia, static_cast<double>(std::abs(positive - cand.n_plus) +
                                               std::abs(negative - cand.n_minus))});
  rep.checks.push_back({"unimodular_nodes", worst_modulus <= kUnimodularSlack, worst_modulus});
  const double gap = dec.atoms.size() > 1 ? min_pairwise_gap(dec.atoms) : 0.0;
  rep.checks.push_back({"distinct_nodes", dec.atoms.size() < 2 || gap > kMinNodeGap, gap});
  rep.checks.push_back({"nonzero_weights", !dec.atoms.empty() && smallest > 1e-8 * scale,
                        dec.atoms.empty() ? 0.0 : smallest});
  return rep;
}

int DecomposeAllResult::admissible_count() const {
  return static_cast<int>(std::count_if(results.begin(), results.end(), [](const auto& r) {
    return r.candidate.status == CandidateStatus::Admissible;
  }));
}

DecomposeAllResult decompose_all_serial(const AmplitudeVector& c, Mode mode,
                                        const Tolerances& tol) {
  CandidateSet set = enumerate_candidates(c, tol);
  const auto picked = selected_indices(set, mode);
  DecomposeAllResult out;
  for (std::size_t i : picked) out.results.push_back(decompose_candidate(c, set.candidates[i], tol));
  out.spectrum = std::move(set.spectrum);
  return out;
}

DecomposeAllResult decompose_all(const AmplitudeVector& c, Mode mode, const Tolerances& tol) {
  CandidateSet set = enumerate_candidates(c, tol);
  const auto picked = selected_indices(set, mode);
  DecomposeAllResult out;
  out.results.resize(picked.size());
  const int count = static_cast<int>(picked.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    out.results[i] = decompose_candidate(c, set.candidates[picked[i]], tol);
  }
  out.spectrum = std::move(set.spectrum);
  return out;
}

std::vector<DecomposeAllResult> decompose_batch_serial(std::span<const AmplitudeVector> inputs,
                                                       Mode mode, const Tolerances& tol) {
  std::vector<DecomposeAllResult> out;
  out.reserve(inputs.size());
  for (const auto& c : inputs) out.push_back(decompose_all_serial(c, mode, tol));
  return out;
}

std::vector<DecomposeAllResult> decompose_batch(std::span<const AmplitudeVector> inputs, Mode mode,
                                                const Tolerances& tol) {
  const int count = static_cast<int>(inputs.size());
  std::vector<DecomposeAllResult> out(inputs.size());
  std::vector<std::exception_ptr> failures(inputs.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    try {
      out[i] = decompose_all_serial(inputs[i], mode, tol);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return out;
}

}  // namespace toepdecomp
