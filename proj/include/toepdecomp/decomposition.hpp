#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "toepdecomp/polyroots.hpp"
#include "toepdecomp/tolerances.hpp"
#include "toepdecomp/toeplitz.hpp"

namespace toepdecomp {

enum class CandidateStatus {
  Pending,
  Admissible,
  PrincipalRankMismatch,
  LemmaFailedOffCircle,
  LemmaFailedRepeated,
  SolveFailed,
  Degenerate,     // rank 0: nothing to decompose
  Indeterminate,  // eigenvalue rank disagrees with the cluster multiplicity
};
std::string to_string(CandidateStatus s);

// One shift c0 = -chi_l of the zero-diagonal matrix. l is 1-based.
struct DecompositionCandidate {
  int l = 0;
  double c0 = 0.0;
  int m = 0;
  int n_minus = 0;
  int n_plus = 0;
  CandidateStatus status = CandidateStatus::Pending;
  std::string detail;
};

struct SpectralAtom {
  double rho = 0.0;
  Complex epsilon;
  double x = 0.0;  // epsilon = e^{i 2 pi x}, x in [0, 1)
};

struct SpectralDecomposition {
  DecompositionCandidate candidate;
  std::vector<SpectralAtom> atoms;  // ascending node argument
  double residual = 0.0;            // max |c_p - sum rho_j eps_j^p|, p = 0..n
  bool inertia_verified = false;
  std::vector<Complex> resolvent;   // a_0..a_m
  std::vector<double> rho_residue;  // cross-check weights, same order as atoms
};

struct CandidateResult {
  DecompositionCandidate candidate;
  std::optional<SpectralDecomposition> decomposition;
};

struct CandidateSet {
  EigenSpectrum spectrum;
  std::vector<DecompositionCandidate> candidates;
};

CandidateSet enumerate_candidates(const AmplitudeVector& c, const Tolerances& tol = {});

// Runs the admissibility tests and weight recovery for one candidate. Numeric
// failures never escape; they come back as SolveFailed with the stage named.
CandidateResult decompose_candidate(const AmplitudeVector& c, const DecompositionCandidate& cand,
                                    const Tolerances& tol = {});

// Solves sum_j eps_j^p rho_j = c_p, p = 0..m-1, with c_0 := c0.
std::vector<double> rho_via_vandermonde(std::span<const Complex> epsilons,
                                        const AmplitudeVector& c, double c0);
// rho_j = sum_p beta_{j,p} c_p / P'(eps_j), beta from P / (z - eps_j).
std::vector<double> rho_via_residue(const Polynomial& p, std::span<const Complex> epsilons,
                                    const AmplitudeVector& c, double c0);

struct VerificationCheck {
  std::string name;
  bool passed = false;
  double magnitude = 0.0;
};

struct VerificationReport {
  std::vector<VerificationCheck> checks;
  bool passed() const;
};

VerificationReport verify_decomposition(const SpectralDecomposition& dec, const AmplitudeVector& c,
                                        double tol);

struct Mode {
  enum class Kind { All, ClassicalMin, ClassicalMax, Index };
  Kind kind = Kind::All;
  int index = 0;  // 1-based, Kind::Index only

  static Mode all() { return {Kind::All, 0}; }
  static Mode classical_min() { return {Kind::ClassicalMin, 0}; }
  static Mode classical_max() { return {Kind::ClassicalMax, 0}; }
  static Mode at(int l) { return {Kind::Index, l}; }
};

struct DecomposeAllResult {
  EigenSpectrum spectrum;
  std::vector<CandidateResult> results;  // candidate-index order

  int admissible_count() const;
};

// Candidates are evaluated on an OpenMP team; results are merged in index
// order. decompose_all_serial is the single-threaded reference.
DecomposeAllResult decompose_all(const AmplitudeVector& c, Mode mode, const Tolerances& tol = {});
DecomposeAllResult decompose_all_serial(const AmplitudeVector& c, Mode mode,
                                        const Tolerances& tol = {});

// Independent inputs distributed over the team (candidates run serially
// inside each item). Rethrows the first enumeration failure.
std::vector<DecomposeAllResult> decompose_batch(std::span<const AmplitudeVector> inputs, Mode mode,
                                                const Tolerances& tol = {});
std::vector<DecomposeAllResult> decompose_batch_serial(std::span<const AmplitudeVector> inputs,
                                                       Mode mode, const Tolerances& tol = {});

}  // namespace toepdecomp
