#pragma once

namespace toepdecomp {

// Relative tolerances shared by the whole pipeline. Each one is scaled by the
// magnitude of the data it is compared against at the point of use.
struct Tolerances {
  double cluster = 1e-8;   // eigenvalue clustering, times (1 + max|lambda|)
  double rank = 1e-9;      // numerical rank, times max(1, max|lambda|)
  double root = 1e-8;      // polynomial residuals and coefficient symmetry
  double residual = 1e-8;  // reconstruction, times (1 + max|c_p|)

  bool valid() const {
    return cluster > 0 && rank > 0 && root > 0 && residual > 0;
  }
};

}  // namespace toepdecomp
