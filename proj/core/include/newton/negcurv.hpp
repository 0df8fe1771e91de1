#pragma once

#include <random>
#include <vector>

#include "newton/linop.hpp"

namespace newton {

/// Approximate smallest eigenpair of a symmetric operator. `lambda` is the
/// Rayleigh quotient of the returned unit direction, recomputed through the
/// operator, so lambda = <u, H u> holds by construction.
struct EigEstimate {
  double lambda = 0.0;
  Vector direction;
  bool converged = false;
  int iterations = 0;
};

struct MinEigOptions {
  /// Target curvature quality: with high probability the estimate captures
  /// at least this fraction of the most negative eigenvalue. Random-start
  /// Lanczos provides no runtime certificate; the value documents the
  /// contract validated offline against dense decompositions.
  double quality = 0.9;
  /// Relative stagnation tolerance on the smallest Ritz value.
  double tol = 1e-6;
  /// Lanczos dimension cap; the effective cap is min(dim, max_iterations).
  int max_iterations = 100;
  /// Consecutive stagnant steps before declaring convergence.
  int stagnation_window = 3;
  /// When set, receives the smallest Ritz value after each step.
  std::vector<double>* ritz_history = nullptr;
};

/// Lanczos with a uniformly random unit start and full reorthogonalization.
/// Convergence is declared when the smallest Ritz value stagnates, the
/// factorization spans an invariant subspace, or the full dimension is
/// reached; otherwise the best estimate is returned with converged=false.
EigEstimate approx_min_eig(const LinearOperator& h, const MinEigOptions& opts,
                           std::mt19937_64& rng);

}  // namespace newton
