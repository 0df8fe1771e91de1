#include "newton/negcurv.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "newton/krylov.hpp"

namespace newton {

EigEstimate approx_min_eig(const LinearOperator& h, const MinEigOptions& opts,
                           std::mt19937_64& rng) {
  Index d = h.dim();
  if (opts.quality <= 0.0 || opts.quality >= 1.0) {
    throw UsageError("approx_min_eig: quality must lie in (0,1)");
  }
  if (opts.max_iterations < 1) {
    throw UsageError("approx_min_eig: max_iterations must be >= 1");
  }

  std::normal_distribution<double> normal(0.0, 1.0);
  Vector start(d);
  for (Index i = 0; i < d; ++i) start[i] = normal(rng);
  if (start.norm() == 0.0) start[0] = 1.0;

  KrylovFactorization krylov(h, start);
  int cap = static_cast<int>(std::min<Index>(d, opts.max_iterations));

  double prev_ritz = std::numeric_limits<double>::infinity();
  int stagnant = 0;
  bool converged = false;
  Eigen::SelfAdjointEigenSolver<Matrix> es;

  while (krylov.k() < cap && krylov.extend()) {
    es.computeFromTridiagonal(krylov.diagonal(), krylov.offdiagonal());
    double ritz = es.eigenvalues()[0];
    if (opts.ritz_history) opts.ritz_history->push_back(ritz);

    if (krylov.exhausted()) {  // invariant subspace; Ritz value is exact there
      converged = true;
      break;
    }
    if (std::abs(ritz - prev_ritz) <=
        opts.tol * std::max(1.0, std::abs(ritz))) {
      if (++stagnant >= opts.stagnation_window) {
        converged = true;
        break;
      }
    } else {
      stagnant = 0;
    }
    prev_ritz = ritz;
  }
  if (krylov.k() == 0) throw NumericalError("approx_min_eig: no Krylov step");

  es.computeFromTridiagonal(krylov.diagonal(), krylov.offdiagonal());
  Vector y = es.eigenvectors().col(0);

  EigEstimate est;
  est.direction = krylov.lift(y);
  est.direction.normalize();
  // One extra product pins lambda to the actual Rayleigh quotient of the
  // returned direction rather than the subspace Ritz value.
  est.lambda = est.direction.dot(h.apply(est.direction));
  est.converged = converged;
  est.iterations = krylov.k();
  return est;
}

}  // namespace newton
