#include "newton/krylov.hpp"

#include <cmath>

namespace newton {

KrylovFactorization::KrylovFactorization(const LinearOperator& op,
                                         const Vector& start)
    : op_(&op) {
  Index d = op.dim();
  require_dim(start, d, "KrylovFactorization start vector");
  start_norm_ = start.norm();
  if (!(start_norm_ > 0.0) || !std::isfinite(start_norm_)) {
    throw UsageError("KrylovFactorization: start vector must be nonzero");
  }
  q_.resize(d, 0);
  hq_.resize(d, 0);
  alpha_.resize(0);
  beta_.resize(0);
  resid_ = start / start_norm_;
  resid_norm_ = 1.0;
}

bool KrylovFactorization::extend() {
  if (exhausted_ || k_ >= dim()) return false;

  Index d = dim();
  if (q_.cols() == k_) {
    Index grow = std::min<Index>(d, std::max<Index>(8, 2 * k_));
    q_.conservativeResize(d, grow);
    hq_.conservativeResize(d, grow);
    alpha_.conservativeResize(grow);
    beta_.conservativeResize(grow);
  }

  Vector q = resid_ / resid_norm_;
  Vector w = op_->apply(q);
  require_finite(w, "Krylov operator image");
  double a = q.dot(w);

  q_.col(k_) = q;
  hq_.col(k_) = w;
  alpha_[k_] = a;
  if (k_ > 0) beta_[k_ - 1] = resid_norm_;
  ++k_;

  Vector r = w - a * q;
  if (k_ > 1) r -= beta_[k_ - 2] * q_.col(k_ - 2);
  // Full reorthogonalization, two passes.
  for (int pass = 0; pass < 2; ++pass) {
    r -= q_.leftCols(k_) * (q_.leftCols(k_).transpose() * r);
  }

  double b = r.norm();
  if (b <= 1e-12 * std::max(1.0, w.norm()) || k_ >= d) {
    exhausted_ = true;
  } else {
    resid_ = std::move(r);
    resid_norm_ = b;
  }
  return true;
}

}  // namespace newton
