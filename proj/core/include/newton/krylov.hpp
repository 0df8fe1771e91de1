#pragma once

#include "newton/common.hpp"
#include "newton/linop.hpp"

namespace newton {

/// Incrementally grown Lanczos factorization H Q ~ Q T with full
/// reorthogonalization. Q is d x k orthonormal, T the k x k symmetric
/// tridiagonal held as diagonal/off-diagonal arrays. Also retains the
/// operator images HQ so lifted products need no extra operator calls.
class KrylovFactorization {
 public:
  /// Starts from q1 = start / ||start||.
  KrylovFactorization(const LinearOperator& op, const Vector& start);

  /// Adds one Lanczos vector; returns false on subspace breakdown (the
  /// current Krylov space is invariant) in which case nothing changes.
  bool extend();

  Index dim() const { return q_.rows(); }
  int k() const { return k_; }
  double start_norm() const { return start_norm_; }
  /// True once the basis spans an invariant subspace (or the full space).
  bool exhausted() const { return exhausted_; }

  /// Basis and operator image restricted to the first k columns.
  Eigen::Ref<const Matrix> basis() const { return q_.leftCols(k_); }
  Eigen::Ref<const Matrix> image() const { return hq_.leftCols(k_); }
  Eigen::Ref<const Vector> diagonal() const { return alpha_.head(k_); }
  /// k-1 sub-diagonal entries.
  Eigen::Ref<const Vector> offdiagonal() const {
    return beta_.head(std::max(0, k_ - 1));
  }

  /// Lift a coefficient vector y (length k) to the full space.
  Vector lift(const Vector& y) const { return basis() * y; }
  /// H (Q y) from the retained images.
  Vector lift_image(const Vector& y) const { return image() * y; }

 private:
  const LinearOperator* op_;
  Matrix q_;    // d x capacity
  Matrix hq_;   // d x capacity
  Vector alpha_;
  Vector beta_;
  Vector resid_;       // un-normalized next basis vector
  double resid_norm_;  // its norm (beta_k)
  double start_norm_;
  int k_ = 0;
  bool exhausted_ = false;
};

}  // namespace newton
