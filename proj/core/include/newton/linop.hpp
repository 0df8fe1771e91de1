#pragma once

#include <functional>
#include <utility>

#include "newton/common.hpp"

namespace newton {

/// Matrix-free symmetric linear operator. Implementations must be
/// deterministic and safe for concurrent apply() calls on one instance.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual Index dim() const = 0;
  virtual Vector apply(const Vector& v) const = 0;

  Vector operator()(const Vector& v) const { return apply(v); }
};

/// Dense symmetric matrix wrapped as an operator; test fixtures and small
/// synthetic problems only.
class DenseOperator final : public LinearOperator {
 public:
  explicit DenseOperator(Matrix a) : a_(std::move(a)) {
    if (a_.rows() != a_.cols()) {
      throw UsageError("DenseOperator: matrix must be square");
    }
  }

  Index dim() const override { return a_.rows(); }

  Vector apply(const Vector& v) const override {
    require_dim(v, a_.rows(), "DenseOperator::apply");
    return a_ * v;
  }

  const Matrix& matrix() const { return a_; }

 private:
  Matrix a_;
};

/// Adapts a callable (e.g. a Hessian-vector product bound to an iterate)
/// to the operator interface.
class FunctionOperator final : public LinearOperator {
 public:
  using Apply = std::function<Vector(const Vector&)>;

  FunctionOperator(Index dim, Apply apply)
      : dim_(dim), apply_(std::move(apply)) {
    if (dim_ <= 0) throw UsageError("FunctionOperator: dim must be positive");
  }

  Index dim() const override { return dim_; }

  Vector apply(const Vector& v) const override {
    require_dim(v, dim_, "FunctionOperator::apply");
    return apply_(v);
  }

 private:
  Index dim_;
  Apply apply_;
};

}  // namespace newton
