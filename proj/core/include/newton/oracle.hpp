#pragma once

#include <vector>

#include "newton/common.hpp"
#include "newton/ledger.hpp"

namespace newton {

/// Abstract access to objective information: F, its gradient, and
/// Hessian-vector products, with propagation accounting. Instances are
/// immutable after construction; only the ledger mutates, atomically.
///
/// The public entry points check dimensions, charge the ledger, and reject
/// non-finite results; subclasses implement the *_impl hooks free of any
/// accounting so composed evaluators (full, per-component, sampled) never
/// double-charge.
class ObjectiveOracle {
 public:
  ObjectiveOracle(Index dim, PropWeights weights = {})
      : dim_(dim), ledger_(weights) {
    if (dim_ <= 0) throw UsageError("ObjectiveOracle: dim must be positive");
  }
  virtual ~ObjectiveOracle() = default;

  ObjectiveOracle(const ObjectiveOracle&) = delete;
  ObjectiveOracle& operator=(const ObjectiveOracle&) = delete;

  Index dim() const { return dim_; }

  virtual bool has_exact_hessian() const { return true; }
  virtual bool is_finite_sum() const { return false; }

  /// Component count n of a finite-sum objective; 1 otherwise.
  virtual long long num_components() const { return 1; }

  double eval(const Vector& x) const {
    require_dim(x, dim_, "eval");
    double f = eval_impl(x);
    ledger_.charge_function(num_components());
    require_finite(f, "objective value");
    return f;
  }

  Vector grad(const Vector& x) const {
    require_dim(x, dim_, "grad");
    Vector g = grad_impl(x);
    ledger_.charge_gradient(num_components());
    require_finite(g, "gradient");
    return g;
  }

  Vector hvp(const Vector& x, const Vector& v) const {
    require_dim(x, dim_, "hvp");
    require_dim(v, dim_, "hvp direction");
    Vector hv = hvp_impl(x, v);
    ledger_.charge_hvp(num_components());
    require_finite(hv, "Hessian-vector product");
    return hv;
  }

  PropLedger& ledger() const { return ledger_; }

 protected:
  virtual double eval_impl(const Vector& x) const = 0;
  virtual Vector grad_impl(const Vector& x) const = 0;
  virtual Vector hvp_impl(const Vector& x, const Vector& v) const = 0;

 private:
  Index dim_;
  mutable PropLedger ledger_;
};

/// Finite-sum objective F(x) = (1/n) sum_i f_i(x) with per-component
/// access, the substrate for sub-sampled gradient and Hessian estimators.
class FiniteSumOracle : public ObjectiveOracle {
 public:
  FiniteSumOracle(Index dim, long long n, PropWeights weights = {})
      : ObjectiveOracle(dim, weights), n_(n) {
    if (n_ <= 0) throw UsageError("FiniteSumOracle: n must be positive");
  }

  bool is_finite_sum() const override { return true; }
  long long num_components() const override { return n_; }

  double component_value(long long i, const Vector& x) const {
    check_index(i);
    require_dim(x, dim(), "component_value");
    double f = component_value_impl(i, x);
    ledger().charge_function(1);
    require_finite(f, "component value");
    return f;
  }

  Vector component_grad(long long i, const Vector& x) const {
    check_index(i);
    require_dim(x, dim(), "component_grad");
    Vector g = component_grad_impl(i, x);
    ledger().charge_gradient(1);
    require_finite(g, "component gradient");
    return g;
  }

  Vector component_hvp(long long i, const Vector& x, const Vector& v) const {
    check_index(i);
    require_dim(x, dim(), "component_hvp");
    require_dim(v, dim(), "component_hvp direction");
    Vector hv = component_hvp_impl(i, x, v);
    ledger().charge_hvp(1);
    require_finite(hv, "component Hessian-vector product");
    return hv;
  }

 protected:
  virtual double component_value_impl(long long i, const Vector& x) const = 0;
  virtual Vector component_grad_impl(long long i, const Vector& x) const = 0;
  virtual Vector component_hvp_impl(long long i, const Vector& x,
                                    const Vector& v) const = 0;

  // Exact full-sum evaluation as the component mean; subclasses may
  // override with a fused loop.
  double eval_impl(const Vector& x) const override {
    double acc = 0.0;
    for (long long i = 0; i < n_; ++i) acc += component_value_impl(i, x);
    return acc / static_cast<double>(n_);
  }

  Vector grad_impl(const Vector& x) const override {
    Vector acc = Vector::Zero(dim());
    for (long long i = 0; i < n_; ++i) acc += component_grad_impl(i, x);
    return acc / static_cast<double>(n_);
  }

  Vector hvp_impl(const Vector& x, const Vector& v) const override {
    Vector acc = Vector::Zero(dim());
    for (long long i = 0; i < n_; ++i) acc += component_hvp_impl(i, x, v);
    return acc / static_cast<double>(n_);
  }

  friend Vector sampled_gradient(const FiniteSumOracle& problem,
                                 const Vector& x,
                                 const std::vector<long long>& sample);
  friend Vector sampled_hvp(const FiniteSumOracle& problem, const Vector& x,
                            const Vector& v,
                            const std::vector<long long>& sample);

 private:
  void check_index(long long i) const {
    if (i < 0 || i >= n_) {
      throw UsageError("component index " + std::to_string(i) +
                       " out of range [0, " + std::to_string(n_) + ")");
    }
  }

  long long n_;
};

}  // namespace newton
