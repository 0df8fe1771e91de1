#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "newton/data_io.hpp"
#include "newton/oracle.hpp"

namespace newton {

/// Smoothness constants known analytically for a problem. Used only by
/// tests and the sample-size calculator, never by the optimizers.
struct TheoryConstants {
  double hessian_lipschitz = 0.0;        // L
  double hessian_norm_bound = 0.0;       // sup ||H(x)||
  double component_grad_bound = 0.0;     // sup_i ||grad f_i||
  double component_hessian_bound = 0.0;  // sup_i ||hess f_i||
};

/// Binary classification by nonlinear least squares with a sigmoid link:
/// F(w) = (1/n) sum_i (y_i - phi(<x_i, w>))^2, phi(z) = 1/(1+e^-z).
/// Squared loss keeps the objective non-convex; each component Hessian has
/// rank at most one.
class NlsClassificationProblem final : public FiniteSumOracle {
 public:
  explicit NlsClassificationProblem(std::shared_ptr<const Dataset> data,
                                    PropWeights weights = {});

  const Dataset& data() const { return *data_; }

  /// Provable (not tight) bounds; gradient factor |2(y-phi)phi'| <= 1/2 and
  /// curvature factor |h''| <= 1/2 times the row-norm extrema.
  TheoryConstants theory_constants() const;

 protected:
  double component_value_impl(long long i, const Vector& w) const override;
  Vector component_grad_impl(long long i, const Vector& w) const override;
  Vector component_hvp_impl(long long i, const Vector& w,
                            const Vector& v) const override;

  double eval_impl(const Vector& w) const override;
  Vector grad_impl(const Vector& w) const override;
  Vector hvp_impl(const Vector& w, const Vector& v) const override;

 private:
  std::shared_ptr<const Dataset> data_;
};

/// F(x) = 1/2 x'Ax + b'x with A symmetric.
class QuadraticProblem final : public ObjectiveOracle {
 public:
  QuadraticProblem(Matrix a, Vector b, PropWeights weights = {});

  const Matrix& a() const { return a_; }
  TheoryConstants theory_constants() const;

 protected:
  double eval_impl(const Vector& x) const override;
  Vector grad_impl(const Vector& x) const override;
  Vector hvp_impl(const Vector& x, const Vector& v) const override;

 private:
  Matrix a_;
  Vector b_;
};

/// The classic banana valley, d = 2: F(x) = (a-x1)^2 + b(x2-x1^2)^2.
class RosenbrockProblem final : public ObjectiveOracle {
 public:
  explicit RosenbrockProblem(double a = 1.0, double b = 100.0,
                             PropWeights weights = {});

 protected:
  double eval_impl(const Vector& x) const override;
  Vector grad_impl(const Vector& x) const override;
  Vector hvp_impl(const Vector& x, const Vector& v) const override;

 private:
  double a_;
  double b_;
};

/// Separable problem with prescribed axis curvatures,
///   F(x) = 1/2 sum_j c_j x_j^2 + (q/4) sum_j x_j^4.
/// With q = 0 this is the pure quadratic saddle; a positive quartic
/// coefficient bounds it below so optimizers can both escape the saddle at
/// the origin and certify a second-order point afterwards.
class SaddleProblem final : public ObjectiveOracle {
 public:
  explicit SaddleProblem(Vector curvatures, double quartic = 0.0,
                         PropWeights weights = {});

  const Vector& curvatures() const { return curvatures_; }
  double quartic() const { return quartic_; }

  /// Exact constants; only available for the pure quadratic form.
  std::optional<TheoryConstants> theory_constants() const;

 protected:
  double eval_impl(const Vector& x) const override;
  Vector grad_impl(const Vector& x) const override;
  Vector hvp_impl(const Vector& x, const Vector& v) const override;

 private:
  Vector curvatures_;
  double quartic_;
};

/// Requires at least one strictly negative curvature.
SaddleProblem make_saddle_problem(Vector curvatures, double quartic = 0.0);

/// Deterministic synthetic binary classification data for benchmark runs
/// when no LIBSVM file is at hand: dense standard normal rows scaled by
/// 1/sqrt(d), labels sampled from the sigmoid of a hidden linear model.
Dataset make_synthetic_classification(Index n, Index d, std::uint64_t seed);

}  // namespace newton
