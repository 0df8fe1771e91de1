#pragma once

#include <optional>

#include "newton/linop.hpp"
#include "newton/negcurv.hpp"
#include "newton/trace.hpp"

namespace newton {

/// Outcome of one sub-problem solve.
struct SubproblemResult {
  Vector step;
  double model_value = 0.0;
  StepStatus status = StepStatus::interior;
  int inner_iterations = 0;
  bool converged = true;
};

/// Local quadratic model inside a ball of radius delta:
///   m(s) = <g,s> + 1/2 <s,Hs>          (standard)
///   m(s) = <s,Hs>                      (gradient-zeroed branch)
/// The zeroed branch keeps the pre-zeroing gradient around purely as a sign
/// reference for direction-reversible steps.
class TrModel {
 public:
  TrModel(Vector g, const LinearOperator& h, double delta);
  static TrModel zero_gradient(Vector pre_zero_g, const LinearOperator& h,
                               double delta);

  bool gradient_zeroed() const { return zeroed_; }
  /// The model gradient; the zero vector in the zeroed branch.
  const Vector& gradient() const { return g_; }
  /// Pre-zeroing gradient used only to orient sign-symmetric steps.
  const Vector& sign_reference() const { return sign_ref_; }
  const LinearOperator& hessian() const { return *h_; }
  double delta() const { return delta_; }

  /// Model value; costs one operator product.
  double value(const Vector& s) const;
  /// Model value reusing an already computed H*s.
  double value_with_hs(const Vector& s, const Vector& hs) const;

 private:
  TrModel(Vector g, Vector sign_ref, const LinearOperator& h, double delta,
          bool zeroed);

  Vector g_;
  Vector sign_ref_;
  const LinearOperator* h_;
  double delta_;
  bool zeroed_;
};

/// Exact minimizer along -g/||g|| clipped to the ball. Requires a nonzero,
/// non-zeroed gradient.
SubproblemResult cauchy_point_tr(const TrModel& model);

/// Minimizer along the approximate negative-curvature direction, |alpha|
/// = delta, sign oriented against the sign reference (zeroed branch) or by
/// the linear term. Requires eig.lambda < 0.
SubproblemResult eigen_point_tr(const TrModel& model, const EigEstimate& eig);

/// Steihaug-Toint truncated CG. Exits at the boundary on non-positive
/// curvature or radius violation, otherwise when the residual drops below
/// tol * ||g||. The first iterate already matches the Cauchy point, so the
/// returned model value never exceeds it.
SubproblemResult steihaug_cg(const TrModel& model, double tol, int max_iter);

struct TrSolveOptions {
  /// Residual tolerance; <= 0 selects min(0.5, sqrt(||g||)).
  double tol = 0.0;
  /// CG iteration cap; <= 0 selects min(2d, 250).
  int max_iterations = 0;
  /// Eigen-point comparison threshold: the eigen candidate is evaluated
  /// whenever an estimate with lambda < -eps_h is supplied.
  double eps_h = 0.0;
};

/// Dispatcher guaranteeing the returned step is at least as good as both
/// the Cauchy and (when negative curvature is known) eigen points.
SubproblemResult solve_tr_subproblem(const TrModel& model,
                                     const std::optional<EigEstimate>& eig,
                                     const TrSolveOptions& opts = {});

}  // namespace newton
