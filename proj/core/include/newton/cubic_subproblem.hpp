#pragma once

#include <optional>

#include "newton/krylov.hpp"
#include "newton/linop.hpp"
#include "newton/negcurv.hpp"
#include "newton/tr_subproblem.hpp"

namespace newton {

/// Cubic-regularized local model:
///   m(s) = <g,s> + 1/2 <s,Hs> + sigma/3 ||s||^3     (standard)
///   m(s) = <s,Hs> + 2 sigma/3 ||s||^3               (gradient-zeroed branch)
class CubicModel {
 public:
  CubicModel(Vector g, const LinearOperator& h, double sigma);
  static CubicModel zero_gradient(Vector pre_zero_g, const LinearOperator& h,
                                  double sigma);

  bool gradient_zeroed() const { return zeroed_; }
  const Vector& gradient() const { return g_; }
  const Vector& sign_reference() const { return sign_ref_; }
  const LinearOperator& hessian() const { return *h_; }
  double sigma() const { return sigma_; }

  double value(const Vector& s) const;
  double value_with_hs(const Vector& s, const Vector& hs) const;

 private:
  CubicModel(Vector g, Vector sign_ref, const LinearOperator& h, double sigma,
             bool zeroed);

  Vector g_;
  Vector sign_ref_;
  const LinearOperator* h_;
  double sigma_;
  bool zeroed_;
};

/// Closed-form minimizer along -g: with K = <g,Hg>/||g||^2 the step norm is
/// (sqrt(K^2 + 4 sigma ||g||) - K) / (2 sigma). Requires a nonzero,
/// non-zeroed gradient.
SubproblemResult cauchy_point_arc(const CubicModel& model);

/// Exact minimizer along the approximate negative-curvature direction. For
/// the zeroed branch the step norm is |lambda|/sigma; for the standard
/// branch the 1-D stationarity quadratic is solved after orienting u so the
/// linear term is non-positive. Requires eig.lambda < 0.
SubproblemResult eigen_point_arc(const CubicModel& model,
                                 const EigEstimate& eig);

/// Global minimizer of psi(y) = beta0 y_1 + 1/2 y'Ty + sigma/3 ||y||^3 for
/// symmetric tridiagonal T given by its diagonal and sub-diagonal.
struct SubspaceCubicSolution {
  Vector y;
  double lambda;  // multiplier, sigma * ||y||, with T + lambda I psd
};
SubspaceCubicSolution subspace_cubic_solve(const Vector& diag,
                                           const Vector& offdiag, double beta0,
                                           double sigma, double tol = 0.0);

struct LanczosCubicOptions {
  /// Krylov dimension cap; <= 0 selects min(d, 200).
  int max_dim = 0;
  /// Residual test factor: accept once ||grad m(s)|| <=
  /// (min(1, ||s||) * theta_factor) * ||g||.
  double theta_factor = 0.2;
};

/// Generalized Lanczos method: grows a Krylov space from g, solves the
/// projected cubic model exactly at each dimension, and stops once the
/// lifted step passes the residual test. The first dimension already
/// contains the Cauchy point, so the model value never exceeds it.
SubproblemResult lanczos_cubic(const CubicModel& model,
                               const LanczosCubicOptions& opts = {});

enum class ArcSolveMode { cauchy, lanczos };

struct ArcSolveOptions {
  ArcSolveMode mode = ArcSolveMode::lanczos;
  LanczosCubicOptions lanczos;
  /// Eigen-point comparison threshold, as in TrSolveOptions.
  double eps_h = 0.0;
};

/// Dispatcher. Zeroed gradient takes the eigen point; otherwise the chosen
/// solver runs and, when negative curvature below -eps_h is known (from the
/// caller or recovered from the Krylov data), the eigen point competes on
/// model value.
SubproblemResult solve_cubic_subproblem(const CubicModel& model,
                                        const std::optional<EigEstimate>& eig,
                                        const ArcSolveOptions& opts = {});

}  // namespace newton
