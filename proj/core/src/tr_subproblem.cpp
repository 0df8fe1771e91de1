#include "newton/tr_subproblem.hpp"

#include <algorithm>
#include <cmath>

namespace newton {

TrModel::TrModel(Vector g, const LinearOperator& h, double delta)
    : TrModel(g, g, h, delta, false) {}

TrModel::TrModel(Vector g, Vector sign_ref, const LinearOperator& h,
                 double delta, bool zeroed)
    : g_(std::move(g)),
      sign_ref_(std::move(sign_ref)),
      h_(&h),
      delta_(delta),
      zeroed_(zeroed) {
  require_dim(g_, h.dim(), "TrModel gradient");
  if (!(delta_ > 0.0)) throw UsageError("TrModel: delta must be positive");
}

TrModel TrModel::zero_gradient(Vector pre_zero_g, const LinearOperator& h,
                               double delta) {
  Vector zero = Vector::Zero(pre_zero_g.size());
  return TrModel(std::move(zero), std::move(pre_zero_g), h, delta, true);
}

double TrModel::value(const Vector& s) const {
  return value_with_hs(s, h_->apply(s));
}

double TrModel::value_with_hs(const Vector& s, const Vector& hs) const {
  double quad = s.dot(hs);
  return zeroed_ ? quad : g_.dot(s) + 0.5 * quad;
}

namespace {

// Positive root of ||s + tau*d|| = delta, computed with the rationalized
// form of the larger quadratic root.
double boundary_intersection(const Vector& s, const Vector& d, double delta) {
  double a = d.squaredNorm();
  double b = s.dot(d);
  double c = s.squaredNorm() - delta * delta;
  if (a <= 0.0) throw NumericalError("boundary intersection: zero direction");
  double disc = std::sqrt(std::max(0.0, b * b - a * c));
  return b <= 0.0 ? (disc - b) / a : -c / (b + disc);
}

}  // namespace

SubproblemResult cauchy_point_tr(const TrModel& model) {
  if (model.gradient_zeroed()) {
    throw UsageError("cauchy_point_tr: gradient is zeroed; use the eigen path");
  }
  const Vector& g = model.gradient();
  double gnorm = g.norm();
  if (!(gnorm > 0.0)) throw UsageError("cauchy_point_tr: zero gradient");

  Vector dir = -g / gnorm;
  Vector hdir = model.hessian().apply(dir);
  double curvature = dir.dot(hdir);  // <g,Hg>/||g||^2

  double alpha = curvature <= 0.0 ? model.delta()
                                  : std::min(model.delta(), gnorm / curvature);

  SubproblemResult res;
  res.step = alpha * dir;
  res.model_value = -alpha * gnorm + 0.5 * alpha * alpha * curvature;
  res.status = StepStatus::cauchy_fallback;
  res.inner_iterations = 1;
  return res;
}

SubproblemResult eigen_point_tr(const TrModel& model, const EigEstimate& eig) {
  if (!(eig.lambda < 0.0)) {
    throw UsageError("eigen_point_tr: estimate has no negative curvature");
  }
  require_dim(eig.direction, model.gradient().size(), "eigen direction");

  double delta = model.delta();
  double lambda = eig.lambda;
  SubproblemResult res;
  res.status = StepStatus::eigen_step;
  res.inner_iterations = 1;

  if (model.gradient_zeroed()) {
    // m(alpha u) = alpha^2 <u,Hu>; both signs tie, orient against the
    // stored pre-zeroing gradient.
    double sign = model.sign_reference().dot(eig.direction) <= 0.0 ? 1.0 : -1.0;
    res.step = (sign * delta) * eig.direction;
    res.model_value = delta * delta * lambda;
  } else {
    // m(alpha u) = alpha <g,u> + alpha^2/2 <u,Hu> is concave, so the
    // minimum sits at alpha = +-delta; the linear term breaks the tie.
    double c = model.gradient().dot(eig.direction);
    double sign = c <= 0.0 ? 1.0 : -1.0;
    res.step = (sign * delta) * eig.direction;
    res.model_value = -delta * std::abs(c) + 0.5 * delta * delta * lambda;
  }
  return res;
}

SubproblemResult steihaug_cg(const TrModel& model, double tol, int max_iter) {
  if (model.gradient_zeroed()) {
    throw UsageError("steihaug_cg: gradient is zeroed; use the eigen path");
  }
  const Vector& g = model.gradient();
  double gnorm = g.norm();
  if (!(gnorm > 0.0)) throw UsageError("steihaug_cg: zero gradient");
  if (max_iter < 1) throw UsageError("steihaug_cg: max_iter must be >= 1");

  const LinearOperator& h = model.hessian();
  double delta = model.delta();
  Index d = g.size();

  Vector s = Vector::Zero(d);
  Vector r = -g;  // negative model gradient at s
  Vector p = r;
  double rr = r.squaredNorm();
  double threshold = tol * gnorm;

  SubproblemResult res;
  res.status = StepStatus::interior;
  res.converged = false;

  for (int it = 1; it <= max_iter; ++it) {
    res.inner_iterations = it;
    Vector hp = h.apply(p);
    double curvature = p.dot(hp);

    if (curvature <= 0.0) {
      double tau = boundary_intersection(s, p, delta);
      s += tau * p;
      res.status = StepStatus::negative_curvature_exit;
      res.converged = true;
      break;
    }

    double alpha = rr / curvature;
    if ((s + alpha * p).norm() >= delta) {
      double tau = boundary_intersection(s, p, delta);
      s += tau * p;
      res.status = StepStatus::boundary;
      res.converged = true;
      break;
    }

    s += alpha * p;
    r -= alpha * hp;
    double rr_next = r.squaredNorm();
    if (std::sqrt(rr_next) <= threshold) {
      res.status = StepStatus::interior;
      res.converged = true;
      break;
    }
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }

  res.step = std::move(s);
  res.model_value = model.value(res.step);
  return res;
}

SubproblemResult solve_tr_subproblem(const TrModel& model,
                                     const std::optional<EigEstimate>& eig,
                                     const TrSolveOptions& opts) {
  if (model.gradient_zeroed()) {
    if (!eig || !(eig->lambda < 0.0)) {
      throw UsageError(
          "solve_tr_subproblem: zeroed gradient without a negative-curvature "
          "direction; the termination check should have fired");
    }
    return eigen_point_tr(model, *eig);
  }

  double gnorm = model.gradient().norm();
  double tol = opts.tol > 0.0 ? opts.tol : std::min(0.5, std::sqrt(gnorm));
  int max_iter = opts.max_iterations > 0
                     ? opts.max_iterations
                     : static_cast<int>(std::min<Index>(
                           2 * model.gradient().size(), 250));

  SubproblemResult best = steihaug_cg(model, tol, max_iter);
  if (eig && eig->lambda < -opts.eps_h) {
    SubproblemResult eigen = eigen_point_tr(model, *eig);
    eigen.inner_iterations += best.inner_iterations;
    if (eigen.model_value < best.model_value) return eigen;
  }
  return best;
}

}  // namespace newton
