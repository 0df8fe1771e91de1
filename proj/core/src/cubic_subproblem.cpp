#include "newton/cubic_subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include <Eigen/Eigenvalues>

namespace newton {

CubicModel::CubicModel(Vector g, const LinearOperator& h, double sigma)
    : CubicModel(g, g, h, sigma, false) {}

CubicModel::CubicModel(Vector g, Vector sign_ref, const LinearOperator& h,
                       double sigma, bool zeroed)
    : g_(std::move(g)),
      sign_ref_(std::move(sign_ref)),
      h_(&h),
      sigma_(sigma),
      zeroed_(zeroed) {
  require_dim(g_, h.dim(), "CubicModel gradient");
  if (!(sigma_ > 0.0)) throw UsageError("CubicModel: sigma must be positive");
}

CubicModel CubicModel::zero_gradient(Vector pre_zero_g,
                                     const LinearOperator& h, double sigma) {
  Vector zero = Vector::Zero(pre_zero_g.size());
  return CubicModel(std::move(zero), std::move(pre_zero_g), h, sigma, true);
}

double CubicModel::value(const Vector& s) const {
  return value_with_hs(s, h_->apply(s));
}

double CubicModel::value_with_hs(const Vector& s, const Vector& hs) const {
  double quad = s.dot(hs);
  double cube = s.norm();
  cube = cube * cube * cube;
  if (zeroed_) return quad + 2.0 * sigma_ / 3.0 * cube;
  return g_.dot(s) + 0.5 * quad + sigma_ / 3.0 * cube;
}

namespace {

// Positive root of sigma*a^2 + K*a - gnorm = 0, rationalized when K > 0.
double cauchy_step_norm(double curvature, double gnorm, double sigma) {
  double disc = std::sqrt(curvature * curvature + 4.0 * sigma * gnorm);
  if (curvature >= 0.0) return 2.0 * gnorm / (disc + curvature);
  return (disc - curvature) / (2.0 * sigma);
}

}  // namespace

SubproblemResult cauchy_point_arc(const CubicModel& model) {
  if (model.gradient_zeroed()) {
    throw UsageError("cauchy_point_arc: gradient is zeroed; use the eigen path");
  }
  const Vector& g = model.gradient();
  double gnorm = g.norm();
  if (!(gnorm > 0.0)) throw UsageError("cauchy_point_arc: zero gradient");

  Vector dir = -g / gnorm;
  Vector hdir = model.hessian().apply(dir);
  double curvature = dir.dot(hdir);  // <g,Hg>/||g||^2
  double alpha = cauchy_step_norm(curvature, gnorm, model.sigma());

  SubproblemResult res;
  res.step = alpha * dir;
  res.model_value = -alpha * gnorm + 0.5 * alpha * alpha * curvature +
                    model.sigma() / 3.0 * alpha * alpha * alpha;
  res.status = StepStatus::cauchy_fallback;
  res.inner_iterations = 1;
  return res;
}

SubproblemResult eigen_point_arc(const CubicModel& model,
                                 const EigEstimate& eig) {
  if (!(eig.lambda < 0.0)) {
    throw UsageError("eigen_point_arc: estimate has no negative curvature");
  }
  require_dim(eig.direction, model.gradient().size(), "eigen direction");
  double sigma = model.sigma();
  double lambda = eig.lambda;

  SubproblemResult res;
  res.status = StepStatus::eigen_step;
  res.inner_iterations = 1;

  if (model.gradient_zeroed()) {
    // Stationarity of alpha^2 lambda + 2 sigma/3 |alpha|^3 gives
    // |alpha| = |lambda| / sigma; signs tie, orient by the reference.
    double alpha = -lambda / sigma;
    double sign =
        model.sign_reference().dot(eig.direction) <= 0.0 ? 1.0 : -1.0;
    res.step = (sign * alpha) * eig.direction;
    res.model_value =
        alpha * alpha * lambda + 2.0 * sigma / 3.0 * alpha * alpha * alpha;
  } else {
    // Orient u so the linear term c = <g,u> is non-positive; every alpha > 0
    // then beats its mirror image. Stationarity on the positive ray:
    // c + lambda*alpha + sigma*alpha^2 = 0.
    Vector u = eig.direction;
    double c = model.gradient().dot(u);
    if (c > 0.0) {
      u = -u;
      c = -c;
    }
    double disc = std::sqrt(lambda * lambda - 4.0 * sigma * c);
    double alpha = (disc - lambda) / (2.0 * sigma);
    res.step = alpha * u;
    res.model_value = c * alpha + 0.5 * alpha * alpha * lambda +
                      sigma / 3.0 * alpha * alpha * alpha;
  }
  return res;
}

namespace {

// psi(y) restricted to the eigenbasis of T: y_i(mu) = -b_i / (mu_i + mu).
struct SecularWorkspace {
  Vector eigenvalues;
  Matrix eigenvectors;
  Vector b;  // eigenbasis coordinates of beta0 * e1
};

double norm_y(const SecularWorkspace& w, double mu) {
  double acc = 0.0;
  for (Index i = 0; i < w.b.size(); ++i) {
    double den = w.eigenvalues[i] + mu;
    if (w.b[i] != 0.0) acc += (w.b[i] / den) * (w.b[i] / den);
  }
  return std::sqrt(acc);
}

// d||y||/dmu = -sum b_i^2/(mu_i+mu)^3 / ||y||
double norm_y_derivative(const SecularWorkspace& w, double mu, double ny) {
  double acc = 0.0;
  for (Index i = 0; i < w.b.size(); ++i) {
    double den = w.eigenvalues[i] + mu;
    if (w.b[i] != 0.0) acc += w.b[i] * w.b[i] / (den * den * den);
  }
  return -acc / ny;
}

}  // namespace

SubspaceCubicSolution subspace_cubic_solve(const Vector& diag,
                                           const Vector& offdiag, double beta0,
                                           double sigma, double tol) {
  Index k = diag.size();
  if (k < 1) throw UsageError("subspace_cubic_solve: empty tridiagonal");
  if (offdiag.size() != k - 1) {
    throw UsageError("subspace_cubic_solve: offdiagonal must have k-1 entries");
  }
  if (!(sigma > 0.0)) {
    throw UsageError("subspace_cubic_solve: sigma must be positive");
  }
  if (beta0 < 0.0) {
    throw UsageError("subspace_cubic_solve: beta0 must be non-negative");
  }
  if (tol <= 0.0) tol = 1e-12 * std::max(1.0, sigma);

  Eigen::SelfAdjointEigenSolver<Matrix> es;
  es.computeFromTridiagonal(diag, offdiag);
  SecularWorkspace w;
  w.eigenvalues = es.eigenvalues();
  w.eigenvectors = es.eigenvectors();
  w.b = beta0 * w.eigenvectors.row(0).transpose();

  double mu_min = w.eigenvalues[0];
  double lambda_floor = std::max(0.0, -mu_min);

  if (beta0 == 0.0) {
    // Pure curvature problem: zero when psd, otherwise a bottom
    // eigenvector scaled to the multiplier equation.
    SubspaceCubicSolution sol;
    if (mu_min >= 0.0) {
      sol.y = Vector::Zero(k);
      sol.lambda = 0.0;
    } else {
      sol.lambda = -mu_min;
      Vector coeff = Vector::Zero(k);
      coeff[0] = sol.lambda / sigma;
      sol.y = w.eigenvectors * coeff;
    }
    return sol;
  }

  // Bottom eigenspace and the component of beta0*e1 living there; below the
  // decoupling threshold those coordinates are dropped outright, which keeps
  // every secular evaluation finite down to lambda_floor.
  double cluster_tol = 1e-10 * std::max(1.0, std::abs(mu_min));
  double bottom_sq = 0.0;
  Index bottom_end = 0;
  while (bottom_end < k &&
         w.eigenvalues[bottom_end] <= mu_min + cluster_tol) {
    bottom_sq += w.b[bottom_end] * w.b[bottom_end];
    ++bottom_end;
  }
  bool decoupled = std::sqrt(bottom_sq) < 1e-12 * beta0;
  if (decoupled) {
    for (Index i = 0; i < bottom_end; ++i) w.b[i] = 0.0;
  }

  auto assemble = [&](double lambda) {
    Vector coeff = Vector::Zero(k);
    for (Index i = 0; i < k; ++i) {
      double den = w.eigenvalues[i] + lambda;
      coeff[i] = den > 0.0 && w.b[i] != 0.0 ? -w.b[i] / den : 0.0;
    }
    return coeff;
  };

  // Hard case: no root of sigma*||y(lambda)|| = lambda above the floor, so
  // fix lambda at the floor and add the missing norm on the bottom space.
  if (mu_min < 0.0 && decoupled) {
    double ny_floor = norm_y(w, lambda_floor);
    if (sigma * ny_floor <= lambda_floor) {
      double target = lambda_floor / sigma;
      double tau_sq = std::max(0.0, target * target - ny_floor * ny_floor);
      Vector y = w.eigenvectors * assemble(lambda_floor);
      Vector v_min = w.eigenvectors.col(0);
      if (v_min[0] > 0.0) v_min = -v_min;  // keep <e1, y> <= 0
      y += std::sqrt(tau_sq) * v_min;
      return {y, lambda_floor};
    }
  }

  // Bracket the root of phi(lambda) = sigma*||y(lambda)|| - lambda, which is
  // strictly decreasing on (lambda_floor, inf).
  double lo = lambda_floor;
  double hi = std::max(1.0, 2.0 * lambda_floor + sigma * beta0);
  while (sigma * norm_y(w, hi) > hi) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) {
      throw NumericalError("subspace_cubic_solve: root bracket diverged", hi);
    }
  }

  // Safeguarded Newton on the convex secular form
  // w(lambda) = 1/||y(lambda)|| - sigma/lambda.
  double lambda = 0.5 * (lo + hi);
  if (!(lambda > lambda_floor)) {
    lambda = lambda_floor + 0.5 * (hi - lambda_floor);
  }
  int iter = 0;
  for (; iter < 200; ++iter) {
    double ny = norm_y(w, lambda);
    double phi = sigma * ny - lambda;
    double width_stop =
        4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi);
    if (std::abs(phi) <= tol * lambda || (hi - lo) <= width_stop) break;
    if (phi > 0.0) {
      lo = lambda;  // root is to the right
    } else {
      hi = lambda;
    }
    double dny = norm_y_derivative(w, lambda, ny);
    double wval = 1.0 / ny - sigma / lambda;
    double wder = -dny / (ny * ny) + sigma / (lambda * lambda);
    double next = lambda - wval / wder;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    lambda = next;
  }
  if (iter >= 200) {
    throw NumericalError(
        "subspace_cubic_solve: secular iteration did not converge", lambda);
  }

  SubspaceCubicSolution sol;
  sol.y = w.eigenvectors * assemble(lambda);
  sol.lambda = lambda;
  return sol;
}

namespace {

SubproblemResult lanczos_cubic_impl(
    const CubicModel& model, const LanczosCubicOptions& opts,
    std::unique_ptr<KrylovFactorization>* keep) {
  if (model.gradient_zeroed()) {
    throw UsageError("lanczos_cubic: gradient is zeroed; use the eigen path");
  }
  const Vector& g = model.gradient();
  double gnorm = g.norm();
  if (!(gnorm > 0.0)) throw UsageError("lanczos_cubic: zero gradient");

  Index d = g.size();
  int max_dim = opts.max_dim > 0
                    ? opts.max_dim
                    : static_cast<int>(std::min<Index>(d, 200));

  auto krylov = std::make_unique<KrylovFactorization>(model.hessian(), g);
  double sigma = model.sigma();

  SubproblemResult res;
  res.converged = false;
  res.status = StepStatus::interior;

  while (krylov->k() < max_dim && krylov->extend()) {
    SubspaceCubicSolution sub = subspace_cubic_solve(
        krylov->diagonal(), krylov->offdiagonal(), gnorm, sigma);

    Vector s = krylov->lift(sub.y);
    double snorm = s.norm();
    // The residual check goes through a fresh operator product so it
    // measures the true lifted gradient, not the projected one.
    Vector hs = model.hessian().apply(s);
    Vector grad_m = g + hs + sigma * snorm * s;
    res.step = std::move(s);
    res.model_value = model.value_with_hs(res.step, hs);
    res.inner_iterations = krylov->k();

    double threshold =
        std::min(1.0, snorm) * opts.theta_factor * gnorm;
    if (grad_m.norm() <= threshold) {
      res.converged = true;
      break;
    }
    if (krylov->exhausted()) break;
  }

  if (res.step.size() == 0) {
    throw NumericalError("lanczos_cubic: no Krylov step taken");
  }
  if (keep) *keep = std::move(krylov);
  return res;
}

}  // namespace

SubproblemResult lanczos_cubic(const CubicModel& model,
                               const LanczosCubicOptions& opts) {
  return lanczos_cubic_impl(model, opts, nullptr);
}

SubproblemResult solve_cubic_subproblem(const CubicModel& model,
                                        const std::optional<EigEstimate>& eig,
                                        const ArcSolveOptions& opts) {
  if (model.gradient_zeroed()) {
    if (!eig || !(eig->lambda < 0.0)) {
      throw UsageError(
          "solve_cubic_subproblem: zeroed gradient without a "
          "negative-curvature direction; the termination check should have "
          "fired");
    }
    return eigen_point_arc(model, *eig);
  }

  if (opts.mode == ArcSolveMode::cauchy) {
    return cauchy_point_arc(model);
  }

  std::unique_ptr<KrylovFactorization> krylov;
  SubproblemResult best = lanczos_cubic_impl(model, opts.lanczos, &krylov);

  std::optional<EigEstimate> candidate = eig;
  if (!candidate && krylov && krylov->k() > 1) {
    // Recover an approximate bottom eigenpair from the Krylov data; one
    // extra product pins the Rayleigh quotient of the lifted direction.
    Eigen::SelfAdjointEigenSolver<Matrix> es;
    es.computeFromTridiagonal(krylov->diagonal(), krylov->offdiagonal());
    if (es.eigenvalues()[0] < -opts.eps_h) {
      EigEstimate recovered;
      recovered.direction = krylov->lift(es.eigenvectors().col(0));
      recovered.direction.normalize();
      recovered.lambda =
          recovered.direction.dot(model.hessian().apply(recovered.direction));
      recovered.converged = false;
      recovered.iterations = krylov->k();
      if (recovered.lambda < 0.0) candidate = std::move(recovered);
    }
  }

  if (candidate && candidate->lambda < -opts.eps_h) {
    SubproblemResult eigen = eigen_point_arc(model, *candidate);
    eigen.inner_iterations += best.inner_iterations;
    if (eigen.model_value < best.model_value) return eigen;
  }
  return best;
}

}  // namespace newton
