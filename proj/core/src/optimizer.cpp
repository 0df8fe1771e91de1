#include "newton/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include "newton/negcurv.hpp"
#include "newton/tr_subproblem.hpp"

namespace newton {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

void OptimizerConfig::validate() const {
  auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!in_unit(eps_g)) throw UsageError("config: eps_g must lie in (0,1)");
  if (!in_unit(eps_h)) throw UsageError("config: eps_h must lie in (0,1)");
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw UsageError("config: eta must lie in (0,1]");
  }
  if (!(gamma > 1.0)) throw UsageError("config: gamma must be > 1");
  if (!(delta0 > 0.0)) throw UsageError("config: delta0 must be positive");
  if (!(sigma0 > 0.0)) throw UsageError("config: sigma0 must be positive");
  if (!in_unit(nu)) throw UsageError("config: nu must lie in (0,1)");
  if (fixed_sigma && !(*fixed_sigma > 0.0)) {
    throw UsageError("config: fixed_sigma must be positive");
  }
  if (max_iterations < 1) {
    throw UsageError("config: max_iterations must be >= 1");
  }
  if (max_props && *max_props < 1) {
    throw UsageError("config: max_props must be >= 1");
  }
}

const char* to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::optimality: return "optimality";
    case TerminationReason::max_iterations: return "max-iterations";
    case TerminationReason::prop_budget: return "prop-budget";
    case TerminationReason::numerical: return "numerical";
  }
  return "unknown";
}

double compute_rho(double f_old, double f_new, double model_value) {
  if (!(model_value < 0.0)) {
    throw UsageError("compute_rho: model value must be negative");
  }
  return (f_old - f_new) / (-model_value);
}

namespace {

enum class MethodKind { trust_region, cubic_regularization };

struct LoopState {
  Vector x;
  double f = 0.0;
  double radius = 0.0;  // trust-region radius or cubic regularizer
  long long consecutive_degenerate = 0;
  long long consecutive_unsuccessful = 0;
};

RunResult run_loop(const ObjectiveOracle& oracle, const OptimizerConfig& cfg,
                   const Vector& x0, MethodKind kind) {
  cfg.validate();
  require_dim(x0, oracle.dim(), "starting point");
  const bool tr = kind == MethodKind::trust_region;

  const bool sample_grad = cfg.sampling.gradient.has_value();
  const bool sample_hess = cfg.sampling.hessian.has_value();
  const auto* finite_sum = dynamic_cast<const FiniteSumOracle*>(&oracle);
  if ((sample_grad || sample_hess) && finite_sum == nullptr) {
    throw UsageError("sampling requires a finite-sum oracle");
  }
  const long long n = oracle.num_components();

  PropLedger& ledger = oracle.ledger();
  LoopState st;
  st.x = x0;
  st.f = oracle.eval(st.x);
  st.radius = tr ? cfg.delta0
                 : (cfg.fixed_sigma ? *cfg.fixed_sigma : cfg.sigma0);

  RunResult out;
  out.reason = TerminationReason::max_iterations;

  std::vector<long long> grad_sample;
  std::vector<long long> hess_sample;

  for (long long t = 0; t < cfg.max_iterations; ++t) {
    if (cfg.max_props && ledger.cumulative() >= *cfg.max_props) {
      out.reason = TerminationReason::prop_budget;
      break;
    }
    auto tic = std::chrono::steady_clock::now();

    // Refresh the gradient and Hessian estimates.
    Vector g;
    if (sample_grad) {
      if (cfg.sampling.resample_each_iteration || grad_sample.empty()) {
        auto rng = make_stream(cfg.sampling.seed, t, SampleRole::gradient);
        grad_sample =
            draw_sample(n, cfg.sampling.gradient->resolve(n), rng,
                        cfg.sampling.with_replacement);
      }
      g = sampled_gradient(*finite_sum, st.x, grad_sample);
    } else {
      g = oracle.grad(st.x);
    }

    std::unique_ptr<LinearOperator> hessian;
    if (sample_hess) {
      if (cfg.sampling.resample_each_iteration || hess_sample.empty()) {
        auto rng = make_stream(cfg.sampling.seed, t, SampleRole::hessian);
        hess_sample =
            draw_sample(n, cfg.sampling.hessian->resolve(n), rng,
                        cfg.sampling.with_replacement);
      }
      hessian = std::make_unique<SampledHessianOperator>(*finite_sum, st.x,
                                                         hess_sample);
    } else {
      hessian = std::make_unique<FunctionOperator>(
          oracle.dim(),
          [&oracle, x = st.x](const Vector& v) { return oracle.hvp(x, v); });
    }

    double gnorm = g.norm();

    TraceRecord rec;
    rec.iteration = t;
    rec.loss = st.f;
    rec.grad_norm = gnorm;
    rec.radius_or_sigma = st.radius;
    rec.rho = kNaN;
    rec.lambda_hat = kNaN;

    // Termination test; the curvature side only runs when the gradient
    // side already holds, and never fires on a non-converged estimate.
    std::optional<EigEstimate> eig;
    if (gnorm <= cfg.eps_g) {
      auto rng = make_stream(cfg.seed, t, SampleRole::curvature);
      MinEigOptions eig_opts;
      eig_opts.quality = cfg.nu;
      eig = approx_min_eig(*hessian, eig_opts, rng);
      rec.lambda_hat = eig->lambda;
      if (eig->converged && eig->lambda >= -cfg.eps_h) {
        rec.props = ledger.cumulative();
        if (cfg.measure_time) rec.wall_ms = ms_since(tic);
        out.trace.push_back(rec);
        out.reason = TerminationReason::optimality;
        break;
      }
    }

    const bool zeroed = cfg.zero_small_gradient && gnorm <= cfg.eps_g;
    const double degenerate_threshold =
        100.0 * std::numeric_limits<double>::epsilon() *
        (1.0 + std::abs(st.f));

    // Solve the sub-problem; a zeroed model without a usable negative
    // curvature direction cannot move and counts as degenerate.
    SubproblemResult step;
    bool have_step = false;
    if (!zeroed || (eig && eig->lambda < 0.0)) {
      if (tr) {
        TrSolveOptions opts;
        opts.eps_h = cfg.eps_h;
        TrModel model = zeroed
                            ? TrModel::zero_gradient(g, *hessian, st.radius)
                            : TrModel(g, *hessian, st.radius);
        step = solve_tr_subproblem(model, eig, opts);
      } else {
        ArcSolveOptions opts;
        opts.mode = cfg.arc_mode;
        opts.eps_h = cfg.eps_h;
        CubicModel model =
            zeroed ? CubicModel::zero_gradient(g, *hessian, st.radius)
                   : CubicModel(g, *hessian, st.radius);
        step = solve_cubic_subproblem(model, eig, opts);
      }
      have_step = true;
      rec.step_norm = step.step.norm();
      rec.status = step.status;
      rec.inner_iterations = step.inner_iterations;
    }

    bool success = false;
    bool degenerate = !have_step || -step.model_value <= degenerate_threshold;
    if (!degenerate) {
      double f_trial = std::numeric_limits<double>::infinity();
      bool trial_finite = true;
      try {
        f_trial = oracle.eval(st.x + step.step);
      } catch (const NumericalError&) {
        // Oracle overflow at the trial point: reject the step.
        f_trial = std::numeric_limits<double>::infinity();
        trial_finite = false;
      }
      rec.rho = trial_finite
                    ? compute_rho(st.f, f_trial, step.model_value)
                    : -std::numeric_limits<double>::infinity();
      success = rec.rho >= cfg.eta;
      if (success) {
        st.x += step.step;
        st.f = f_trial;
      }
    }
    rec.success = success;

    // gamma-recursions, verbatim: TR grows the radius on success, ARC
    // shrinks the regularizer.
    if (tr) {
      st.radius = success ? st.radius * cfg.gamma : st.radius / cfg.gamma;
    } else if (!cfg.fixed_sigma) {
      st.radius = success ? st.radius / cfg.gamma : st.radius * cfg.gamma;
    }

    rec.props = ledger.cumulative();
    if (cfg.measure_time) rec.wall_ms = ms_since(tic);
    out.trace.push_back(rec);

    st.consecutive_degenerate = degenerate ? st.consecutive_degenerate + 1 : 0;
    st.consecutive_unsuccessful = success ? 0 : st.consecutive_unsuccessful + 1;
    if (st.consecutive_degenerate >= 50) {
      out.reason = TerminationReason::numerical;
      break;
    }
    if (st.consecutive_unsuccessful >= 50 &&
        (tr ? st.radius < 1e-14 : st.radius > 1e14)) {
      out.reason = TerminationReason::numerical;
      break;
    }
  }

  out.x = std::move(st.x);
  out.final_loss = st.f;
  out.total_props = ledger.cumulative();
  return out;
}

}  // namespace

RunResult run_tr(const ObjectiveOracle& oracle, const OptimizerConfig& config,
                 const Vector& x0) {
  return run_loop(oracle, config, x0, MethodKind::trust_region);
}

RunResult run_arc(const ObjectiveOracle& oracle, const OptimizerConfig& config,
                  const Vector& x0) {
  return run_loop(oracle, config, x0, MethodKind::cubic_regularization);
}

}  // namespace newton
