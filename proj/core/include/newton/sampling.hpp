#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "newton/linop.hpp"
#include "newton/oracle.hpp"

namespace newton {

/// Requested batch size for one estimator, either absolute or as a
/// fraction of the component count.
struct SampleSpec {
  std::optional<long long> size;
  std::optional<double> ratio;  // in (0, 1]

  /// Resolved size in [1, n] (upper bound enforced only without
  /// replacement by the caller).
  long long resolve(long long n) const;
};

/// Sub-sampling policy for a finite-sum run. An unset spec means the
/// corresponding quantity is computed exactly.
struct SampleConfig {
  std::optional<SampleSpec> gradient;
  std::optional<SampleSpec> hessian;
  bool with_replacement = true;
  bool resample_each_iteration = true;
  std::uint64_t seed = 42;
};

/// Accuracy targets for the estimators: gradient error bound, Hessian
/// spectral-norm error bound, and failure probability, all in (0,1).
struct AccuracyBudget {
  double grad_error;
  double hess_error;
  double failure_prob;
};

struct SampleSizes {
  long long grad;
  long long hess;
};

/// Uniform-sampling batch sizes sufficient for the accuracy budget with
/// probability at least 1 - failure_prob:
///   |S_g| = ceil(16 K_g^2 / eps_g^2 * log(1/delta))
///   |S_H| = ceil(16 K_H^2 / eps_H^2 * log(2d/delta))
/// where K_g, K_H bound the per-component gradient norm and Hessian norm.
SampleSizes lemma1_sample_sizes(const AccuracyBudget& budget,
                                double component_grad_bound,
                                double component_hessian_bound, Index dim);

/// Independent RNG stream keyed by (seed, iteration, role) so every batch
/// draw is reproducible and decoupled from the others.
enum class SampleRole : std::uint64_t {
  gradient = 1,
  hessian = 2,
  curvature = 3,  // start vectors for eigenvalue estimation
};
std::mt19937_64 make_stream(std::uint64_t seed, long long iteration,
                            SampleRole role);

/// Uniform i.i.d. index draws (multiset); set with_replacement = false for
/// a uniform subset, which requires size <= n.
std::vector<long long> draw_sample(long long n, long long size,
                                   std::mt19937_64& rng,
                                   bool with_replacement = true);

/// Mean of component gradients over the batch; charges the ledger one
/// gradient propagation per batch element.
Vector sampled_gradient(const FiniteSumOracle& problem, const Vector& x,
                        const std::vector<long long>& sample);

/// Mean of component Hessian-vector products over the batch.
Vector sampled_hvp(const FiniteSumOracle& problem, const Vector& x,
                   const Vector& v, const std::vector<long long>& sample);

/// The sub-sampled Hessian as a fixed linear operator: the batch is frozen
/// at construction so every product within one outer iteration sees the
/// same operator.
class SampledHessianOperator final : public LinearOperator {
 public:
  SampledHessianOperator(const FiniteSumOracle& problem, Vector x,
                         std::vector<long long> sample);

  Index dim() const override { return problem_->dim(); }
  Vector apply(const Vector& v) const override;

  const std::vector<long long>& sample() const { return sample_; }

 private:
  const FiniteSumOracle* problem_;
  Vector x_;
  std::vector<long long> sample_;
};

}  // namespace newton
