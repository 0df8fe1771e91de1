#include "newton/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace newton {

long long SampleSpec::resolve(long long n) const {
  if (size.has_value() == ratio.has_value()) {
    throw UsageError("SampleSpec: exactly one of size or ratio must be set");
  }
  long long resolved;
  if (size) {
    resolved = *size;
  } else {
    if (*ratio <= 0.0 || *ratio > 1.0) {
      throw UsageError("SampleSpec: ratio must be in (0, 1]");
    }
    resolved = static_cast<long long>(
        std::ceil(*ratio * static_cast<double>(n)));
  }
  if (resolved < 1) throw UsageError("SampleSpec: resolved size must be >= 1");
  return resolved;
}

SampleSizes lemma1_sample_sizes(const AccuracyBudget& budget,
                                double component_grad_bound,
                                double component_hessian_bound, Index dim) {
  auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!in_unit(budget.grad_error) || !in_unit(budget.hess_error) ||
      !in_unit(budget.failure_prob)) {
    throw UsageError("lemma1_sample_sizes: budget entries must lie in (0,1)");
  }
  if (component_grad_bound <= 0 || component_hessian_bound <= 0 || dim <= 0) {
    throw UsageError("lemma1_sample_sizes: bounds and dim must be positive");
  }
  double kg = component_grad_bound;
  double kh = component_hessian_bound;
  double s_g = 16.0 * kg * kg / (budget.grad_error * budget.grad_error) *
               std::log(1.0 / budget.failure_prob);
  double s_h = 16.0 * kh * kh / (budget.hess_error * budget.hess_error) *
               std::log(2.0 * static_cast<double>(dim) / budget.failure_prob);
  return {static_cast<long long>(std::ceil(s_g)),
          static_cast<long long>(std::ceil(s_h))};
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::mt19937_64 make_stream(std::uint64_t seed, long long iteration,
                            SampleRole role) {
  std::uint64_t key = splitmix64(seed);
  key = splitmix64(key ^ static_cast<std::uint64_t>(iteration));
  key = splitmix64(key ^ static_cast<std::uint64_t>(role));
  return std::mt19937_64(key);
}

std::vector<long long> draw_sample(long long n, long long size,
                                   std::mt19937_64& rng,
                                   bool with_replacement) {
  if (n <= 0) throw UsageError("draw_sample: n must be positive");
  if (size < 1) throw UsageError("draw_sample: size must be >= 1");
  std::vector<long long> sample;
  sample.reserve(size);
  if (with_replacement) {
    std::uniform_int_distribution<long long> pick(0, n - 1);
    for (long long k = 0; k < size; ++k) sample.push_back(pick(rng));
  } else {
    if (size > n) {
      throw UsageError("draw_sample: size exceeds n without replacement");
    }
    // Floyd's subset sampling, then shuffled order is irrelevant for means.
    std::vector<long long> chosen;
    chosen.reserve(size);
    for (long long j = n - size; j < n; ++j) {
      std::uniform_int_distribution<long long> pick(0, j);
      long long t = pick(rng);
      if (std::find(chosen.begin(), chosen.end(), t) != chosen.end()) {
        chosen.push_back(j);
      } else {
        chosen.push_back(t);
      }
    }
    sample = std::move(chosen);
  }
  return sample;
}

Vector sampled_gradient(const FiniteSumOracle& problem, const Vector& x,
                        const std::vector<long long>& sample) {
  if (sample.empty()) throw UsageError("sampled_gradient: empty sample");
  require_dim(x, problem.dim(), "sampled_gradient");
  Vector acc = Vector::Zero(problem.dim());
  for (long long i : sample) {
    if (i < 0 || i >= problem.num_components()) {
      throw UsageError("sampled_gradient: index out of range");
    }
    acc += problem.component_grad_impl(i, x);
  }
  problem.ledger().charge_gradient(static_cast<long long>(sample.size()));
  acc /= static_cast<double>(sample.size());
  require_finite(acc, "sampled gradient");
  return acc;
}

Vector sampled_hvp(const FiniteSumOracle& problem, const Vector& x,
                   const Vector& v, const std::vector<long long>& sample) {
  if (sample.empty()) throw UsageError("sampled_hvp: empty sample");
  require_dim(x, problem.dim(), "sampled_hvp");
  require_dim(v, problem.dim(), "sampled_hvp direction");
  Vector acc = Vector::Zero(problem.dim());
  for (long long i : sample) {
    if (i < 0 || i >= problem.num_components()) {
      throw UsageError("sampled_hvp: index out of range");
    }
    acc += problem.component_hvp_impl(i, x, v);
  }
  problem.ledger().charge_hvp(static_cast<long long>(sample.size()));
  acc /= static_cast<double>(sample.size());
  require_finite(acc, "sampled Hessian-vector product");
  return acc;
}

SampledHessianOperator::SampledHessianOperator(const FiniteSumOracle& problem,
                                               Vector x,
                                               std::vector<long long> sample)
    : problem_(&problem), x_(std::move(x)), sample_(std::move(sample)) {
  if (sample_.empty()) {
    throw UsageError("SampledHessianOperator: empty sample");
  }
  require_dim(x_, problem.dim(), "SampledHessianOperator");
}

Vector SampledHessianOperator::apply(const Vector& v) const {
  return sampled_hvp(*problem_, x_, v, sample_);
}

}  // namespace newton
