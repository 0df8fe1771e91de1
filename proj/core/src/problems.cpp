#include "newton/problems.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

namespace newton {

namespace {

// Overflow-safe sigmoid and derivatives.
double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

struct ResidualCurvature {
  double value;       // (y - phi)^2
  double d1;          // first derivative w.r.t. z
  double d2;          // second derivative w.r.t. z
};

ResidualCurvature residual_curvature(double y, double z) {
  double phi = sigmoid(z);
  double phi1 = phi * (1.0 - phi);
  double phi2 = phi1 * (1.0 - 2.0 * phi);
  double r = y - phi;
  return {r * r, -2.0 * r * phi1, 2.0 * phi1 * phi1 - 2.0 * r * phi2};
}

}  // namespace

NlsClassificationProblem::NlsClassificationProblem(
    std::shared_ptr<const Dataset> data, PropWeights weights)
    : FiniteSumOracle(data ? data->d : 0, data ? data->n : 0, weights),
      data_(std::move(data)) {
  for (std::uint8_t y : data_->labels) {
    if (y > 1) throw UsageError("labels must be 0 or 1");
  }
}

double NlsClassificationProblem::component_value_impl(long long i,
                                                      const Vector& w) const {
  double z = data_->row_dot(static_cast<Index>(i), w);
  return residual_curvature(data_->labels[i], z).value;
}

Vector NlsClassificationProblem::component_grad_impl(long long i,
                                                     const Vector& w) const {
  Index row = static_cast<Index>(i);
  double z = data_->row_dot(row, w);
  double d1 = residual_curvature(data_->labels[i], z).d1;
  Vector g = Vector::Zero(dim());
  data_->row_axpy(row, d1, g);
  return g;
}

Vector NlsClassificationProblem::component_hvp_impl(long long i,
                                                    const Vector& w,
                                                    const Vector& v) const {
  Index row = static_cast<Index>(i);
  double z = data_->row_dot(row, w);
  double d2 = residual_curvature(data_->labels[i], z).d2;
  Vector hv = Vector::Zero(dim());
  data_->row_axpy(row, d2 * data_->row_dot(row, v), hv);
  return hv;
}

double NlsClassificationProblem::eval_impl(const Vector& w) const {
  double acc = 0.0;
  for (Index i = 0; i < data_->n; ++i) {
    acc += residual_curvature(data_->labels[i], data_->row_dot(i, w)).value;
  }
  return acc / static_cast<double>(data_->n);
}

Vector NlsClassificationProblem::grad_impl(const Vector& w) const {
  Vector g = Vector::Zero(dim());
  for (Index i = 0; i < data_->n; ++i) {
    double d1 = residual_curvature(data_->labels[i], data_->row_dot(i, w)).d1;
    data_->row_axpy(i, d1, g);
  }
  return g / static_cast<double>(data_->n);
}

Vector NlsClassificationProblem::hvp_impl(const Vector& w,
                                          const Vector& v) const {
  Vector hv = Vector::Zero(dim());
  for (Index i = 0; i < data_->n; ++i) {
    double d2 = residual_curvature(data_->labels[i], data_->row_dot(i, w)).d2;
    data_->row_axpy(i, d2 * data_->row_dot(i, v), hv);
  }
  return hv / static_cast<double>(data_->n);
}

TheoryConstants NlsClassificationProblem::theory_constants() const {
  double max_row_norm_sq = 0.0;
  for (Index i = 0; i < data_->n; ++i) {
    max_row_norm_sq = std::max(max_row_norm_sq, data_->row_squared_norm(i));
  }
  double r = std::sqrt(max_row_norm_sq);
  TheoryConstants c;
  c.component_grad_bound = 0.5 * r;
  c.component_hessian_bound = 0.5 * max_row_norm_sq;
  c.hessian_norm_bound = c.component_hessian_bound;
  // |h'''(z)| <= 1, so the rank-one component Hessians are r^3-Lipschitz.
  c.hessian_lipschitz = max_row_norm_sq * r;
  return c;
}

QuadraticProblem::QuadraticProblem(Matrix a, Vector b, PropWeights weights)
    : ObjectiveOracle(a.rows(), weights), a_(std::move(a)), b_(std::move(b)) {
  if (a_.rows() != a_.cols()) throw UsageError("quadratic: A must be square");
  require_dim(b_, a_.rows(), "quadratic linear term");
  double scale = std::max(1.0, a_.cwiseAbs().maxCoeff());
  if ((a_ - a_.transpose()).cwiseAbs().maxCoeff() > 16 *
      std::numeric_limits<double>::epsilon() * scale) {
    throw UsageError("quadratic: A must be symmetric");
  }
}

double QuadraticProblem::eval_impl(const Vector& x) const {
  return 0.5 * x.dot(a_ * x) + b_.dot(x);
}

Vector QuadraticProblem::grad_impl(const Vector& x) const {
  return a_ * x + b_;
}

Vector QuadraticProblem::hvp_impl(const Vector&, const Vector& v) const {
  return a_ * v;
}

TheoryConstants QuadraticProblem::theory_constants() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a_, Eigen::EigenvaluesOnly);
  double norm = es.eigenvalues().cwiseAbs().maxCoeff();
  return {0.0, norm, 0.0, 0.0};
}

RosenbrockProblem::RosenbrockProblem(double a, double b, PropWeights weights)
    : ObjectiveOracle(2, weights), a_(a), b_(b) {}

double RosenbrockProblem::eval_impl(const Vector& x) const {
  double u = a_ - x[0];
  double v = x[1] - x[0] * x[0];
  return u * u + b_ * v * v;
}

Vector RosenbrockProblem::grad_impl(const Vector& x) const {
  Vector g(2);
  double v = x[1] - x[0] * x[0];
  g[0] = -2.0 * (a_ - x[0]) - 4.0 * b_ * x[0] * v;
  g[1] = 2.0 * b_ * v;
  return g;
}

Vector RosenbrockProblem::hvp_impl(const Vector& x, const Vector& v) const {
  double h11 = 2.0 - 4.0 * b_ * x[1] + 12.0 * b_ * x[0] * x[0];
  double h12 = -4.0 * b_ * x[0];
  double h22 = 2.0 * b_;
  Vector hv(2);
  hv[0] = h11 * v[0] + h12 * v[1];
  hv[1] = h12 * v[0] + h22 * v[1];
  return hv;
}

SaddleProblem::SaddleProblem(Vector curvatures, double quartic,
                             PropWeights weights)
    : ObjectiveOracle(curvatures.size(), weights),
      curvatures_(std::move(curvatures)),
      quartic_(quartic) {
  if (quartic_ < 0) throw UsageError("saddle: quartic term must be >= 0");
}

double SaddleProblem::eval_impl(const Vector& x) const {
  double acc = 0.0;
  for (Index j = 0; j < x.size(); ++j) {
    double sq = x[j] * x[j];
    acc += 0.5 * curvatures_[j] * sq + 0.25 * quartic_ * sq * sq;
  }
  return acc;
}

Vector SaddleProblem::grad_impl(const Vector& x) const {
  Vector g(x.size());
  for (Index j = 0; j < x.size(); ++j) {
    g[j] = curvatures_[j] * x[j] + quartic_ * x[j] * x[j] * x[j];
  }
  return g;
}

Vector SaddleProblem::hvp_impl(const Vector& x, const Vector& v) const {
  Vector hv(x.size());
  for (Index j = 0; j < x.size(); ++j) {
    hv[j] = (curvatures_[j] + 3.0 * quartic_ * x[j] * x[j]) * v[j];
  }
  return hv;
}

std::optional<TheoryConstants> SaddleProblem::theory_constants() const {
  if (quartic_ != 0.0) return std::nullopt;
  TheoryConstants c;
  c.hessian_lipschitz = 0.0;
  c.hessian_norm_bound = curvatures_.cwiseAbs().maxCoeff();
  return c;
}

SaddleProblem make_saddle_problem(Vector curvatures, double quartic) {
  if (curvatures.size() == 0 || curvatures.minCoeff() >= 0) {
    throw UsageError("saddle: needs at least one negative curvature");
  }
  return SaddleProblem(std::move(curvatures), quartic);
}

Dataset make_synthetic_classification(Index n, Index d, std::uint64_t seed) {
  if (n <= 0 || d <= 0) throw UsageError("synthetic dataset: n, d > 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Vector w_true(d);
  for (Index j = 0; j < d; ++j) w_true[j] = normal(rng);

  Dataset ds;
  ds.n = n;
  ds.d = d;
  ds.row_ptr.reserve(n + 1);
  ds.row_ptr.push_back(0);
  ds.col_idx.reserve(static_cast<std::size_t>(n) * d);
  ds.values.reserve(static_cast<std::size_t>(n) * d);
  ds.labels.reserve(n);

  double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (Index i = 0; i < n; ++i) {
    double z = 0.0;
    for (Index j = 0; j < d; ++j) {
      double v = normal(rng) * scale;
      ds.col_idx.push_back(j);
      ds.values.push_back(v);
      z += v * w_true[j];
    }
    ds.row_ptr.push_back(ds.values.size());
    ds.labels.push_back(unif(rng) < sigmoid(3.0 * z) ? 1 : 0);
  }
  return ds;
}

}  // namespace newton
