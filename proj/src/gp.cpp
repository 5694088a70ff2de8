#include "lesopt/gp.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>

namespace lesopt {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_dim(const Vec& x, const GpHyperparams& hp) {
  if (x.size() != hp.lengthscales.size())
    throw std::invalid_argument("point dimension does not match hyperparameters");
}

}  // namespace

double kernel_eval(const Vec& a, const Vec& b, const GpHyperparams& hp) {
  hp.validate();
  check_dim(a, hp);
  check_dim(b, hp);
  const double sq = ((a - b).array() / hp.lengthscales.array()).square().sum();
  return hp.output_scale * std::exp(-0.5 * sq);
}

Vec kernel_vector(const Mat& X, const Vec& x, const GpHyperparams& hp) {
  Vec k(X.rows());
  const auto inv_l = hp.lengthscales.array().inverse();
  for (int i = 0; i < X.rows(); ++i) {
    const double sq = ((X.row(i).transpose() - x).array() * inv_l).square().sum();
    k[i] = hp.output_scale * std::exp(-0.5 * sq);
  }
  return k;
}

Mat kernel_matrix(const Mat& A, const Mat& B, const GpHyperparams& hp) {
  Mat K(A.rows(), B.rows());
  const auto inv_l = hp.lengthscales.array().inverse();
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < B.rows(); ++j) {
      const double sq =
          ((A.row(i) - B.row(j)).transpose().array() * inv_l).square().sum();
      K(i, j) = hp.output_scale * std::exp(-0.5 * sq);
    }
  return K;
}

std::pair<Mat, double> cholesky_with_jitter(Mat K, double output_scale) {
  const int n = static_cast<int>(K.rows());
  double jitter = 1e-10 * output_scale;
  const double cap = 1e-4 * output_scale;
  Mat base = K;
  while (true) {
    K = base;
    K.diagonal().array() += jitter;
    Eigen::LLT<Mat> llt(K);
    if (llt.info() == Eigen::Success) {
      Mat L = llt.matrixL();
      // LLT can succeed with a non-finite factor on pathological input.
      if (L.allFinite()) return {L, jitter};
    }
    if (jitter >= cap)
      throw NumericalError("covariance factorization failed for n=" + std::to_string(n) +
                           " even at jitter " + std::to_string(jitter));
    jitter *= 10.0;
  }
}

GpModel fit(const Dataset& dataset, const GpHyperparams& hp) {
  hp.validate();
  GpModel model;
  model.dataset = dataset;
  model.hyperparams = hp;
  if (dataset.empty()) return model;
  if (dataset.dim() != hp.dim())
    throw std::invalid_argument("fit: dataset dimension does not match hyperparameters");

  model.train_inputs = dataset.input_matrix();
  Mat K = kernel_matrix(model.train_inputs, model.train_inputs, hp);
  K.diagonal().array() += hp.noise_var;
  auto [L, jitter] = cholesky_with_jitter(std::move(K), hp.output_scale);
  model.chol = std::move(L);
  model.jitter = jitter;
  const Vec y = dataset.observation_vector();
  model.alpha = model.chol.transpose().triangularView<Eigen::Upper>().solve(
      model.chol.triangularView<Eigen::Lower>().solve(y));
  return model;
}

Prediction predict(const GpModel& model, const Vec& x) {
  const GpHyperparams& hp = model.hyperparams;
  check_dim(x, hp);
  if (model.size() == 0) return {0.0, hp.output_scale + hp.noise_var};

  const Vec k = kernel_vector(model.train_inputs, x, hp);
  const Vec w = model.chol.triangularView<Eigen::Lower>().solve(k);
  double var_f = hp.output_scale - w.squaredNorm();
  if (var_f < 0.0) var_f = 0.0;
  return {k.dot(model.alpha), var_f + hp.noise_var};
}

AugmentedConditioner::AugmentedConditioner(const GpModel& model,
                                           const std::vector<Vec>& virtual_locations)
    : model_(&model) {
  const GpHyperparams& hp = model.hyperparams;
  const int p = static_cast<int>(virtual_locations.size());
  const int d = hp.dim();
  virtual_points_.resize(p, d);
  for (int i = 0; i < p; ++i) {
    if (virtual_locations[i].size() != d)
      throw std::invalid_argument("augmented conditioning: virtual point dimension mismatch");
    if (!virtual_locations[i].allFinite())
      throw std::invalid_argument("augmented conditioning: virtual point not finite");
    virtual_points_.row(i) = virtual_locations[i].transpose();
  }
  if (p == 0) return;

  Mat S = kernel_matrix(virtual_points_, virtual_points_, hp);
  S.diagonal().array() += hp.noise_var;
  if (model.size() > 0) {
    const Mat B = kernel_matrix(model.train_inputs, virtual_points_, hp);
    w_ = model.chol.triangularView<Eigen::Lower>().solve(B);
    S -= w_.transpose() * w_;
  }
  schur_chol_ = cholesky_with_jitter(std::move(S), hp.output_scale).first;
}

Vec AugmentedConditioner::training_solve(const Vec& x) const {
  if (model_->size() == 0) return Vec();
  const Vec k = kernel_vector(model_->train_inputs, x, model_->hyperparams);
  return model_->chol.triangularView<Eigen::Lower>().solve(k);
}

Vec AugmentedConditioner::schur_solve(const Vec& x, const Vec& training_solved) const {
  if (num_virtual() == 0) return Vec();
  Vec c = kernel_vector(virtual_points_, x, model_->hyperparams);
  if (model_->size() > 0) c -= w_.transpose() * training_solved;
  return schur_chol_.triangularView<Eigen::Lower>().solve(c);
}

AugmentedConditioner::Variances AugmentedConditioner::variances(
    const Vec& x, const Vec& training_solved) const {
  const GpHyperparams& hp = model_->hyperparams;
  double base = hp.output_scale + hp.noise_var - training_solved.squaredNorm();
  const Vec u = schur_solve(x, training_solved);
  double reduction = u.squaredNorm();
  const double floor = std::max(hp.noise_var, 1e-300);
  double augmented = std::max(base - reduction, floor);
  if (base < augmented) base = augmented;
  return {base, augmented};
}

AugmentedConditioner::Variances AugmentedConditioner::variances(const Vec& x) const {
  return variances(x, training_solve(x));
}

double augmented_variance(const GpModel& model, const std::vector<Vec>& virtual_locations,
                          const Vec& x) {
  check_dim(x, model.hyperparams);
  if (virtual_locations.empty()) return predict(model, x).obs_var;
  AugmentedConditioner cond(model, virtual_locations);
  return cond.variances(x).augmented;
}

double log_marginal_likelihood(const Dataset& dataset, const GpHyperparams& hp) {
  hp.validate();
  const int n = dataset.size();
  if (n == 0) return 0.0;
  const Mat X = dataset.input_matrix();
  Mat K = kernel_matrix(X, X, hp);
  K.diagonal().array() += hp.noise_var;
  const Mat L = cholesky_with_jitter(std::move(K), hp.output_scale).first;
  const Vec y = dataset.observation_vector();
  const Vec w = L.triangularView<Eigen::Lower>().solve(y);
  return -0.5 * w.squaredNorm() - L.diagonal().array().log().sum() -
         0.5 * n * std::log(kTwoPi);
}

double gaussian_entropy(double variance) {
  if (!(variance > 0.0))
    throw std::invalid_argument("gaussian_entropy: variance must be positive");
  return 0.5 * std::log(kTwoPi * std::exp(1.0) * variance);
}

double map_objective(const Dataset& dataset, const LengthscalePrior& prior,
                     const GpHyperparams& hp) {
  double obj = log_marginal_likelihood(dataset, hp);
  const double log_norm = std::log(prior.log_std) + 0.5 * std::log(kTwoPi);
  for (int i = 0; i < hp.dim(); ++i) {
    const double t = std::log(hp.lengthscales[i]);
    const double z = (t - prior.log_mean) / prior.log_std;
    obj += -t - 0.5 * z * z - log_norm;
  }
  return obj;
}

namespace {

// theta = [log l_1..log l_d, log sigma_k^2]
GpHyperparams theta_to_hp(const Vec& theta, double noise_var) {
  const int d = static_cast<int>(theta.size()) - 1;
  GpHyperparams hp;
  hp.lengthscales = theta.head(d).array().exp();
  hp.output_scale = std::exp(theta[d]);
  hp.noise_var = noise_var;
  return hp;
}

double penalized_objective(const Dataset& dataset, const LengthscalePrior& prior,
                           const Vec& theta, double noise_var) {
  try {
    return map_objective(dataset, prior, theta_to_hp(theta, noise_var));
  } catch (const NumericalError&) {
    return -std::numeric_limits<double>::infinity();
  }
}

// Analytic gradient of the penalized objective in theta. Uses
// d LML / d theta_j = 1/2 tr((alpha alpha^T - K^{-1}) dK/d theta_j).
Vec penalized_gradient(const Dataset& dataset, const LengthscalePrior& prior,
                       const Vec& theta, double noise_var) {
  const int d = static_cast<int>(theta.size()) - 1;
  const int n = dataset.size();
  const GpHyperparams hp = theta_to_hp(theta, noise_var);
  const Mat X = dataset.input_matrix();
  Mat K = kernel_matrix(X, X, hp);
  const Mat K_noise_free = K;
  K.diagonal().array() += noise_var;
  const Mat L = cholesky_with_jitter(std::move(K), hp.output_scale).first;
  const Vec y = dataset.observation_vector();
  const Vec alpha = L.transpose().triangularView<Eigen::Upper>().solve(
      L.triangularView<Eigen::Lower>().solve(y));
  Mat Kinv = L.transpose().triangularView<Eigen::Upper>().solve(
      L.triangularView<Eigen::Lower>().solve(Mat::Identity(n, n)));
  const Mat A = alpha * alpha.transpose() - Kinv;

  Vec grad(d + 1);
  for (int j = 0; j < d; ++j) {
    const double inv_l2 = 1.0 / (hp.lengthscales[j] * hp.lengthscales[j]);
    double acc = 0.0;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        const double diff = X(r, j) - X(c, j);
        acc += A(r, c) * K_noise_free(r, c) * diff * diff * inv_l2;
      }
    const double z = (theta[j] - prior.log_mean) / prior.log_std;
    grad[j] = 0.5 * acc - 1.0 - z / prior.log_std;
  }
  grad[d] = 0.5 * (A.array() * K_noise_free.array()).sum();
  return grad;
}

}  // namespace

MapFitResult map_fit(const Dataset& dataset, const LengthscalePrior& prior,
                     const GpHyperparams& init, double fixed_noise) {
  prior.validate();
  init.validate();
  if (dataset.size() < 1) throw std::invalid_argument("map_fit: dataset must be non-empty");

  const int d = init.dim();
  Vec theta0(d + 1);
  theta0.head(d) = init.lengthscales.array().log();
  theta0[d] = std::log(init.output_scale);

  const double init_obj = penalized_objective(dataset, prior, theta0, fixed_noise);
  double best_obj = init_obj;
  Vec best_theta = theta0;

  const double restart_scales[] = {1.0, 0.5, 2.0};
  for (double scale : restart_scales) {
    Vec theta = theta0.array() + std::log(scale);
    double obj = penalized_objective(dataset, prior, theta, fixed_noise);
    if (!std::isfinite(obj)) continue;
    double step = 1.0;
    for (int it = 0; it < 100; ++it) {
      Vec g;
      try {
        g = penalized_gradient(dataset, prior, theta, fixed_noise);
      } catch (const NumericalError&) {
        break;
      }
      const double gnorm = g.norm();
      if (gnorm < 1e-5) break;
      // Armijo backtracking, warm-started from twice the last accepted step.
      step = std::min(2.0 * step, 1.0);
      bool accepted = false;
      for (int bt = 0; bt < 50; ++bt) {
        const Vec cand = theta + step * g;
        const double cand_obj = penalized_objective(dataset, prior, cand, fixed_noise);
        if (std::isfinite(cand_obj) && cand_obj >= obj + 1e-4 * step * gnorm * gnorm) {
          theta = cand;
          obj = cand_obj;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
    }
    if (obj > best_obj) {
      best_obj = obj;
      best_theta = theta;
    }
  }

  MapFitResult result;
  result.hyperparams = theta_to_hp(best_theta, fixed_noise);
  result.objective = best_obj;
  result.improved = best_obj > init_obj;
  if (!result.improved) {
    result.hyperparams = init;
    result.hyperparams.noise_var = fixed_noise;
    result.objective = init_obj;
  }
  return result;
}

}  // namespace lesopt
