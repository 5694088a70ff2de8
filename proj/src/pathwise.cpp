#include "lesopt/pathwise.hpp"

#include <cmath>

#include "lesopt/rng.hpp"

namespace lesopt {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_dim(const SamplePath& path, const Vec& x) {
  if (x.size() != path.basis->dim())
    throw std::invalid_argument("eval_path: point dimension does not match basis");
}
}  // namespace

FeatureBasis draw_basis(const GpHyperparams& hp, int num_features, std::uint64_t rng_seed) {
  hp.validate();
  if (num_features < 1) throw std::invalid_argument("draw_basis: need at least one feature");
  Rng rng = make_rng(rng_seed);
  FeatureBasis basis;
  basis.frequencies = normal_matrix(num_features, hp.dim(), rng);
  basis.phases = uniform_vector(num_features, 0.0, kTwoPi, rng);
  basis.amp = std::sqrt(2.0 * hp.output_scale / num_features);
  basis.lengthscales = hp.lengthscales;
  basis.scaled_frequencies = basis.frequencies.array().rowwise() /
                             hp.lengthscales.transpose().array();
  return basis;
}

Vec matheron_coefficients(const GpModel& model, const FeatureBasis& basis,
                          const Vec& weights, std::uint64_t rng_seed) {
  const int t = model.size();
  if (t == 0) return Vec();

  // Weight-space prior evaluated at the training inputs.
  Vec prior_at_train(t);
  for (int j = 0; j < t; ++j) {
    const Vec arg = basis.scaled_frequencies * model.train_inputs.row(j).transpose() +
                    basis.phases;
    prior_at_train[j] = basis.amp * weights.dot(arg.array().cos().matrix());
  }

  Rng rng = make_rng(rng_seed);
  const double noise_sd = std::sqrt(model.hyperparams.noise_var);
  const Vec eps = noise_sd * normal_vector(t, rng);
  const Vec residual = model.dataset.observation_vector() - prior_at_train - eps;
  return model.chol.transpose().triangularView<Eigen::Upper>().solve(
      model.chol.triangularView<Eigen::Lower>().solve(residual));
}

SamplePath draw_path(const GpModel& model, std::shared_ptr<const FeatureBasis> basis,
                     std::uint64_t rng_seed) {
  SamplePath path;
  Rng rng = make_rng(derive_seed(rng_seed, 1));
  path.weights = normal_vector(basis->num_features(), rng);
  path.basis = std::move(basis);
  path.hyperparams = model.hyperparams;
  path.correction_inputs = model.train_inputs;
  path.correction_coeffs =
      matheron_coefficients(model, *path.basis, path.weights, derive_seed(rng_seed, 2));
  return path;
}

double eval_path(const SamplePath& path, const Vec& x) {
  check_dim(path, x);
  const FeatureBasis& b = *path.basis;
  const Vec arg = b.scaled_frequencies * x + b.phases;
  double value = b.amp * path.weights.dot(arg.array().cos().matrix());

  const int t = static_cast<int>(path.correction_coeffs.size());
  const auto inv_l = path.hyperparams.lengthscales.array().inverse();
  for (int j = 0; j < t; ++j) {
    const double sq =
        ((x - path.correction_inputs.row(j).transpose()).array() * inv_l).square().sum();
    value += path.correction_coeffs[j] * path.hyperparams.output_scale * std::exp(-0.5 * sq);
  }
  return value;
}

double eval_path_value_grad(const SamplePath& path, const Vec& x, Vec& grad) {
  check_dim(path, x);
  const FeatureBasis& b = *path.basis;
  const Vec arg = b.scaled_frequencies * x + b.phases;
  const Eigen::ArrayXd wc = path.weights.array() * arg.array().cos();
  const Eigen::ArrayXd ws = path.weights.array() * arg.array().sin();
  double value = b.amp * wc.sum();
  grad = -b.amp * (b.scaled_frequencies.transpose() * ws.matrix());

  const int t = static_cast<int>(path.correction_coeffs.size());
  const auto l2 = path.hyperparams.lengthscales.array().square();
  for (int j = 0; j < t; ++j) {
    const Vec diff = x - path.correction_inputs.row(j).transpose();
    const double sq = (diff.array().square() / l2).sum();
    const double kj = path.hyperparams.output_scale * std::exp(-0.5 * sq);
    value += path.correction_coeffs[j] * kj;
    grad -= (path.correction_coeffs[j] * kj) * (diff.array() / l2).matrix();
  }
  return value;
}

Vec eval_path_grad(const SamplePath& path, const Vec& x) {
  Vec grad;
  eval_path_value_grad(path, x, grad);
  return grad;
}

double path_hessian_bound(const SamplePath& path) {
  const FeatureBasis& b = *path.basis;
  double bound = 0.0;
  for (int i = 0; i < b.num_features(); ++i)
    bound += b.amp * std::abs(path.weights[i]) * b.scaled_frequencies.row(i).squaredNorm();
  // For the SE kernel |Hess k|_2 <= sigma_k^2 max_s e^{-s^2/2}(s^2+1)/l_min^2
  // = 2 e^{-1/2} sigma_k^2 / l_min^2.
  const double l_min = path.hyperparams.lengthscales.minCoeff();
  const double kernel_bound =
      2.0 * std::exp(-0.5) * path.hyperparams.output_scale / (l_min * l_min);
  bound += path.correction_coeffs.array().abs().sum() * kernel_bound;
  return bound;
}

}  // namespace lesopt
