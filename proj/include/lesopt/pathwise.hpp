#pragma once

#include <cstdint>
#include <memory>

#include "lesopt/gp.hpp"
#include "lesopt/types.hpp"

namespace lesopt {

// Random cosine features of the SE-ARD kernel:
//   phi_i(x) = amp * cos(omega_i . (x / l) + b_i),  amp = sqrt(2 sigma_k^2 / M)
// with omega_i standard normal rows (lengthscale scaling applied at eval).
struct FeatureBasis {
  Mat frequencies;         // M x d, i.i.d. standard normal
  Mat scaled_frequencies;  // frequencies with column j divided by l_j
  Vec phases;              // M, uniform in [0, 2pi)
  double amp = 0.0;
  Vec lengthscales;

  int num_features() const { return static_cast<int>(frequencies.rows()); }
  int dim() const { return static_cast<int>(frequencies.cols()); }
};

FeatureBasis draw_basis(const GpHyperparams& hp, int num_features, std::uint64_t rng_seed);

// One analytic posterior draw: weight-space prior plus the Matheron
// function-space correction,
//   f(x) = sum_i w_i phi_i(x) + sum_j v_j k(x, x_j).
struct SamplePath {
  Vec weights;  // M, i.i.d. standard normal
  std::shared_ptr<const FeatureBasis> basis;
  Mat correction_inputs;  // t x d
  Vec correction_coeffs;  // t
  GpHyperparams hyperparams;
};

// v = (K + sigma_n^2 I)^{-1} (y - f_w(X) - eps), eps ~ N(0, sigma_n^2 I) drawn
// fresh per path. Empty dataset gives an empty vector (prior path).
Vec matheron_coefficients(const GpModel& model, const FeatureBasis& basis,
                          const Vec& weights, std::uint64_t rng_seed);

// Weights plus Matheron correction in one call; the basis is shared.
SamplePath draw_path(const GpModel& model, std::shared_ptr<const FeatureBasis> basis,
                     std::uint64_t rng_seed);

double eval_path(const SamplePath& path, const Vec& x);
Vec eval_path_grad(const SamplePath& path, const Vec& x);
// Shares the trig work between value and gradient.
double eval_path_value_grad(const SamplePath& path, const Vec& x, Vec& grad);

// Upper bound on the spectral norm of the path Hessian over the whole domain;
// used by tests and for safe step sizes.
double path_hessian_bound(const SamplePath& path);

}  // namespace lesopt
