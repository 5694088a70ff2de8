#pragma once

#include <memory>
#include <optional>

#include "lesopt/types.hpp"

namespace lesopt {

// SE-ARD kernel: k(a,b) = sigma_k^2 exp(-1/2 sum_i (a_i-b_i)^2 / l_i^2)
double kernel_eval(const Vec& a, const Vec& b, const GpHyperparams& hp);

// Column vector k(X, x) for X given as rows.
Vec kernel_vector(const Mat& X, const Vec& x, const GpHyperparams& hp);

// Cross-covariance K(A, B), rows of A against rows of B.
Mat kernel_matrix(const Mat& A, const Mat& B, const GpHyperparams& hp);

struct GpModel {
  Dataset dataset;
  GpHyperparams hyperparams;
  Mat train_inputs;  // dataset inputs as rows (cached)
  Mat chol;          // lower factor of K(X,X) + (sigma_n^2 + jitter) I
  Vec alpha;         // (K + sigma_n^2 I)^{-1} y
  double jitter = 0.0;

  int size() const { return dataset.size(); }
};

// Lower Cholesky factor of K + sigma_n^2 I with the escalating jitter policy:
// start at 1e-10*sigma_k^2, multiply by 10 on failure, give up past
// 1e-4*sigma_k^2. Returns the factor and the jitter actually used.
std::pair<Mat, double> cholesky_with_jitter(Mat K, double output_scale);

GpModel fit(const Dataset& dataset, const GpHyperparams& hp);

struct Prediction {
  double mean;
  double obs_var;  // k(x,x|D) + sigma_n^2
};

Prediction predict(const GpModel& model, const Vec& x);

// Cached conditioning on a set of virtual observation locations. The virtual
// points carry the same noise sigma_n^2 as real data. Internally this is the
// block Cholesky of K(D u Q): the training factor from the model plus
// W = L^{-1} K(X,Q) and the factor of the Schur complement
// S = K(Q,Q) + sigma_n^2 I - W^T W, so scoring a point costs one small
// triangular solve on top of the shared training solve.
class AugmentedConditioner {
 public:
  AugmentedConditioner(const GpModel& model, const std::vector<Vec>& virtual_locations);

  // Triangular solve against the training factor; shareable across
  // conditioners built on the same model.
  Vec training_solve(const Vec& x) const;

  // sigma_y^2(x | D) and sigma_y^2(x | D u Q) computed from a shared
  // training solve. The contraction v_aug = v - |u|^2 holds by construction.
  struct Variances {
    double base;
    double augmented;
  };
  Variances variances(const Vec& x, const Vec& training_solved) const;
  Variances variances(const Vec& x) const;

  // u = L_S^{-1} (k(Q,x) - W^T w); |u|^2 is the extra variance reduction.
  Vec schur_solve(const Vec& x, const Vec& training_solved) const;

  int num_virtual() const { return static_cast<int>(virtual_points_.rows()); }
  const Mat& schur_factor() const { return schur_chol_; }
  const Mat& cross_solve() const { return w_; }

 private:
  const GpModel* model_;
  Mat virtual_points_;  // P x d
  Mat w_;               // t x P, L^{-1} K(X, Q)
  Mat schur_chol_;      // P x P lower factor
};

// sigma_y^2(x | D u virtual_locations); equals predict().obs_var for an
// empty virtual set.
double augmented_variance(const GpModel& model, const std::vector<Vec>& virtual_locations,
                          const Vec& x);

// log N(y; 0, K + sigma_n^2 I); 0 for an empty dataset.
double log_marginal_likelihood(const Dataset& dataset, const GpHyperparams& hp);

// H[N(mu, v)] = 1/2 log(2 pi e v)
double gaussian_entropy(double variance);

struct MapFitResult {
  GpHyperparams hyperparams;
  bool improved = false;  // false means every restart failed to beat the init
  double objective = 0.0;
};

// MAP fit of lengthscales and output scale in log space with the noise held
// fixed. Objective: log evidence plus the log-normal prior log-density at
// each lengthscale (the output scale carries an improper flat prior in log
// space). Multi-start gradient ascent with backtracking: restarts at init,
// init*0.5, init*2; 100 iterations; stops at gradient norm < 1e-5.
MapFitResult map_fit(const Dataset& dataset, const LengthscalePrior& prior,
                     const GpHyperparams& init, double fixed_noise);

// Penalized objective used by map_fit, exposed for tests.
double map_objective(const Dataset& dataset, const LengthscalePrior& prior,
                     const GpHyperparams& hp);

}  // namespace lesopt
