#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <vector>

namespace lesopt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Thrown when a covariance factorization fails even after jitter escalation.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BoxDomain {
  Vec lower;
  Vec upper;

  BoxDomain() = default;
  BoxDomain(Vec lo, Vec hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size() || lower.size() == 0)
      throw std::invalid_argument("BoxDomain: bound vectors must have equal, positive length");
    for (int i = 0; i < lower.size(); ++i)
      if (!(lower[i] < upper[i]))
        throw std::invalid_argument("BoxDomain: lower[i] < upper[i] required");
  }

  int dim() const { return static_cast<int>(lower.size()); }

  bool contains(const Vec& x, double tol = 0.0) const {
    if (x.size() != lower.size()) return false;
    for (int i = 0; i < x.size(); ++i)
      if (x[i] < lower[i] - tol || x[i] > upper[i] + tol) return false;
    return true;
  }

  Vec clip(const Vec& x) const { return x.cwiseMax(lower).cwiseMin(upper); }

  static BoxDomain unit_cube(int d) {
    return BoxDomain(Vec::Zero(d), Vec::Ones(d));
  }
};

struct Dataset {
  std::vector<Vec> inputs;
  std::vector<double> observations;

  int size() const { return static_cast<int>(inputs.size()); }
  bool empty() const { return inputs.empty(); }
  int dim() const { return inputs.empty() ? 0 : static_cast<int>(inputs.front().size()); }

  void add(const Vec& x, double y) {
    if (!inputs.empty() && x.size() != inputs.front().size())
      throw std::invalid_argument("Dataset: inconsistent input dimension");
    inputs.push_back(x);
    observations.push_back(y);
  }

  // Inputs stacked as rows, in insertion order.
  Mat input_matrix() const {
    Mat X(size(), dim());
    for (int i = 0; i < size(); ++i) X.row(i) = inputs[i].transpose();
    return X;
  }

  Vec observation_vector() const {
    return Eigen::Map<const Vec>(observations.data(), size());
  }
};

struct GpHyperparams {
  Vec lengthscales;     // per-dimension, > 0
  double output_scale;  // kernel variance sigma_k^2, > 0
  double noise_var;     // observation noise variance sigma_n^2, >= 0

  int dim() const { return static_cast<int>(lengthscales.size()); }

  void validate() const {
    if (lengthscales.size() == 0)
      throw std::invalid_argument("GpHyperparams: empty lengthscales");
    if ((lengthscales.array() <= 0.0).any())
      throw std::invalid_argument("GpHyperparams: lengthscales must be positive");
    if (!(output_scale > 0.0))
      throw std::invalid_argument("GpHyperparams: output_scale must be positive");
    if (noise_var < 0.0)
      throw std::invalid_argument("GpHyperparams: noise_var must be non-negative");
  }
};

// Shared per-dimension log-normal prior on lengthscales.
struct LengthscalePrior {
  double log_mean;
  double log_std;

  void validate() const {
    if (!(log_std > 0.0))
      throw std::invalid_argument("LengthscalePrior: log_std must be positive");
  }

  // E[l] = exp(mu + sigma^2/2)
  double mean() const { return std::exp(log_mean + 0.5 * log_std * log_std); }
};

}  // namespace lesopt
