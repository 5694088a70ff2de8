#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "lesopt/pathwise.hpp"
#include "lesopt/rng.hpp"
#include "lesopt/types.hpp"

namespace lesopt {

// Benchmark complexity levels: log-normal lengthscale priors of the form
// logn(c1 * sqrt(2) + log(sqrt(d)), c2).
enum class ComplexityLevel { High, Medium, Low, ExtremelyLow };

LengthscalePrior level_prior(ComplexityLevel level, int dim);
std::string level_name(ComplexityLevel level);
ComplexityLevel level_from_name(const std::string& name);

// d i.i.d. draws exp(mu + sigma * z), z standard normal.
Vec sample_lengthscales(ComplexityLevel level, int dim, std::uint64_t rng_seed);

// A ground-truth objective drawn from the GP prior: lengthscales sampled from
// the level's prior, unit output scale, then one prior-only sample path.
// Evaluations add N(0, 0.002^2) noise.
class GpObjective {
 public:
  GpObjective(ComplexityLevel level, int dim, int num_features, std::uint64_t rng_seed);

  int dim() const { return dim_; }
  const Vec& true_lengthscales() const { return true_lengthscales_; }
  const SamplePath& true_path() const { return path_; }
  double observation_noise() const { return noise_sigma_; }

  double noiseless(const Vec& x) const { return eval_path(path_, x); }
  double evaluate(const Vec& x);  // advances the per-objective noise stream

 private:
  int dim_;
  Vec true_lengthscales_;
  SamplePath path_;
  double noise_sigma_ = 0.002;
  Rng noise_rng_;
};

GpObjective make_gp_objective(ComplexityLevel level, int dim, int num_features,
                              std::uint64_t rng_seed);

// f(x) = sum x_i^2 on [-2, 2]^d; optimum 0 at the interior point x = 0.
double sphere(const Vec& x);
BoxDomain sphere_box(int dim);

// Standard Ackley (a=20, b=0.2, c=2pi) on [-32.768, 32.768]^d; minimum 0 at 0.
double ackley(const Vec& x);
BoxDomain ackley_box(int dim);

}  // namespace lesopt
