#include "lesopt/bench.hpp"

#include <cmath>

#include "lesopt/gp.hpp"

namespace lesopt {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr std::uint64_t kLengthscaleTag = 0x6c73ULL;
constexpr std::uint64_t kPathTag = 0x7061ULL;
constexpr std::uint64_t kNoiseTag = 0x6e6fULL;
}  // namespace

LengthscalePrior level_prior(ComplexityLevel level, int dim) {
  if (dim < 1) throw std::invalid_argument("level_prior: dim >= 1");
  double c1 = 0.0, c2 = 0.0;
  switch (level) {
    case ComplexityLevel::High:
      c1 = -2.5;
      c2 = std::sqrt(3.0) / 5.0;
      break;
    case ComplexityLevel::Medium:
      c1 = -2.0;
      c2 = std::sqrt(3.0) / 4.0;
      break;
    case ComplexityLevel::Low:
      c1 = -1.0;
      c2 = std::sqrt(3.0) / 2.0;
      break;
    case ComplexityLevel::ExtremelyLow:
      c1 = 1.0;
      c2 = std::sqrt(3.0);
      break;
  }
  return {c1 * kSqrt2 + std::log(std::sqrt(double(dim))), c2};
}

std::string level_name(ComplexityLevel level) {
  switch (level) {
    case ComplexityLevel::High: return "high";
    case ComplexityLevel::Medium: return "medium";
    case ComplexityLevel::Low: return "low";
    case ComplexityLevel::ExtremelyLow: return "extremely_low";
  }
  return "unknown";
}

ComplexityLevel level_from_name(const std::string& name) {
  if (name == "high") return ComplexityLevel::High;
  if (name == "medium") return ComplexityLevel::Medium;
  if (name == "low") return ComplexityLevel::Low;
  if (name == "extremely_low") return ComplexityLevel::ExtremelyLow;
  throw std::invalid_argument("unknown complexity level: " + name);
}

Vec sample_lengthscales(ComplexityLevel level, int dim, std::uint64_t rng_seed) {
  const LengthscalePrior prior = level_prior(level, dim);
  Rng rng = make_rng(rng_seed);
  Vec z = normal_vector(dim, rng);
  return (prior.log_mean + prior.log_std * z.array()).exp();
}

GpObjective::GpObjective(ComplexityLevel level, int dim, int num_features,
                         std::uint64_t rng_seed)
    : dim_(dim), noise_rng_(make_rng(derive_seed(rng_seed, kNoiseTag))) {
  true_lengthscales_ = sample_lengthscales(level, dim, derive_seed(rng_seed, kLengthscaleTag));
  GpHyperparams hp{true_lengthscales_, 1.0, 0.0};
  const GpModel prior_model = fit(Dataset{}, hp);
  auto basis = std::make_shared<FeatureBasis>(
      draw_basis(hp, num_features, derive_seed(rng_seed, kPathTag, 1)));
  path_ = draw_path(prior_model, std::move(basis), derive_seed(rng_seed, kPathTag, 2));
}

double GpObjective::evaluate(const Vec& x) {
  std::normal_distribution<double> dist(0.0, noise_sigma_);
  return noiseless(x) + dist(noise_rng_);
}

GpObjective make_gp_objective(ComplexityLevel level, int dim, int num_features,
                              std::uint64_t rng_seed) {
  return GpObjective(level, dim, num_features, rng_seed);
}

double sphere(const Vec& x) { return x.squaredNorm(); }

BoxDomain sphere_box(int dim) {
  return BoxDomain(Vec::Constant(dim, -2.0), Vec::Constant(dim, 2.0));
}

double ackley(const Vec& x) {
  const double a = 20.0, b = 0.2, c = 2.0 * M_PI;
  const double n = static_cast<double>(x.size());
  const double mean_sq = x.squaredNorm() / n;
  const double mean_cos = (x.array() * c).cos().sum() / n;
  return -a * std::exp(-b * std::sqrt(mean_sq)) - std::exp(mean_cos) + a + std::exp(1.0);
}

BoxDomain ackley_box(int dim) {
  return BoxDomain(Vec::Constant(dim, -32.768), Vec::Constant(dim, 32.768));
}

}  // namespace lesopt
