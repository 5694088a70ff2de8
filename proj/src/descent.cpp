#include "lesopt/descent.hpp"

#include <cmath>
#include <limits>

namespace lesopt {

DescentSequence descend(const ValueGradFn& objective, const Vec& start,
                        const OptimizerConfig& cfg, const BoxDomain& domain) {
  cfg.validate();
  if (!domain.contains(start, 1e-12))
    throw std::invalid_argument("descend: start outside the domain");

  const int d = domain.dim();
  DescentSequence seq;
  seq.iterates.reserve(cfg.steps + 1);
  seq.values.reserve(cfg.steps + 1);

  Vec z = domain.clip(start);
  Vec m = Vec::Zero(d);
  Vec v = Vec::Zero(d);
  Vec grad(d);

  for (int n = 0; n < cfg.steps; ++n) {
    const double value = objective(z, grad);
    if (!std::isfinite(value)) {
      seq.aborted = true;
      break;
    }
    seq.iterates.push_back(z);
    seq.values.push_back(value);
    if (!grad.allFinite()) {
      seq.aborted = true;
      break;
    }

    if (cfg.kind == OptimizerKind::Gd) {
      z = domain.clip(z - cfg.learning_rate * grad);
    } else {
      m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
      v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
      const double c1 = 1.0 - std::pow(cfg.beta1, n + 1);
      const double c2 = 1.0 - std::pow(cfg.beta2, n + 1);
      const Vec step = (m / c1).array() / ((v / c2).array().sqrt() + cfg.eps_hat);
      z = domain.clip(z - cfg.learning_rate * step);
    }
  }

  if (!seq.aborted) {
    Vec unused(d);
    const double value = objective(z, unused);
    if (std::isfinite(value)) {
      seq.iterates.push_back(z);
      seq.values.push_back(value);
    } else {
      seq.aborted = true;
    }
  }

  if (seq.iterates.empty()) {
    // Even the start was non-finite; keep the start with no value so callers
    // still see where the sequence began.
    seq.iterates.push_back(z);
    seq.values.push_back(std::numeric_limits<double>::quiet_NaN());
  }
  seq.terminal = seq.iterates.back();
  return seq;
}

DescentSequence descend(const SamplePath& path, const Vec& start,
                        const OptimizerConfig& cfg, const BoxDomain& domain) {
  return descend(
      [&path](const Vec& x, Vec& grad) { return eval_path_value_grad(path, x, grad); },
      start, cfg, domain);
}

std::vector<Vec> discretize(const DescentSequence& seq, int num_points) {
  if (num_points < 2) throw std::invalid_argument("discretize: need at least two points");
  if (seq.iterates.empty()) throw std::invalid_argument("discretize: empty sequence");

  const int n = static_cast<int>(seq.iterates.size());
  std::vector<double> cumulative(n, 0.0);
  for (int i = 1; i < n; ++i)
    cumulative[i] = cumulative[i - 1] + (seq.iterates[i] - seq.iterates[i - 1]).norm();
  const double total = cumulative.back();

  std::vector<Vec> points(num_points);
  if (total < 1e-12) {
    for (auto& p : points) p = seq.iterates.front();
    return points;
  }

  points.front() = seq.iterates.front();
  points.back() = seq.iterates.back();
  int segment = 0;
  for (int i = 1; i + 1 < num_points; ++i) {
    const double target = total * i / (num_points - 1);
    while (segment + 1 < n && cumulative[segment + 1] < target) ++segment;
    const double seg_len = cumulative[segment + 1] - cumulative[segment];
    const double frac = seg_len > 0.0 ? (target - cumulative[segment]) / seg_len : 0.0;
    points[i] = seq.iterates[segment] + frac * (seq.iterates[segment + 1] - seq.iterates[segment]);
  }
  return points;
}

}  // namespace lesopt
