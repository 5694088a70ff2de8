#pragma once

#include <functional>
#include <vector>

#include "lesopt/pathwise.hpp"
#include "lesopt/types.hpp"

namespace lesopt {

enum class OptimizerKind { Adam, Gd };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Adam;
  int steps = 500;
  double learning_rate = 0.002;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_hat = 1e-8;

  void validate() const {
    if (steps < 1) throw std::invalid_argument("OptimizerConfig: steps must be >= 1");
    if (!(learning_rate > 0.0))
      throw std::invalid_argument("OptimizerConfig: learning_rate must be positive");
  }
};

struct DescentSequence {
  std::vector<Vec> iterates;    // z_0 = start, ..., z_N, all clipped to the domain
  std::vector<double> values;   // objective values at the iterates
  Vec terminal;                 // last iterate
  std::vector<Vec> support;     // P arc-length-uniform points, filled by discretize
  bool aborted = false;         // a non-finite value or gradient cut the run short
};

// Returns the value at x and fills grad.
using ValueGradFn = std::function<double(const Vec&, Vec&)>;

// Runs exactly cfg.steps iterations of the configured optimizer from start,
// projecting every iterate onto the box. Aborts early only on non-finite
// values or gradients.
DescentSequence descend(const ValueGradFn& objective, const Vec& start,
                        const OptimizerConfig& cfg, const BoxDomain& domain);

DescentSequence descend(const SamplePath& path, const Vec& start,
                        const OptimizerConfig& cfg, const BoxDomain& domain);

// P points equally spaced by cumulative arc length along the piecewise-linear
// interpolation of the iterates. A sequence of total length < 1e-12 yields P
// copies of the start.
std::vector<Vec> discretize(const DescentSequence& seq, int num_points);

}  // namespace lesopt
