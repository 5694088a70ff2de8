#pragma once

#include <optional>
#include <vector>

#include "lesopt/acquisition.hpp"

namespace lesopt {

struct StoppingConfig {
  double epsilon = 0.1;
  double delta = 0.05;
  double delta_mod = 0.0475;
  double delta_est = 0.0025;
  int decision_period = 25;  // samples between decisions
  int num_samples = 250;     // L, regrets expected per decision
  int k_max = 248;

  void validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("StoppingConfig: epsilon > 0");
    if (!(delta > 0.0 && delta < 1.0))
      throw std::invalid_argument("StoppingConfig: delta in (0,1)");
    if (delta_mod + delta_est > delta + 1e-12)
      throw std::invalid_argument("StoppingConfig: delta_mod + delta_est <= delta");
    if (decision_period < 1)
      throw std::invalid_argument("StoppingConfig: decision_period >= 1");
    if (k_max < 1 || k_max > num_samples)
      throw std::invalid_argument("StoppingConfig: 0 < k_max <= num_samples");
  }
};

// Smallest k in 1..num_samples whose one-sided Clopper-Pearson lower
// confidence bound at level 1 - delta_test exceeds 1 - delta_mod. Empty when
// even a unanimous count cannot certify the bound.
std::optional<int> kmax_clopper_pearson(int num_samples, double delta_mod,
                                        double delta_test);

// Fills in delta_mod = delta - delta_est, the constant per-decision test risk
// delta_test = delta_est * decision_period / declared_budget, and the
// resulting k_max. Throws when no feasible threshold exists at this L.
StoppingConfig make_stopping_config(double epsilon, double delta, double delta_est,
                                    int decision_period, int num_samples,
                                    int declared_budget);

struct StoppingCertificate {
  int iteration = 0;   // samples observed when the rule fired
  int pass_count = 0;  // regrets at or below epsilon
  double epsilon = 0.0;
  double delta = 0.0;
  int k_max = 0;
  int num_samples = 0;
};

struct StoppingState {
  int iteration = 0;  // samples observed so far; set by the caller per step
  int last_decision_iteration = -1;
  bool stopped = false;
  std::optional<StoppingCertificate> certificate;
};

// r^l = f^l(incumbent) - f^l(terminal of the l-th descent); reuses the
// round's paths and terminals, no fresh draws.
std::vector<double> local_regret_samples(const AcquisitionRound& round,
                                         const Vec& incumbent);

// Applies the decision schedule: at iterations that are positive multiples of
// the decision period, stop when at least k_max regrets are <= epsilon.
// Otherwise the state passes through unchanged. Stopping is monotone.
StoppingState stop_decision(const std::vector<double>& regrets, const StoppingConfig& cfg,
                            StoppingState state);

}  // namespace lesopt
