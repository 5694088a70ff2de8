#include "lesopt/stopping.hpp"

#include <boost/math/distributions/beta.hpp>
#include <cmath>

namespace lesopt {

std::optional<int> kmax_clopper_pearson(int num_samples, double delta_mod,
                                        double delta_test) {
  if (num_samples < 1) throw std::invalid_argument("kmax: num_samples >= 1");
  if (!(delta_mod > 0.0 && delta_mod < 1.0))
    throw std::invalid_argument("kmax: delta_mod in (0,1)");
  if (!(delta_test > 0.0 && delta_test < 1.0))
    throw std::invalid_argument("kmax: delta_test in (0,1)");

  const double target = 1.0 - delta_mod;
  // The lower bound is monotone in k, so scan from the top for the first
  // failure. k successes out of n: lb = BetaInv(delta_test; k, n - k + 1).
  for (int k = num_samples; k >= 1; --k) {
    boost::math::beta_distribution<double> dist(k, num_samples - k + 1);
    const double lb = boost::math::quantile(dist, delta_test);
    if (!(lb > target)) {
      if (k == num_samples) return std::nullopt;
      return k + 1;
    }
  }
  return 1;
}

StoppingConfig make_stopping_config(double epsilon, double delta, double delta_est,
                                    int decision_period, int num_samples,
                                    int declared_budget) {
  if (declared_budget < decision_period)
    throw std::invalid_argument("make_stopping_config: budget below one decision period");
  StoppingConfig cfg;
  cfg.epsilon = epsilon;
  cfg.delta = delta;
  cfg.delta_est = delta_est;
  cfg.delta_mod = delta - delta_est;
  cfg.decision_period = decision_period;
  cfg.num_samples = num_samples;
  const double delta_test =
      delta_est * static_cast<double>(decision_period) / declared_budget;
  const auto k = kmax_clopper_pearson(num_samples, cfg.delta_mod, delta_test);
  if (!k)
    throw std::invalid_argument(
        "make_stopping_config: no feasible threshold at L=" + std::to_string(num_samples) +
        "; increase the number of Monte-Carlo samples");
  cfg.k_max = *k;
  cfg.validate();
  return cfg;
}

std::vector<double> local_regret_samples(const AcquisitionRound& round,
                                         const Vec& incumbent) {
  std::vector<double> regrets;
  regrets.reserve(round.paths.size());
  for (size_t l = 0; l < round.paths.size(); ++l) {
    const double at_incumbent = eval_path(round.paths[l], incumbent);
    const double at_terminal = eval_path(round.paths[l], round.sequences[l].terminal);
    regrets.push_back(at_incumbent - at_terminal);
  }
  return regrets;
}

StoppingState stop_decision(const std::vector<double>& regrets, const StoppingConfig& cfg,
                            StoppingState state) {
  cfg.validate();
  if (static_cast<int>(regrets.size()) != cfg.num_samples)
    throw std::invalid_argument("stop_decision: expected " +
                                std::to_string(cfg.num_samples) + " regrets, got " +
                                std::to_string(regrets.size()));
  if (state.stopped) return state;
  if (state.iteration <= 0 || state.iteration % cfg.decision_period != 0) return state;

  state.last_decision_iteration = state.iteration;
  int pass = 0;
  for (double r : regrets)
    if (r <= cfg.epsilon) ++pass;
  if (pass >= cfg.k_max) {
    state.stopped = true;
    state.certificate = StoppingCertificate{state.iteration, pass,      cfg.epsilon,
                                            cfg.delta,       cfg.k_max, cfg.num_samples};
  }
  return state;
}

}  // namespace lesopt
