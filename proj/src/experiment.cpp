#include "lesopt/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <memory>
#include <thread>

#include "lesopt/rng.hpp"
#include "lesopt/sobol.hpp"

namespace lesopt {

namespace {

constexpr std::uint64_t kRunTag = 0x72756eULL;
constexpr std::uint64_t kObjectiveTag = 0x6f626aULL;
constexpr std::uint64_t kInitTag = 0x696e6974ULL;
constexpr std::uint64_t kSobolTag = 0x736f62ULL;
constexpr std::uint64_t kRoundTag = 0x726f756eULL;
constexpr std::uint64_t kLtsTag = 0x6c7473ULL;

// Unit-cube-facing view of a benchmark objective.
class RunObjective {
 public:
  virtual ~RunObjective() = default;
  virtual double evaluate(const Vec& u) = 0;
  virtual double noiseless(const Vec& u) const = 0;
};

class GpSampleRunObjective : public RunObjective {
 public:
  GpSampleRunObjective(const TaskSpec& task, std::uint64_t seed)
      : objective_(task.level, task.dimension, task.objective_features, seed) {}

  double evaluate(const Vec& u) override { return objective_.evaluate(u); }
  double noiseless(const Vec& u) const override { return objective_.noiseless(u); }
  const GpObjective& objective() const { return objective_; }

 private:
  GpObjective objective_;
};

class FunctionRunObjective : public RunObjective {
 public:
  FunctionRunObjective(double (*fn)(const Vec&), BoxDomain box)
      : fn_(fn), box_(std::move(box)) {}

  double evaluate(const Vec& u) override { return noiseless(u); }
  double noiseless(const Vec& u) const override {
    const Vec native =
        box_.lower.array() + (box_.upper - box_.lower).array() * u.array();
    return fn_(native);
  }

 private:
  double (*fn_)(const Vec&);
  BoxDomain box_;
};

std::unique_ptr<RunObjective> make_run_objective(const TaskSpec& task, std::uint64_t seed) {
  switch (task.kind) {
    case ObjectiveKind::GpSample:
      return std::make_unique<GpSampleRunObjective>(task, seed);
    case ObjectiveKind::Sphere:
      return std::make_unique<FunctionRunObjective>(&sphere, sphere_box(task.dimension));
    case ObjectiveKind::Ackley:
      return std::make_unique<FunctionRunObjective>(&ackley, ackley_box(task.dimension));
  }
  throw std::invalid_argument("unknown objective kind");
}

struct Standardization {
  double shift = 0.0;
  double scale = 1.0;
};

Standardization compute_standardization(const std::vector<double>& ys) {
  Standardization s;
  const int n = static_cast<int>(ys.size());
  if (n < 2) return s;
  double mean = 0.0;
  for (double y : ys) mean += y;
  mean /= n;
  double var = 0.0;
  for (double y : ys) var += (y - mean) * (y - mean);
  var /= (n - 1);
  s.shift = mean;
  s.scale = std::max(std::sqrt(var), 1e-12);
  return s;
}

}  // namespace

std::string algo_name(Algo algo) {
  switch (algo) {
    case Algo::Les: return "les";
    case Algo::QLes: return "qles";
    case Algo::LocalTs: return "local_ts";
    case Algo::Sobol: return "sobol";
  }
  return "unknown";
}

Algo algo_from_name(const std::string& name) {
  if (name == "les") return Algo::Les;
  if (name == "qles") return Algo::QLes;
  if (name == "local_ts") return Algo::LocalTs;
  if (name == "sobol") return Algo::Sobol;
  throw std::invalid_argument("unknown algorithm: " + name);
}

std::string protocol_name(Protocol protocol) {
  return protocol == Protocol::WithinModel ? "within_model" : "out_of_model";
}

Protocol protocol_from_name(const std::string& name) {
  if (name == "within_model") return Protocol::WithinModel;
  if (name == "out_of_model") return Protocol::OutOfModel;
  throw std::invalid_argument("unknown protocol: " + name);
}

std::string TaskSpec::name() const {
  switch (kind) {
    case ObjectiveKind::GpSample:
      return "gp_" + level_name(level) + "_d" + std::to_string(dimension);
    case ObjectiveKind::Sphere:
      return "sphere_d" + std::to_string(dimension);
    case ObjectiveKind::Ackley:
      return "ackley_d" + std::to_string(dimension);
  }
  return "unknown";
}

void RunConfig::validate() const {
  if (task.dimension < 1) throw std::invalid_argument("config: dimension >= 1");
  if (initial_samples < 1) throw std::invalid_argument("config: initial_samples >= 1");
  if (budget < initial_samples)
    throw std::invalid_argument("config: budget below the initial design size");
  if (batch_size < 1) throw std::invalid_argument("config: batch_size >= 1");
  acquisition.validate();
  if (protocol == Protocol::WithinModel && task.kind != ObjectiveKind::GpSample)
    throw std::invalid_argument(
        "config: within_model protocol requires a gp_sample task");
  if (stopping_enabled && algo != Algo::Les)
    throw std::invalid_argument("config: the stopping rule requires the les algorithm");
  if (stopping_enabled) {
    // Throws when no threshold is feasible at this L.
    make_stopping_config(epsilon, delta, delta_est, decision_period,
                         acquisition.num_paths, budget);
  }
}

std::uint64_t objective_seed(std::uint64_t master_seed, long seed) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(seed), kRunTag, kObjectiveTag);
}

SeedRunResult run_single_seed(const RunConfig& cfg, std::uint64_t master_seed, long seed) {
  cfg.validate();
  SeedRunResult result;
  result.seed = seed;

  const int d = cfg.task.dimension;
  const BoxDomain domain = BoxDomain::unit_cube(d);
  const std::uint64_t run_seed =
      derive_seed(master_seed, static_cast<std::uint64_t>(seed), kRunTag);

  try {
    auto objective = make_run_objective(cfg.task, objective_seed(master_seed, seed));

    const double fixed_noise = cfg.task.kind == ObjectiveKind::GpSample
                                   ? 0.002 * 0.002
                                   : 0.001 * 0.001;
    GpHyperparams true_hp;
    if (cfg.task.kind == ObjectiveKind::GpSample) {
      const auto& gp_obj = static_cast<GpSampleRunObjective&>(*objective).objective();
      true_hp = GpHyperparams{gp_obj.true_lengthscales(), 1.0, fixed_noise};
    }
    const LengthscalePrior prior =
        cfg.task.kind == ObjectiveKind::GpSample
            ? level_prior(cfg.task.level, d)
            : LengthscalePrior{std::log(0.2 * std::sqrt(double(d))), 1.0};
    GpHyperparams init_hp;
    init_hp.lengthscales = Vec::Constant(d, prior.mean());
    init_hp.output_scale = 1.0;
    init_hp.noise_var = fixed_noise;

    std::vector<Vec> sobol_points;
    if (cfg.algo == Algo::Sobol)
      sobol_points = sobol_baseline(domain, cfg.budget, derive_seed(run_seed, kSobolTag));

    StoppingConfig stop_cfg;
    StoppingState stop_state;
    if (cfg.stopping_enabled)
      stop_cfg = make_stopping_config(cfg.epsilon, cfg.delta, cfg.delta_est,
                                      cfg.decision_period, cfg.acquisition.num_paths,
                                      cfg.budget);

    Rng init_rng = make_rng(derive_seed(run_seed, kInitTag));
    Dataset data;
    std::vector<double> raw_observations;
    double best = std::numeric_limits<double>::infinity();
    double cum = 0.0;
    std::deque<std::pair<Vec, double>> batch_queue;  // pending qLES points

    for (int i = 1; i <= cfg.budget; ++i) {
      const auto t0 = std::chrono::steady_clock::now();
      Vec x;
      std::optional<double> acq_score;
      bool stopped_now = false;

      if (cfg.algo == Algo::Sobol) {
        x = sobol_points[i - 1];
      } else if (data.size() < cfg.initial_samples) {
        x = uniform_vector(d, 0.0, 1.0, init_rng);
      } else if (!batch_queue.empty()) {
        x = batch_queue.front().first;
        acq_score = batch_queue.front().second;
        batch_queue.pop_front();
      } else {
        Standardization std_tf;
        if (cfg.standardize) std_tf = compute_standardization(raw_observations);
        Dataset model_data;
        for (int j = 0; j < data.size(); ++j)
          model_data.add(data.inputs[j],
                         (data.observations[j] - std_tf.shift) / std_tf.scale);

        GpHyperparams hp;
        if (cfg.protocol == Protocol::WithinModel) {
          hp = true_hp;
        } else {
          hp = map_fit(model_data, prior, init_hp, fixed_noise).hyperparams;
          ++result.map_fit_calls;
        }
        auto model = std::make_shared<GpModel>(fit(model_data, hp));

        int inc_idx = 0;
        double inc_mean = std::numeric_limits<double>::infinity();
        for (int j = 0; j < model_data.size(); ++j) {
          const double m = predict(*model, model_data.inputs[j]).mean;
          if (m < inc_mean) {
            inc_mean = m;
            inc_idx = j;
          }
        }
        const Vec incumbent = model_data.inputs[inc_idx];
        result.final_incumbent = incumbent;

        if (cfg.algo == Algo::LocalTs) {
          x = local_thompson_select(*model, incumbent, cfg.acquisition.optimizer, domain,
                                    derive_seed(run_seed, kLtsTag, i),
                                    cfg.acquisition.num_features);
        } else {
          const AcquisitionRound round = build_round(
              model, incumbent, cfg.acquisition, domain, derive_seed(run_seed, kRoundTag, i));

          if (cfg.stopping_enabled) {
            stop_state.iteration = data.size();
            std::vector<double> regrets = local_regret_samples(round, incumbent);
            for (double& r : regrets) r *= std_tf.scale;
            stop_state = stop_decision(regrets, stop_cfg, stop_state);
            if (stop_state.stopped) {
              result.certificate = stop_state.certificate;
              stopped_now = true;
            }
          }

          if (!stopped_now) {
            if (cfg.algo == Algo::Les || cfg.batch_size == 1) {
              auto [query, score] = select_query(round);
              x = query;
              acq_score = score;
            } else {
              // Greedy batch construction under the joint score.
              std::vector<Vec> batch;
              double joint = 0.0;
              for (int b = 0; b < cfg.batch_size; ++b) {
                int best_idx = -1;
                double best_joint = -std::numeric_limits<double>::infinity();
                for (size_t c = 0; c < round.candidates.size(); ++c) {
                  std::vector<Vec> trial = batch;
                  trial.push_back(round.candidates[c]);
                  double s;
                  try {
                    s = qles_score(round, trial);
                  } catch (const NumericalError&) {
                    continue;
                  }
                  if (s > best_joint) {
                    best_joint = s;
                    best_idx = static_cast<int>(c);
                  }
                }
                if (best_idx < 0) break;
                batch.push_back(round.candidates[best_idx]);
                joint = best_joint;
              }
              if (batch.empty()) batch.push_back(round.incumbent);
              for (const Vec& p : batch) batch_queue.emplace_back(p, joint);
              x = batch_queue.front().first;
              acq_score = batch_queue.front().second;
              batch_queue.pop_front();
            }
          }
        }
      }

      if (stopped_now) {
        if (!result.records.empty()) result.records.back().stopped = true;
        break;
      }

      const double y = objective->evaluate(x);
      const double truth = objective->noiseless(x);
      data.add(x, y);
      raw_observations.push_back(y);
      best = std::min(best, y);
      cum += y;

      RunRecord rec;
      rec.seed = seed;
      rec.iteration = i;
      rec.x = x;
      rec.y = y;
      rec.best_y = best;
      rec.true_y = truth;
      rec.cum_y = cum;
      rec.acq = acq_score;
      rec.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
      result.records.push_back(std::move(rec));
    }

    if (result.final_incumbent.size() == 0 && !data.empty()) {
      // Runs that never built a model (e.g. Sobol) report the best observed
      // input as their incumbent.
      int best_idx = 0;
      for (int j = 1; j < data.size(); ++j)
        if (data.observations[j] < data.observations[best_idx]) best_idx = j;
      result.final_incumbent = data.inputs[best_idx];
    }
  } catch (const std::exception& e) {
    result.failed = true;
    result.error = e.what();
  }
  return result;
}

std::vector<SeedRunResult> run_experiment(const RunConfig& cfg, std::uint64_t master_seed,
                                          const std::vector<long>& seeds, int threads) {
  cfg.validate();
  if (seeds.empty()) throw std::invalid_argument("run_experiment: no seeds");

  std::vector<SeedRunResult> results(seeds.size());
  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(seeds.size())));

  if (threads == 1) {
    for (size_t i = 0; i < seeds.size(); ++i)
      results[i] = run_single_seed(cfg, master_seed, seeds[i]);
    return results;
  }

  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&]() {
      while (true) {
        const size_t i = next.fetch_add(1);
        if (i >= seeds.size()) return;
        results[i] = run_single_seed(cfg, master_seed, seeds[i]);
      }
    });
  for (auto& th : pool) th.join();
  return results;
}

}  // namespace lesopt
