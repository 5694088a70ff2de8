#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lesopt/acquisition.hpp"
#include "lesopt/bench.hpp"
#include "lesopt/stopping.hpp"

namespace lesopt {

enum class Algo { Les, QLes, LocalTs, Sobol };
enum class Protocol { WithinModel, OutOfModel };
enum class ObjectiveKind { GpSample, Sphere, Ackley };

std::string algo_name(Algo algo);
Algo algo_from_name(const std::string& name);
std::string protocol_name(Protocol protocol);
Protocol protocol_from_name(const std::string& name);

struct TaskSpec {
  ObjectiveKind kind = ObjectiveKind::GpSample;
  int dimension = 2;
  ComplexityLevel level = ComplexityLevel::Medium;
  int objective_features = 1024;  // features behind a GP-sample ground truth

  std::string name() const;
};

struct RunConfig {
  TaskSpec task;
  Algo algo = Algo::Les;
  Protocol protocol = Protocol::WithinModel;
  int budget = 100;
  AcquisitionConfig acquisition;
  int batch_size = 1;  // q, used by QLes
  int initial_samples = 2;
  bool stopping_enabled = false;
  double epsilon = 0.1;
  double delta = 0.05;
  double delta_est = 0.0025;
  int decision_period = 25;
  bool standardize = false;

  void validate() const;
};

struct RunRecord {
  long seed = 0;
  int iteration = 0;  // 1-based evaluation index
  Vec x;
  double y = 0.0;
  double best_y = 0.0;
  std::optional<double> true_y;
  double cum_y = 0.0;
  std::optional<double> acq;
  bool stopped = false;
  double wall_ms = 0.0;
};

struct SeedRunResult {
  long seed = 0;
  std::vector<RunRecord> records;
  int map_fit_calls = 0;
  std::optional<StoppingCertificate> certificate;
  Vec final_incumbent;  // incumbent at stop or at budget exhaustion
  bool failed = false;
  std::string error;
};

// Seed of the ground-truth GP objective a run draws; lets callers reconstruct
// the true function of a finished run.
std::uint64_t objective_seed(std::uint64_t master_seed, long seed);

SeedRunResult run_single_seed(const RunConfig& cfg, std::uint64_t master_seed, long seed);

// Runs seeds independently, optionally across threads. Per-seed streams do
// not depend on the execution order.
std::vector<SeedRunResult> run_experiment(const RunConfig& cfg, std::uint64_t master_seed,
                                          const std::vector<long>& seeds, int threads = 0);

}  // namespace lesopt
