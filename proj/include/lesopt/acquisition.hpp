#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "lesopt/descent.hpp"
#include "lesopt/gp.hpp"
#include "lesopt/pathwise.hpp"

namespace lesopt {

struct AcquisitionConfig {
  int num_paths = 250;       // L
  int support_points = 8;    // P
  int num_features = 1024;   // M, features of the shared basis
  OptimizerConfig optimizer;
  double dedup_radius = -1.0;  // < 0 means the default 1e-6 * sqrt(d)

  void validate() const {
    if (num_paths < 1) throw std::invalid_argument("AcquisitionConfig: num_paths >= 1");
    if (support_points < 2)
      throw std::invalid_argument("AcquisitionConfig: support_points >= 2");
    if (num_features < 1)
      throw std::invalid_argument("AcquisitionConfig: num_features >= 1");
    optimizer.validate();
  }
};

// One acquisition round: L posterior paths, their descent sequences from the
// incumbent, the deduplicated candidate set, and per-sequence cached
// conditioners so scoring a candidate costs one small triangular solve per
// sequence.
struct AcquisitionRound {
  std::shared_ptr<const GpModel> model;
  std::shared_ptr<const FeatureBasis> basis;
  std::vector<SamplePath> paths;
  std::vector<DescentSequence> sequences;
  std::vector<Vec> candidates;
  std::vector<AugmentedConditioner> conditioners;  // parallel to sequences
  std::vector<char> sequence_alive;                // conditioner build succeeded
  int alive_count = 0;
  bool fallback = false;  // candidates collapsed to the incumbent
  BoxDomain domain;
  Vec incumbent;
};

AcquisitionRound build_round(std::shared_ptr<const GpModel> model, const Vec& incumbent,
                             const AcquisitionConfig& cfg, const BoxDomain& domain,
                             std::uint64_t rng_seed);

// alpha(x) = H[y(x) | D] - 1/L sum_l H[y(x) | D u Q^l]; non-negative since
// conditioning contracts the predictive variance.
double les_score(const AcquisitionRound& round, const Vec& x);

// Argmax of les_score over the candidate set. Ties break toward the lower
// posterior mean, then the earlier candidate.
std::pair<Vec, double> select_query(const AcquisitionRound& round);

// Batch form: 1/2 log det of the q x q predictive covariance minus the mean
// of the conditioned log dets. Reduces to les_score for q = 1.
double qles_score(const AcquisitionRound& round, const std::vector<Vec>& batch);

// Draws a single posterior path, descends it from the incumbent, and returns
// the terminal iterate.
Vec local_thompson_select(const GpModel& model, const Vec& incumbent,
                          const OptimizerConfig& cfg, const BoxDomain& domain,
                          std::uint64_t rng_seed, int num_features = 1024);

}  // namespace lesopt
