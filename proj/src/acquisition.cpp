#include "lesopt/acquisition.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "lesopt/rng.hpp"

namespace lesopt {

namespace {

constexpr std::uint64_t kBasisTag = 0x6261736973ULL;
constexpr std::uint64_t kPathTag = 0x70617468ULL;
constexpr std::uint64_t kFallbackTag = 0x66616c6cULL;

double entropy_difference(const AugmentedConditioner::Variances& v) {
  return 0.5 * (std::log(v.base) - std::log(v.augmented));
}

}  // namespace

AcquisitionRound build_round(std::shared_ptr<const GpModel> model, const Vec& incumbent,
                             const AcquisitionConfig& cfg, const BoxDomain& domain,
                             std::uint64_t rng_seed) {
  cfg.validate();
  if (!domain.contains(incumbent, 1e-12))
    throw std::invalid_argument("build_round: incumbent outside the domain");

  AcquisitionRound round;
  round.model = model;
  round.domain = domain;
  round.incumbent = incumbent;
  round.basis = std::make_shared<FeatureBasis>(
      draw_basis(model->hyperparams, cfg.num_features, derive_seed(rng_seed, kBasisTag)));

  const int L = cfg.num_paths;
  round.paths.reserve(L);
  round.sequences.reserve(L);
  for (int l = 0; l < L; ++l) {
    round.paths.push_back(
        draw_path(*model, round.basis, derive_seed(rng_seed, kPathTag, l)));
    DescentSequence seq = descend(round.paths.back(), incumbent, cfg.optimizer, domain);
    seq.support = discretize(seq, cfg.support_points);
    round.sequences.push_back(std::move(seq));
  }

  const int d = domain.dim();
  const double radius =
      cfg.dedup_radius >= 0.0 ? cfg.dedup_radius : 1e-6 * std::sqrt(double(d));
  for (const auto& seq : round.sequences) {
    for (const auto& p : seq.support) {
      bool duplicate = false;
      for (const auto& c : round.candidates) {
        if ((p - c).norm() <= radius) {
          duplicate = true;
          break;
        }
      }
      if (!duplicate) round.candidates.push_back(p);
    }
  }

  if (round.candidates.size() <= 1) {
    // Every descent stalled at the incumbent; pad with uniform random points
    // so the round still has something to score.
    round.fallback = true;
    Rng rng = make_rng(derive_seed(rng_seed, kFallbackTag));
    if (round.candidates.empty()) round.candidates.push_back(incumbent);
    for (int l = 0; l < L; ++l) {
      Vec p(d);
      for (int i = 0; i < d; ++i)
        p[i] = domain.lower[i] +
               (domain.upper[i] - domain.lower[i]) *
                   std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      round.candidates.push_back(p);
    }
  }

  round.sequence_alive.assign(L, 0);
  round.conditioners.reserve(L);
  int failed = 0;
  for (int l = 0; l < L; ++l) {
    try {
      round.conditioners.emplace_back(*model, round.sequences[l].support);
      round.sequence_alive[l] = 1;
      ++round.alive_count;
    } catch (const NumericalError&) {
      round.conditioners.emplace_back(*model, std::vector<Vec>{});
      ++failed;
    }
  }
  if (failed > 0 && failed * 20 > L)
    throw NumericalError("build_round: more than 5% of sequence factorizations failed (" +
                         std::to_string(failed) + " of " + std::to_string(L) + ")");
  return round;
}

double les_score(const AcquisitionRound& round, const Vec& x) {
  if (round.alive_count == 0) return 0.0;
  Vec w;
  if (round.model->size() > 0) {
    const Vec k = kernel_vector(round.model->train_inputs, x, round.model->hyperparams);
    w = round.model->chol.triangularView<Eigen::Lower>().solve(k);
  }
  double acc = 0.0;
  for (size_t l = 0; l < round.conditioners.size(); ++l) {
    if (!round.sequence_alive[l]) continue;
    acc += entropy_difference(round.conditioners[l].variances(x, w));
  }
  return acc / round.alive_count;
}

std::pair<Vec, double> select_query(const AcquisitionRound& round) {
  if (round.candidates.empty())
    throw std::invalid_argument("select_query: empty candidate set");

  int best = 0;
  double best_score = les_score(round, round.candidates[0]);
  double best_mean = predict(*round.model, round.candidates[0]).mean;
  for (size_t i = 1; i < round.candidates.size(); ++i) {
    const double score = les_score(round, round.candidates[i]);
    if (score > best_score) {
      best = static_cast<int>(i);
      best_score = score;
      best_mean = predict(*round.model, round.candidates[i]).mean;
    } else if (score == best_score) {
      const double mean = predict(*round.model, round.candidates[i]).mean;
      if (mean < best_mean) {
        best = static_cast<int>(i);
        best_mean = mean;
      }
    }
  }
  return {round.candidates[best], best_score};
}

double qles_score(const AcquisitionRound& round, const std::vector<Vec>& batch) {
  const int q = static_cast<int>(batch.size());
  if (q < 1) throw std::invalid_argument("qles_score: empty batch");
  const GpModel& model = *round.model;
  const GpHyperparams& hp = model.hyperparams;

  std::vector<Vec> w(q);
  if (model.size() > 0) {
    for (int i = 0; i < q; ++i) {
      const Vec k = kernel_vector(model.train_inputs, batch[i], hp);
      w[i] = model.chol.triangularView<Eigen::Lower>().solve(k);
    }
  } else {
    for (int i = 0; i < q; ++i) w[i] = Vec();
  }

  Mat base(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = i; j < q; ++j) {
      double c = kernel_eval(batch[i], batch[j], hp) - w[i].dot(w[j]);
      if (i == j) c += hp.noise_var;
      base(i, j) = c;
      base(j, i) = c;
    }
  Eigen::LLT<Mat> base_llt(base);
  if (base_llt.info() != Eigen::Success)
    throw NumericalError("qles_score: singular batch covariance");
  const double base_logdet =
      2.0 * Mat(base_llt.matrixL()).diagonal().array().log().sum();

  if (round.alive_count == 0) return 0.0;
  double acc = 0.0;
  for (size_t l = 0; l < round.conditioners.size(); ++l) {
    if (!round.sequence_alive[l]) continue;
    const auto& cond = round.conditioners[l];
    std::vector<Vec> u(q);
    for (int i = 0; i < q; ++i) u[i] = cond.schur_solve(batch[i], w[i]);
    Mat cm = base;
    for (int i = 0; i < q; ++i)
      for (int j = i; j < q; ++j) {
        const double r = u[i].dot(u[j]);
        cm(i, j) -= r;
        if (i != j) cm(j, i) -= r;
      }
    Eigen::LLT<Mat> llt(cm);
    if (llt.info() != Eigen::Success)
      throw NumericalError("qles_score: singular conditioned batch covariance");
    acc += base_logdet - 2.0 * Mat(llt.matrixL()).diagonal().array().log().sum();
  }
  return 0.5 * acc / round.alive_count;
}

Vec local_thompson_select(const GpModel& model, const Vec& incumbent,
                          const OptimizerConfig& cfg, const BoxDomain& domain,
                          std::uint64_t rng_seed, int num_features) {
  auto basis = std::make_shared<FeatureBasis>(
      draw_basis(model.hyperparams, num_features, derive_seed(rng_seed, kBasisTag)));
  const SamplePath path = draw_path(model, basis, derive_seed(rng_seed, kPathTag));
  return descend(path, incumbent, cfg, domain).terminal;
}

}  // namespace lesopt
