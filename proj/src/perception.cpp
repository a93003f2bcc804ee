#include "gsp/perception.hpp"

#include <cmath>
#include <stdexcept>

namespace gsp {

double MatchingDistribution::entropy() const {
  double h = 0.0;
  for (Eigen::Index j = 0; j < probs.size(); ++j) {
    const double p = probs[j];
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

GoalId MatchingDistribution::argmax() const {
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < probs.size(); ++j) {
    if (probs[j] > probs[best]) best = j;
  }
  return static_cast<GoalId>(best) + 1;
}

LatentViews make_latent_views(const NoiseModel& noise, const SceneSpec& spec, Rng& rng) {
  LatentViews latent;
  latent.good.resize(static_cast<std::size_t>(spec.num_objects));
  for (int i = 0; i < spec.num_objects; ++i) {
    auto& row = latent.good[static_cast<std::size_t>(i)];
    row.resize(static_cast<std::size_t>(noise.num_views));
    bool prev_good = !rng.bernoulli(noise.p_bad_view);
    row[0] = prev_good;
    for (int v = 1; v < noise.num_views; ++v) {
      if (!rng.bernoulli(noise.quality_persistence)) {
        prev_good = !rng.bernoulli(noise.p_bad_view);
      }
      row[static_cast<std::size_t>(v)] = prev_good;
    }
  }
  return latent;
}

SimilarityVector mean_similarity(const NoiseModel& noise, int num_goals, ObjectId i,
                                 GoalId hypothesis_goal, bool good_view) {
  SimilarityVector mean = SimilarityVector::Constant(num_goals, noise.mu_nonmatch);
  if (hypothesis_goal == kNonGoal) return mean;  // quality irrelevant for non-goal
  if (good_view) {
    mean[hypothesis_goal - 1] = noise.mu_match;
  } else {
    mean[hypothesis_goal - 1] = noise.mu_bad;
    const GoalId confuser = noise.confuser_of(i);
    if (confuser != kNonGoal) mean[confuser - 1] = noise.mu_match;
  }
  return mean;
}

SimilarityVector sample_view(const NoiseModel& noise, const SceneSpec& spec,
                             const LatentViews& latent, ObjectId i, int view, Rng& rng) {
  if (view < 1 || view > noise.num_views) {
    throw std::out_of_range("view index out of range");
  }
  const SimilarityVector mean = mean_similarity(
      noise, spec.num_goals, i, spec.true_goal.at(i), latent.is_good(i, view));
  SimilarityVector sample(spec.num_goals);
  for (Eigen::Index j = 0; j < sample.size(); ++j) {
    sample[j] = rng.normal(mean[j], noise.sigma);
  }
  return sample;
}

void fuse_views(ViewState& state, int view, const SimilarityVector& sample,
                FusionMode mode) {
  if (!state.samples.empty() && sample.size() != state.samples.front().size()) {
    throw std::invalid_argument("similarity vector length mismatch");
  }
  state.observed_views.push_back(view);
  state.samples.push_back(sample);
  switch (mode) {
    case FusionMode::Mean: {
      SimilarityVector acc = SimilarityVector::Zero(sample.size());
      for (const auto& s : state.samples) acc += s;
      state.fused = acc / static_cast<double>(state.samples.size());
      break;
    }
    case FusionMode::LatestOnly:
      state.fused = sample;
      break;
  }
}

MatchingDistribution to_distribution(const SimilarityVector& scores, double temperature) {
  if (temperature <= 0.0) throw std::invalid_argument("temperature must be positive");
  const double peak = scores.maxCoeff();
  Eigen::VectorXd exps = ((scores.array() - peak) / temperature).exp();
  return MatchingDistribution{exps / exps.sum()};
}

GoalId classify_goal(const MatchingDistribution& d, int num_goals,
                     const Thresholds& thresholds) {
  if (d.score() >= thresholds.zeta_g(num_goals)) return d.argmax();
  return kNonGoal;
}

bool should_terminate(const MatchingDistribution& d, int num_goals,
                      const Thresholds& thresholds) {
  return d.score() >= thresholds.zeta_m(num_goals);
}

std::map<ObjectId, MatchingDistribution> observe_scene(const NoiseModel& noise,
                                                       const SceneSpec& spec,
                                                       const SceneState& state,
                                                       const LatentViews& latent,
                                                       Rng& rng) {
  std::map<ObjectId, MatchingDistribution> result;
  for (const auto& [i, loc] : state.location) {
    if (loc.kind == LocKind::Outside) continue;
    const auto sample = sample_view(noise, spec, latent, i, 1, rng);
    result.emplace(i, to_distribution(sample, noise.temperature));
  }
  return result;
}

}  // namespace gsp
