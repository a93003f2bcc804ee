#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <vector>

#include "gsp/rng.hpp"
#include "gsp/scene.hpp"

namespace gsp {

using SimilarityVector = Eigen::VectorXd;

struct MatchingDistribution {
  Eigen::VectorXd probs;

  double score() const { return probs.maxCoeff(); }
  double entropy() const;
  // 1-based, lowest index on ties
  GoalId argmax() const;
};

struct Thresholds {
  double omega_m = 0.12;  // see self-termination offset
  double omega_g = 0.04;  // goal/non-goal boundary offset

  double zeta_m(int num_goals) const { return 1.0 / num_goals + omega_m; }
  double zeta_g(int num_goals) const { return 1.0 / num_goals + omega_g; }
};

enum class FusionMode { Mean, LatestOnly };

// Synthetic per-view similarity generator standing in for an image matcher.
// View qualities follow a Markov chain over the view index: a view repeats the
// previous view's quality with probability quality_persistence, otherwise it is
// redrawn as bad with probability p_bad_view (marginal stays p_bad_view).
struct NoiseModel {
  double mu_match = 1.0;
  double mu_nonmatch = 0.0;
  double sigma = 0.0;
  double p_bad_view = 0.0;
  double mu_bad = 0.0;
  double quality_persistence = 0.5;  // 0.5 = independent qualities
  double temperature = 0.1;
  int num_views = 12;
  std::map<ObjectId, GoalId> confuser;  // look-alike goal boosted on bad views

  GoalId confuser_of(ObjectId i) const {
    auto it = confuser.find(i);
    return it == confuser.end() ? kNonGoal : it->second;
  }
};

// Latent per-(object, view) qualities, frozen at scene creation.
// View 1 doubles as the scene view; views 2..V are reachable by see actions.
struct LatentViews {
  std::vector<std::vector<bool>> good;  // good[object-1][view-1]

  bool is_good(ObjectId i, int view) const {
    return good[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(view - 1)];
  }
};

LatentViews make_latent_views(const NoiseModel& noise, const SceneSpec& spec, Rng& rng);

// Multi-view fusion state of one in-hand session.
struct ViewState {
  ObjectId object = 0;
  std::vector<int> observed_views;
  std::vector<SimilarityVector> samples;  // raw, parallel to observed_views
  SimilarityVector fused;
};

// mean similarity vector for object i on a view of the given quality under the
// hypothesis that i's true goal is `hypothesis_goal`
SimilarityVector mean_similarity(const NoiseModel& noise, int num_goals, ObjectId i,
                                 GoalId hypothesis_goal, bool good_view);

SimilarityVector sample_view(const NoiseModel& noise, const SceneSpec& spec,
                             const LatentViews& latent, ObjectId i, int view, Rng& rng);

void fuse_views(ViewState& state, int view, const SimilarityVector& sample,
                FusionMode mode);

MatchingDistribution to_distribution(const SimilarityVector& scores, double temperature);

GoalId classify_goal(const MatchingDistribution& d, int num_goals,
                     const Thresholds& thresholds);

bool should_terminate(const MatchingDistribution& d, int num_goals,
                      const Thresholds& thresholds);

std::map<ObjectId, MatchingDistribution> observe_scene(const NoiseModel& noise,
                                                       const SceneSpec& spec,
                                                       const SceneState& state,
                                                       const LatentViews& latent,
                                                       Rng& rng);

}  // namespace gsp
