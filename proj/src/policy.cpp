#include "gsp/policy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace gsp {

std::optional<GraspAction> select_grasp(GraspPolicyKind kind,
                                        const MembershipSets& membership,
                                        const FvsResult& fvs, Rng& rng) {
  if (membership.free.empty() && membership.blocked.empty()) return std::nullopt;
  switch (kind) {
    case GraspPolicyKind::Pi0: {
      if (!membership.free.empty()) {
        std::vector<ObjectId> free(membership.free.begin(), membership.free.end());
        return GraspAction{rng.pick(free)};
      }
      // all remaining objects are blocked: resolve circular dependency,
      // deterministic first member of the minimum FVS
      return GraspAction{fvs.members.front()};
    }
    case GraspPolicyKind::GreedyFreeGoal: {
      if (!membership.free.empty()) return GraspAction{*membership.free.begin()};
      return GraspAction{*membership.blocked.begin()};
    }
    case GraspPolicyKind::RandomGrasp: {
      std::vector<ObjectId> all(membership.free.begin(), membership.free.end());
      all.insert(all.end(), membership.blocked.begin(), membership.blocked.end());
      std::sort(all.begin(), all.end());
      return GraspAction{rng.pick(all)};
    }
  }
  return std::nullopt;
}

double view_action_magnitude(int from_view, int to_view, int num_views) {
  const int d = std::abs(from_view - to_view);
  const int circular = std::min(d, num_views - d);
  return circular * (2.0 * 3.14159265358979323846 / num_views);
}

namespace {

constexpr double kMinLikelihoodSigma = 1e-3;

double log_normal_pdf(double x, double mean, double stddev) {
  const double z = (x - mean) / stddev;
  return -0.5 * z * z - std::log(stddev) - 0.91893853320467274178;  // 0.5*log(2*pi)
}

// quality chain posterior marginals, one forward-backward pass per identity
// hypothesis; state 0 = good, 1 = bad
std::vector<std::array<double, 2>> quality_marginals(const ViewState& vs,
                                                     const NoiseModel& noise,
                                                     GoalId hypothesis) {
  const int num_views = noise.num_views;
  const double p = noise.p_bad_view;
  const double rho = noise.quality_persistence;
  const std::array<double, 2> marginal{1.0 - p, p};
  const double sigma = std::max(noise.sigma, kMinLikelihoodSigma);

  // per-view emission likelihoods of the raw samples
  std::vector<std::array<double, 2>> emit(
      static_cast<std::size_t>(num_views), std::array<double, 2>{1.0, 1.0});
  const int num_goals = static_cast<int>(vs.fused.size());
  for (std::size_t k = 0; k < vs.observed_views.size(); ++k) {
    const int view = vs.observed_views[k];
    const SimilarityVector& sample = vs.samples[k];
    std::array<double, 2> log_l{0.0, 0.0};
    for (int q = 0; q < 2; ++q) {
      const SimilarityVector mean =
          mean_similarity(noise, num_goals, vs.object, hypothesis, q == 0);
      for (Eigen::Index j = 0; j < sample.size(); ++j) {
        log_l[static_cast<std::size_t>(q)] += log_normal_pdf(sample[j], mean[j], sigma);
      }
    }
    // per-view scaling cancels in the posterior
    const double peak = std::max(log_l[0], log_l[1]);
    emit[static_cast<std::size_t>(view - 1)] = {std::exp(log_l[0] - peak),
                                                std::exp(log_l[1] - peak)};
  }

  auto transition = [&](int a, int b) {
    return rho * (a == b ? 1.0 : 0.0) + (1.0 - rho) * marginal[static_cast<std::size_t>(b)];
  };

  std::vector<std::array<double, 2>> fwd(static_cast<std::size_t>(num_views));
  std::vector<std::array<double, 2>> bwd(
      static_cast<std::size_t>(num_views), std::array<double, 2>{1.0, 1.0});
  for (int q = 0; q < 2; ++q) {
    fwd[0][static_cast<std::size_t>(q)] =
        marginal[static_cast<std::size_t>(q)] * emit[0][static_cast<std::size_t>(q)];
  }
  for (int t = 1; t < num_views; ++t) {
    for (int q = 0; q < 2; ++q) {
      double acc = 0.0;
      for (int r = 0; r < 2; ++r) {
        acc += fwd[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(r)] *
               transition(r, q);
      }
      fwd[static_cast<std::size_t>(t)][static_cast<std::size_t>(q)] =
          acc * emit[static_cast<std::size_t>(t)][static_cast<std::size_t>(q)];
    }
    const double norm = fwd[static_cast<std::size_t>(t)][0] + fwd[static_cast<std::size_t>(t)][1];
    if (norm > 0.0) {
      fwd[static_cast<std::size_t>(t)][0] /= norm;
      fwd[static_cast<std::size_t>(t)][1] /= norm;
    }
  }
  for (int t = num_views - 2; t >= 0; --t) {
    for (int q = 0; q < 2; ++q) {
      double acc = 0.0;
      for (int r = 0; r < 2; ++r) {
        acc += transition(q, r) *
               emit[static_cast<std::size_t>(t + 1)][static_cast<std::size_t>(r)] *
               bwd[static_cast<std::size_t>(t + 1)][static_cast<std::size_t>(r)];
      }
      bwd[static_cast<std::size_t>(t)][static_cast<std::size_t>(q)] = acc;
    }
    const double norm = bwd[static_cast<std::size_t>(t)][0] + bwd[static_cast<std::size_t>(t)][1];
    if (norm > 0.0) {
      bwd[static_cast<std::size_t>(t)][0] /= norm;
      bwd[static_cast<std::size_t>(t)][1] /= norm;
    }
  }

  std::vector<std::array<double, 2>> gamma(static_cast<std::size_t>(num_views));
  for (int t = 0; t < num_views; ++t) {
    double g0 = fwd[static_cast<std::size_t>(t)][0] * bwd[static_cast<std::size_t>(t)][0];
    double g1 = fwd[static_cast<std::size_t>(t)][1] * bwd[static_cast<std::size_t>(t)][1];
    const double norm = g0 + g1;
    if (norm > 0.0) {
      g0 /= norm;
      g1 /= norm;
    } else {
      g0 = marginal[0];
      g1 = marginal[1];
    }
    gamma[static_cast<std::size_t>(t)] = {g0, g1};
  }
  return gamma;
}

double entropy_after(const ViewState& vs, const NoiseModel& noise,
                     const SimilarityVector& next_sample, FusionMode fusion) {
  SimilarityVector fused_after;
  if (fusion == FusionMode::LatestOnly || vs.samples.empty()) {
    fused_after = next_sample;
  } else {
    SimilarityVector acc = next_sample;
    for (const auto& s : vs.samples) acc += s;
    fused_after = acc / static_cast<double>(vs.samples.size() + 1);
  }
  return to_distribution(fused_after, noise.temperature).entropy();
}

}  // namespace

double expected_entropy_drop(const ViewState& view_state, const NoiseModel& noise,
                             const MatchingDistribution& current, int candidate_view,
                             FusionMode fusion) {
  const int num_goals = static_cast<int>(current.probs.size());
  const double entropy_before = current.entropy();
  double expected_after = 0.0;
  for (GoalId j = 1; j <= num_goals; ++j) {
    const double weight = current.probs[j - 1];
    if (weight <= 0.0) continue;
    const auto gamma = quality_marginals(view_state, noise, j);
    for (int q = 0; q < 2; ++q) {
      const double p_quality =
          gamma[static_cast<std::size_t>(candidate_view - 1)][static_cast<std::size_t>(q)];
      if (p_quality <= 0.0) continue;
      const SimilarityVector mean =
          mean_similarity(noise, num_goals, view_state.object, j, q == 0);
      expected_after +=
          weight * p_quality * entropy_after(view_state, noise, mean, fusion);
    }
  }
  return entropy_before - expected_after;
}

std::optional<SeeAction> select_view(SeePolicyKind kind, const ViewState& view_state,
                                     const std::set<int>& excluded_views,
                                     const NoiseModel& noise, const LatentViews& latent,
                                     const MatchingDistribution& current,
                                     FusionMode fusion, Rng& rng) {
  if (kind == SeePolicyKind::NoSee) return std::nullopt;
  std::vector<int> candidates;
  for (int v = 1; v <= noise.num_views; ++v) {
    if (!excluded_views.count(v)) candidates.push_back(v);
  }
  if (candidates.empty()) return std::nullopt;
  switch (kind) {
    case SeePolicyKind::RandomSee:
      return SeeAction{rng.pick(candidates)};
    case SeePolicyKind::GreedySee: {
      int best = candidates.front();
      double best_drop = expected_entropy_drop(view_state, noise, current, best, fusion);
      for (std::size_t k = 1; k < candidates.size(); ++k) {
        const double drop =
            expected_entropy_drop(view_state, noise, current, candidates[k], fusion);
        if (drop > best_drop) {
          best = candidates[k];
          best_drop = drop;
        }
      }
      return SeeAction{best};
    }
    case SeePolicyKind::OracleSee: {
      for (int v : candidates) {
        if (latent.is_good(view_state.object, v)) return SeeAction{v};
      }
      return std::nullopt;
    }
    default:
      break;
  }
  return std::nullopt;
}

namespace {

PlaceTarget place_rule(const MatchingDistribution& d, const SceneSpec& spec,
                       const SceneState& state, ObjectId in_hand,
                       const Thresholds& thresholds) {
  if (d.score() < thresholds.zeta_g(spec.num_goals)) return PlaceTarget::ToOutside();
  const GoalId j = d.argmax();
  if (goal_free(spec, state, j, in_hand)) return PlaceTarget::ToGoal(j);
  return PlaceTarget::ToBuffer();
}

}  // namespace

PlaceTarget select_place(const MatchingDistribution& d_inhand, const SceneSpec& spec,
                         const SceneState& state, ObjectId in_hand,
                         const Thresholds& thresholds) {
  return place_rule(d_inhand, spec, state, in_hand, thresholds);
}

PlaceTarget select_place_pi0(const MatchingDistribution& d_scene, const SceneSpec& spec,
                             const SceneState& state, ObjectId in_hand,
                             const Thresholds& thresholds) {
  return place_rule(d_scene, spec, state, in_hand, thresholds);
}

}  // namespace gsp
