#pragma once

#include <optional>
#include <set>

#include "gsp/depgraph.hpp"
#include "gsp/perception.hpp"
#include "gsp/rng.hpp"
#include "gsp/scene.hpp"

namespace gsp {

struct GraspAction {
  ObjectId object = 0;
};

struct SeeAction {
  int view = 0;
};

enum class GraspPolicyKind { Pi0, GreedyFreeGoal, RandomGrasp };
enum class SeePolicyKind { NoSee, RandomSee, GreedySee, OracleSee };

// nullopt when no movable object remains
std::optional<GraspAction> select_grasp(GraspPolicyKind kind,
                                        const MembershipSets& membership,
                                        const FvsResult& fvs, Rng& rng);

// nullopt means Stop. excluded_views holds views already observed or attempted
// this in-hand session; the caller checks should_terminate beforehand.
std::optional<SeeAction> select_view(SeePolicyKind kind, const ViewState& view_state,
                                     const std::set<int>& excluded_views,
                                     const NoiseModel& noise, const LatentViews& latent,
                                     const MatchingDistribution& current,
                                     FusionMode fusion, Rng& rng);

// expected entropy reduction of observing candidate_view next, marginalized over
// the view-quality chain posterior and goal identities weighted by `current`
double expected_entropy_drop(const ViewState& view_state, const NoiseModel& noise,
                             const MatchingDistribution& current, int candidate_view,
                             FusionMode fusion);

PlaceTarget select_place(const MatchingDistribution& d_inhand, const SceneSpec& spec,
                         const SceneState& state, ObjectId in_hand,
                         const Thresholds& thresholds);

// same rule fed the scene-level distribution of the grasped object
PlaceTarget select_place_pi0(const MatchingDistribution& d_scene, const SceneSpec& spec,
                             const SceneState& state, ObjectId in_hand,
                             const Thresholds& thresholds);

// angular magnitude of moving between two views on the view circle
double view_action_magnitude(int from_view, int to_view, int num_views);

}  // namespace gsp
