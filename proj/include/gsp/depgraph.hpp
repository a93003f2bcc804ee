#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gsp/scene.hpp"

namespace gsp {

struct DependencyGraph {
  std::set<ObjectId> vertices;
  std::set<std::pair<ObjectId, ObjectId>> arcs;  // (i0, i1): i0 depends on i1

  std::vector<ObjectId> successors(ObjectId v) const;
};

struct MembershipSets {
  std::set<ObjectId> free;            // out-degree 0, directly movable
  std::set<ObjectId> blocked;         // goal occupied by others
  std::set<ObjectId> cyclic;          // on some directed cycle
  std::set<ObjectId> cyclic_closure;  // cyclic plus upstream vertices
};

struct FvsResult {
  std::vector<ObjectId> members;  // sorted ascending
  int size = 0;
};

using Assignment = std::map<ObjectId, GoalId>;  // kNonGoal marks non-goal objects

Assignment ground_truth_assignment(const SceneSpec& spec);

DependencyGraph build_dependency_graph(const SceneSpec& spec, const SceneState& state,
                                       const Assignment& assignment);

MembershipSets classify_membership(const DependencyGraph& g);

bool has_cycle(const DependencyGraph& g, const std::set<ObjectId>& removed = {});

FvsResult min_fvs_exact(const DependencyGraph& g, int vertex_cap = 30);
FvsResult min_fvs_bruteforce(const DependencyGraph& g, int vertex_cap = 12);

// M' + |B| of the ground-truth graph: movable-object count plus min FVS size
int optimal_step_lower_bound(const SceneSpec& spec, const SceneState& state);

std::string to_edge_list(const DependencyGraph& g);

}  // namespace gsp
