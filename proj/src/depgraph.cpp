#include "gsp/depgraph.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace gsp {

std::vector<ObjectId> DependencyGraph::successors(ObjectId v) const {
  std::vector<ObjectId> out;
  for (const auto& [a, b] : arcs) {
    if (a == v) out.push_back(b);
  }
  return out;
}

Assignment ground_truth_assignment(const SceneSpec& spec) {
  return spec.true_goal;
}

DependencyGraph build_dependency_graph(const SceneSpec& spec, const SceneState& state,
                                       const Assignment& assignment) {
  DependencyGraph g;
  for (const auto& [i, loc] : state.location) {
    if (loc.kind == LocKind::Outside || loc.kind == LocKind::InHand) continue;
    GoalId j = assignment.at(i);
    if (j != kNonGoal && j > spec.num_goals) {
      throw std::invalid_argument("assignment references nonexistent goal");
    }
    // an object sitting exactly on its assigned goal is not movable
    if (loc.kind == LocKind::Placed && j != kNonGoal &&
        loc.footprint == spec.goal_footprint.at(j)) {
      continue;
    }
    g.vertices.insert(i);
  }
  for (ObjectId i0 : g.vertices) {
    GoalId j = assignment.at(i0);
    if (j == kNonGoal) continue;  // no goal region, no outgoing dependency
    const Footprint& goal = spec.goal_footprint.at(j);
    for (const auto& [i1, loc] : state.location) {
      if (i1 == i0 || loc.kind != LocKind::Placed) continue;
      if (footprints_intersect(loc.footprint, goal)) {
        // blockers outside the movable set (at-goal objects cannot occur here
        // because goal footprints are disjoint) still create no vertex
        if (g.vertices.count(i1)) g.arcs.insert({i0, i1});
      }
    }
  }
  return g;
}

namespace {

// reach[a][b]: path of length >= 1 from a to b
std::map<ObjectId, std::set<ObjectId>> transitive_closure(const DependencyGraph& g) {
  std::map<ObjectId, std::set<ObjectId>> reach;
  for (ObjectId v : g.vertices) reach[v] = {};
  for (const auto& [a, b] : g.arcs) reach[a].insert(b);
  for (ObjectId k : g.vertices) {
    for (ObjectId a : g.vertices) {
      if (!reach[a].count(k)) continue;
      for (ObjectId b : reach[k]) reach[a].insert(b);
    }
  }
  return reach;
}

}  // namespace

MembershipSets classify_membership(const DependencyGraph& g) {
  MembershipSets sets;
  std::set<ObjectId> has_out;
  for (const auto& [a, b] : g.arcs) has_out.insert(a);
  for (ObjectId v : g.vertices) {
    if (has_out.count(v)) {
      sets.blocked.insert(v);
    } else {
      sets.free.insert(v);
    }
  }
  const auto reach = transitive_closure(g);
  for (ObjectId v : g.vertices) {
    if (reach.at(v).count(v)) sets.cyclic.insert(v);
  }
  for (ObjectId v : g.vertices) {
    if (sets.cyclic.count(v)) {
      sets.cyclic_closure.insert(v);
      continue;
    }
    for (ObjectId c : sets.cyclic) {
      if (reach.at(v).count(c)) {
        sets.cyclic_closure.insert(v);
        break;
      }
    }
  }
  return sets;
}

bool has_cycle(const DependencyGraph& g, const std::set<ObjectId>& removed) {
  enum Color { White, Gray, Black };
  std::map<ObjectId, Color> color;
  for (ObjectId v : g.vertices) {
    if (!removed.count(v)) color[v] = White;
  }
  std::map<ObjectId, std::vector<ObjectId>> adj;
  for (const auto& [a, b] : g.arcs) {
    if (color.count(a) && color.count(b)) adj[a].push_back(b);
  }
  // iterative DFS with explicit finish markers
  for (const auto& [root, c] : color) {
    if (c != White) continue;
    std::vector<std::pair<ObjectId, bool>> stack{{root, false}};
    while (!stack.empty()) {
      auto [v, done] = stack.back();
      stack.pop_back();
      if (done) {
        color[v] = Black;
        continue;
      }
      if (color[v] == Black) continue;
      if (color[v] == Gray) continue;
      color[v] = Gray;
      stack.push_back({v, true});
      for (ObjectId w : adj[v]) {
        if (color[w] == Gray) return true;
        if (color[w] == White) stack.push_back({w, false});
      }
    }
  }
  return false;
}

namespace {

struct FvsSearch {
  const DependencyGraph& g;
  int best_size;

  explicit FvsSearch(const DependencyGraph& graph)
      : g(graph), best_size(static_cast<int>(graph.vertices.size())) {}

  // any cycle in g with `removed` deleted, empty if acyclic
  std::vector<ObjectId> find_cycle(const std::set<ObjectId>& removed) const {
    std::map<ObjectId, std::vector<ObjectId>> adj;
    for (const auto& [a, b] : g.arcs) {
      if (!removed.count(a) && !removed.count(b)) adj[a].push_back(b);
    }
    std::map<ObjectId, int> state;  // 0 white, 1 on path, 2 done
    std::vector<ObjectId> path;
    std::vector<ObjectId> cycle;

    std::function<bool(ObjectId)> dfs = [&](ObjectId v) {
      state[v] = 1;
      path.push_back(v);
      for (ObjectId w : adj[v]) {
        if (state[w] == 1) {
          auto it = std::find(path.begin(), path.end(), w);
          cycle.assign(it, path.end());
          return true;
        }
        if (state[w] == 0 && dfs(w)) return true;
      }
      path.pop_back();
      state[v] = 2;
      return false;
    };
    for (ObjectId v : g.vertices) {
      if (!removed.count(v) && state[v] == 0) {
        if (dfs(v)) return cycle;
      }
    }
    return {};
  }

  void search(std::set<ObjectId>& chosen) {
    if (static_cast<int>(chosen.size()) >= best_size) return;
    const auto cycle = find_cycle(chosen);
    if (cycle.empty()) {
      best_size = static_cast<int>(chosen.size());
      return;
    }
    std::vector<ObjectId> branch = cycle;
    std::sort(branch.begin(), branch.end());
    for (ObjectId v : branch) {
      chosen.insert(v);
      search(chosen);
      chosen.erase(v);
    }
  }
};

bool fvs_of_size_exists(const DependencyGraph& g, std::set<ObjectId>& fixed, int budget) {
  FvsSearch search(g);
  const auto cycle = search.find_cycle(fixed);
  if (cycle.empty()) return true;
  if (budget == 0) return false;
  std::vector<ObjectId> branch = cycle;
  std::sort(branch.begin(), branch.end());
  for (ObjectId v : branch) {
    fixed.insert(v);
    const bool ok = fvs_of_size_exists(g, fixed, budget - 1);
    fixed.erase(v);
    if (ok) return true;
  }
  return false;
}

}  // namespace

FvsResult min_fvs_exact(const DependencyGraph& g, int vertex_cap) {
  if (static_cast<int>(g.vertices.size()) > vertex_cap) {
    throw std::invalid_argument("graph exceeds exact-FVS vertex cap");
  }
  FvsSearch bnb(g);
  std::set<ObjectId> chosen;
  bnb.search(chosen);
  const int k = bnb.best_size;

  // lexicographically smallest member set of size k, built element by element
  FvsResult result;
  result.size = k;
  std::set<ObjectId> fixed;
  std::vector<ObjectId> candidates(g.vertices.begin(), g.vertices.end());
  int remaining = k;
  std::size_t start = 0;
  while (remaining > 0) {
    bool extended = false;
    for (std::size_t idx = start; idx < candidates.size(); ++idx) {
      ObjectId v = candidates[idx];
      fixed.insert(v);
      if (fvs_of_size_exists(g, fixed, remaining - 1)) {
        result.members.push_back(v);
        --remaining;
        start = idx + 1;
        extended = true;
        break;
      }
      fixed.erase(v);
    }
    if (!extended) throw std::logic_error("FVS reconstruction failed");
  }
  return result;
}

FvsResult min_fvs_bruteforce(const DependencyGraph& g, int vertex_cap) {
  const int n = static_cast<int>(g.vertices.size());
  if (n > vertex_cap) {
    throw std::invalid_argument("graph exceeds brute-force FVS vertex cap");
  }
  std::vector<ObjectId> verts(g.vertices.begin(), g.vertices.end());
  for (int k = 0; k <= n; ++k) {
    // combinations in lexicographic order
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) idx[static_cast<std::size_t>(t)] = t;
    while (true) {
      std::set<ObjectId> subset;
      for (int t : idx) subset.insert(verts[static_cast<std::size_t>(t)]);
      if (!has_cycle(g, subset)) {
        FvsResult result;
        result.members.assign(subset.begin(), subset.end());
        result.size = k;
        return result;
      }
      int pos = k - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
      if (pos < 0) break;
      ++idx[static_cast<std::size_t>(pos)];
      for (int t = pos + 1; t < k; ++t) {
        idx[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t - 1)] + 1;
      }
      if (k == 0) break;
    }
    if (k == 0 && !has_cycle(g, {})) {
      return FvsResult{};
    }
  }
  throw std::logic_error("unreachable: removing all vertices always breaks cycles");
}

int optimal_step_lower_bound(const SceneSpec& spec, const SceneState& state) {
  const Assignment truth = ground_truth_assignment(spec);
  int movable = 0;
  for (const auto& [i, loc] : state.location) {
    if (loc.kind == LocKind::Outside) continue;
    if (loc.kind == LocKind::Placed && is_at_goal(spec, state, i)) continue;
    ++movable;
  }
  const auto g = build_dependency_graph(spec, state, truth);
  const auto fvs = min_fvs_exact(g);
  return movable + fvs.size;
}

std::string to_edge_list(const DependencyGraph& g) {
  std::ostringstream out;
  for (const auto& [a, b] : g.arcs) {
    out << a << " " << b << "\n";
  }
  return out.str();
}

}  // namespace gsp
