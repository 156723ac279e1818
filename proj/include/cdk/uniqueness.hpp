#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "cdk/mixing.hpp"
#include "cdk/polytope.hpp"

namespace cdk {

enum class uniqueness_verdict {
  unique_map_induced,
  unique_not_map_induced,
  non_unique,
};

inline const char* to_string(uniqueness_verdict v) {
  switch (v) {
    case uniqueness_verdict::unique_map_induced: return "unique_map_induced";
    case uniqueness_verdict::unique_not_map_induced: return "unique_not_map_induced";
    case uniqueness_verdict::non_unique: return "non_unique";
  }
  return "?";
}

template <class S>
struct branch_witness {
  geodesic<S> g1, g2;
  int t_branch_step = 0;
  bool in_time_reverse = false;  // branching found in the time-reversed mixture
};

template <class S>
struct uniqueness_report {
  uniqueness_verdict verdict = uniqueness_verdict::unique_map_induced;
  bool exhaustive = true;
  std::size_t vertices_found = 0;
  std::size_t optimal_vertices = 0;
  std::optional<std::pair<transport_plan<S>, transport_plan<S>>> witness_pair;
  std::optional<transport_plan<S>> averaged;  // (pi1 + pi2)/2, optimal by linearity
  std::optional<int> crossing_step;           // first grid time where the lifts intersect
  std::optional<geodesic_plan<S>> mixed;
  std::optional<branch_witness<S>> branching;
};

/// Desk-scale uniqueness certification for optimal plans.
///
/// Enumerates the vertices of the transport polytope (up to budget) and keeps
/// the optimal-cost ones. A single optimal vertex means the optimal plan is
/// unique; it is additionally classified as map-induced or not. With two or
/// more, the report carries the witness pair, their average (also optimal),
/// and the recombination pipeline: lift both vertices, scan the grid for the
/// first time their interpolations intersect, mix them there, and search the
/// mixture and its time reverse for a branching pair.
template <class S>
uniqueness_report<S> certify_unique_optimal(const prob_measure<S>& mu0,
                                            const prob_measure<S>& mu1, int T,
                                            std::size_t budget, double tol_geo = 1e-9) {
  require_same_space(mu0.sp, mu1.sp, "certify_unique_optimal");
  uniqueness_report<S> rep;

  bool exhausted = true;
  auto all = enumerate_plan_vertices(mu0, mu1, budget, &exhausted);
  rep.vertices_found = all.size();
  rep.exhaustive = exhausted;
  S best = all.front().cost;
  for (const auto& v : all)
    if (v.cost < best) best = v.cost;
  std::vector<transport_plan<S>> optimal;
  for (const auto& v : all)
    if (abs_le(S(v.cost - best), scalar_traits<S>::is_exact ? 0.0 : 1e-9))
      optimal.push_back(make_plan<S>(mu0.sp, v.entries));
  rep.optimal_vertices = optimal.size();

  if (optimal.size() == 1) {
    rep.verdict = is_induced_by_map(optimal.front()).induced
                      ? uniqueness_verdict::unique_map_induced
                      : uniqueness_verdict::unique_not_map_induced;
    return rep;
  }

  rep.verdict = uniqueness_verdict::non_unique;
  rep.witness_pair = std::make_pair(optimal[0], optimal[1]);
  {
    std::vector<plan_entry<S>> avg = optimal[0].entries;
    for (auto& e : avg) e.mass = e.mass * ratio<S>(1, 2);
    for (auto e : optimal[1].entries) {
      e.mass = e.mass * ratio<S>(1, 2);
      avg.push_back(e);
    }
    rep.averaged = make_plan<S>(mu0.sp, std::move(avg));
  }

  auto pi1 = lift_plan(optimal[0], T, lift_strategy::uniform, tol_geo);
  auto pi2 = lift_plan(optimal[1], T, lift_strategy::uniform, tol_geo);
  for (int k = 1; k < T; ++k) {
    auto s1 = support_at(pi1, k);
    auto s2 = support_at(pi2, k);
    bool overlap = false;
    for (int p : s1)
      if (std::find(s2.begin(), s2.end(), p) != s2.end()) {
        overlap = true;
        break;
      }
    if (overlap) {
      rep.crossing_step = k;
      break;
    }
  }
  if (!rep.crossing_step) return rep;  // disjoint interpolations: nothing to recombine

  auto mixed = mix_plans(pi1, pi2, *rep.crossing_step, tol_geo);
  rep.mixed = mixed;
  auto scan = find_branching_pairs(mixed);
  if (!scan.essentially_nonbranching) {
    const auto& p = scan.pairs.front();
    rep.branching = branch_witness<S>{mixed.atoms[p.atom1].g, mixed.atoms[p.atom2].g,
                                      p.t_branch_step, false};
    return rep;
  }
  auto reversed = time_reverse(mixed);
  auto rscan = find_branching_pairs(reversed);
  if (!rscan.essentially_nonbranching) {
    const auto& p = rscan.pairs.front();
    rep.branching = branch_witness<S>{reversed.atoms[p.atom1].g, reversed.atoms[p.atom2].g,
                                      p.t_branch_step, true};
  }
  return rep;
}

}  // namespace cdk
