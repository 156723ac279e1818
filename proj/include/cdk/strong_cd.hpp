#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cdk/entropy.hpp"
#include "cdk/geodesic_plan.hpp"
#include "cdk/parallel.hpp"
#include "cdk/polytope.hpp"
#include "cdk/rng.hpp"

namespace cdk {

template <class S>
struct strong_cd_report {
  bool pass = true;
  bool exhaustive = true;      // false once the budget truncated enumeration
  std::size_t optimal_vertices = 0;
  std::size_t vertex_plans = 0;   // lifted-polytope vertices evaluated
  std::size_t sampled_plans = 0;  // random interior plans evaluated
  double worst_slack = -std::numeric_limits<double>::infinity();
  std::optional<geodesic_plan<S>> witness;  // first violating plan, if any
  cd_report witness_report;
};

namespace detail {

// Geodesic plan from a transport vertex and one geodesic choice per pair.
template <class S>
geodesic_plan<S> lift_with_choice(space_ptr<S> sp, int T,
                                  const std::vector<plan_entry<S>>& entries,
                                  const std::vector<std::vector<geodesic<S>>>& geos,
                                  const std::vector<std::size_t>& choice) {
  std::vector<geo_atom<S>> atoms;
  for (std::size_t k = 0; k < entries.size(); ++k)
    atoms.push_back({geos[k][choice[k]], entries[k].mass});
  return make_geodesic_plan<S>(std::move(sp), T, std::move(atoms));
}

}  // namespace detail

/// Certifies strong CD(K, infinity) between mu0 and mu1 at resolution T, at
/// the given budget.
///
/// The set of geodesic plans whose interpolation is a W2 geodesic from mu0
/// to mu1 is the polytope of geodesic-indexed couplings with the prescribed
/// endpoint marginals and W2-optimal cost. Its vertices are exactly
/// (optimal transport vertex) x (one geodesic per support pair); those are
/// enumerated first, then `budget` random interior plans are sampled.
/// K-convexity of the entropy is checked along every candidate; the verdict
/// fails on the first violation. If enumeration was truncated by the budget
/// the report carries the "sampled" qualifier (exhaustive = false).
template <class S>
strong_cd_report<S> certify_strong_cd(const prob_measure<S>& mu0, const prob_measure<S>& mu1,
                                      double K, int T, std::size_t budget, double tol_cd = 1e-9,
                                      double tol_geo = 1e-9, std::uint64_t seed = 0) {
  require_same_space(mu0.sp, mu1.sp, "certify_strong_cd");
  const auto& X = *mu0.sp;
  strong_cd_report<S> rep;

  bool vertices_exhausted = true;
  auto opt = optimal_plan_vertices(mu0, mu1, budget, &vertices_exhausted);
  rep.optimal_vertices = opt.size();
  rep.exhaustive = vertices_exhausted;

  // Geodesic lists per (x, y) pair, shared across vertices.
  std::map<std::pair<int, int>, std::vector<geodesic<S>>> geo_cache;
  auto geodesics_for = [&](int x, int y) -> const std::vector<geodesic<S>>& {
    auto key = std::make_pair(x, y);
    auto it = geo_cache.find(key);
    if (it != geo_cache.end()) return it->second;
    auto g = enumerate_geodesics(X, x, y, T, tol_geo);
    if (g.empty())
      throw lift_error("certify_strong_cd: no " + std::to_string(T) + "-step geodesic from " +
                       X.ids[x] + " to " + X.ids[y]);
    return geo_cache.emplace(key, std::move(g)).first->second;
  };

  // Deterministic list of candidate plans: lifted vertices first, then samples.
  std::vector<geodesic_plan<S>> candidates;
  bool more_geodesic_choices = false;
  for (const auto& v : opt) {
    std::vector<std::vector<geodesic<S>>> geos;
    for (const auto& e : v.entries) geos.push_back(geodesics_for(e.i, e.j));
    for (const auto& g : geos)
      if (g.size() > 1) more_geodesic_choices = true;
    std::vector<std::size_t> choice(v.entries.size(), 0);
    while (true) {
      if (candidates.size() >= budget) {
        rep.exhaustive = false;
        break;
      }
      candidates.push_back(detail::lift_with_choice(mu0.sp, T, v.entries, geos, choice));
      // odometer over geodesic choices
      std::size_t k = 0;
      while (k < choice.size() && ++choice[k] == geos[k].size()) choice[k++] = 0;
      if (k == choice.size()) break;
    }
    if (!rep.exhaustive && candidates.size() >= budget) break;
  }
  rep.vertex_plans = candidates.size();

  // Random interior plans: convex mixture of the optimal vertices with the
  // mass of each pair spread randomly over that pair's geodesics. Skipped
  // when the polytope is a single point.
  if (opt.size() > 1 || more_geodesic_choices) {
    auto rng = make_rng(seed);
    for (std::size_t s = 0; s < budget; ++s) {
      auto vw = random_convex_weights<S>(rng, opt.size());
      std::map<std::pair<int, int>, S> pair_mass;
      for (std::size_t v = 0; v < opt.size(); ++v)
        for (const auto& e : opt[v].entries) pair_mass[{e.i, e.j}] += vw[v] * e.mass;
      std::vector<geo_atom<S>> atoms;
      for (const auto& [xy, mass] : pair_mass) {
        const auto& geos = geodesics_for(xy.first, xy.second);
        auto gw = random_convex_weights<S>(rng, geos.size());
        for (std::size_t g = 0; g < geos.size(); ++g) atoms.push_back({geos[g], mass * gw[g]});
      }
      candidates.push_back(make_geodesic_plan<S>(mu0.sp, T, std::move(atoms)));
    }
    rep.sampled_plans = candidates.size() - rep.vertex_plans;
  }

  auto reports = parallel_map_indexed<cd_report>(
      candidates.size(), [&](std::size_t i) { return check_k_convexity(candidates[i], K, tol_cd); });

  // Deterministic reduction: the witness is the violating plan of largest
  // slack, ties to the earliest candidate.
  for (std::size_t i = 0; i < reports.size(); ++i) {
    bool worse = reports[i].worst_slack > rep.worst_slack;
    if (worse) rep.worst_slack = reports[i].worst_slack;
    if (!reports[i].pass && (worse || rep.pass)) {
      rep.pass = false;
      rep.witness = candidates[i];
      rep.witness_report = reports[i];
    }
  }
  return rep;
}

}  // namespace cdk
