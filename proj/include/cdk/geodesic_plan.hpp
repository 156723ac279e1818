#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "cdk/geodesic.hpp"
#include "cdk/simplex.hpp"
#include "cdk/transport.hpp"

namespace cdk {

template <class S>
struct geo_atom {
  geodesic<S> g;
  S mass{};
};

/// Weighted finite set of discrete geodesics sharing one time resolution T.
/// Atoms are kept sorted by point sequence with duplicates merged, so equal
/// plans have equal representations.
template <class S>
struct geodesic_plan {
  space_ptr<S> sp;
  int T = 1;
  std::vector<geo_atom<S>> atoms;
};

template <class S>
geodesic_plan<S> make_geodesic_plan(space_ptr<S> sp, int T, std::vector<geo_atom<S>> atoms) {
  if (!sp) throw structural_error("geodesic plan needs a space");
  if (T < 1) throw structural_error("geodesic plan needs T >= 1");
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& a, const auto& b) { return a.g.steps < b.g.steps; });
  std::vector<geo_atom<S>> merged;
  S total(0);
  for (auto& a : atoms) {
    if (a.g.T() != T) throw structural_error("geodesic plan atoms must share the resolution T");
    if (a.mass < S(0)) throw structural_error("geodesic plan masses must be nonnegative");
    if (a.mass == S(0)) continue;
    total += a.mass;
    if (!merged.empty() && merged.back().g.steps == a.g.steps)
      merged.back().mass += a.mass;
    else
      merged.push_back(std::move(a));
  }
  if (merged.empty()) throw structural_error("geodesic plan has no mass");
  if (!abs_le(S(total - S(1)), kMassTol))
    throw structural_error("geodesic plan masses must sum to 1");
  return geodesic_plan<S>{std::move(sp), T, std::move(merged)};
}

enum class lift_strategy { uniform, lex_min };

inline lift_strategy lift_strategy_from_string(const std::string& s) {
  if (s == "uniform") return lift_strategy::uniform;
  if (s == "lex_min") return lift_strategy::lex_min;
  throw spec_error("unknown lift strategy: " + s);
}

/// Distributes each coupling atom's mass over the T-step geodesics between
/// its endpoints: uniformly over all of them, or entirely on the
/// lexicographically least one. Fails loudly on pairs with no geodesic.
template <class S>
geodesic_plan<S> lift_plan(const transport_plan<S>& plan, int T,
                           lift_strategy strategy = lift_strategy::uniform,
                           double tol_geo = 1e-9) {
  const auto& X = *plan.sp;
  std::vector<geo_atom<S>> atoms;
  for (const auto& e : plan.entries) {
    auto geos = enumerate_geodesics(X, e.i, e.j, T, tol_geo);
    if (geos.empty())
      throw lift_error("lift_plan: no " + std::to_string(T) + "-step geodesic from " +
                       X.ids[e.i] + " to " + X.ids[e.j]);
    if (strategy == lift_strategy::lex_min) {
      atoms.push_back({std::move(geos.front()), e.mass});
    } else {
      S share = e.mass * ratio<S>(1, static_cast<long long>(geos.size()));
      for (auto& g : geos) atoms.push_back({std::move(g), share});
    }
  }
  return make_geodesic_plan<S>(plan.sp, T, std::move(atoms));
}

/// Pushforward under the evaluation map at grid step k (time k/T).
template <class S>
prob_measure<S> evaluate_at(const geodesic_plan<S>& gp, int k) {
  if (k < 0 || k > gp.T) throw grid_error("evaluate_at: step outside the grid");
  std::vector<S> w(gp.sp->n(), S(0));
  for (const auto& a : gp.atoms) w[a.g.steps[k]] += a.mass;
  return prob_measure<S>{gp.sp, std::move(w)};
}

/// Plan of endpoint pairs (gamma_0, gamma_1) with the atom masses.
template <class S>
transport_plan<S> endpoint_plan(const geodesic_plan<S>& gp) {
  std::vector<plan_entry<S>> entries;
  for (const auto& a : gp.atoms) entries.push_back({a.g.start(), a.g.end(), a.mass});
  return make_plan<S>(gp.sp, std::move(entries));
}

/// Atom-wise restriction to [k1/T, k2/T], reparametrized to resolution k2-k1.
template <class S>
geodesic_plan<S> restrict_time(const geodesic_plan<S>& gp, int k1, int k2) {
  if (k1 < 0 || k2 > gp.T || k1 >= k2)
    throw grid_error("restrict_time: need grid steps 0 <= k1 < k2 <= T");
  std::vector<geo_atom<S>> atoms;
  for (const auto& a : gp.atoms)
    atoms.push_back({restrict_geodesic(*gp.sp, a.g, k1, k2), a.mass});
  return make_geodesic_plan<S>(gp.sp, k2 - k1, std::move(atoms));
}

/// Renormalized f * pi for per-atom factors f >= 0.
template <class S>
geodesic_plan<S> reweight(const geodesic_plan<S>& gp, const std::vector<S>& factors) {
  if (factors.size() != gp.atoms.size())
    throw structural_error("reweight: factor count does not match atom count");
  S total(0);
  std::vector<geo_atom<S>> atoms;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (factors[k] < S(0)) throw structural_error("reweight: factors must be nonnegative");
    if (factors[k] == S(0)) continue;
    S mass = gp.atoms[k].mass * factors[k];
    total += mass;
    atoms.push_back({gp.atoms[k].g, std::move(mass)});
  }
  if (!(total > S(0))) throw empty_error("reweight: total reweighted mass is zero");
  for (auto& a : atoms) a.mass = a.mass / total;
  return make_geodesic_plan<S>(gp.sp, gp.T, std::move(atoms));
}

template <class S>
geodesic_plan<S> time_reverse(const geodesic_plan<S>& gp) {
  std::vector<geo_atom<S>> atoms;
  for (const auto& a : gp.atoms) atoms.push_back({reverse_geodesic(a.g), a.mass});
  return make_geodesic_plan<S>(gp.sp, gp.T, std::move(atoms));
}

struct wasserstein_geodesic_report {
  bool ok = true;
  double worst_slack = 0.0;  // max |W2(mu_s, mu_t) - |t-s| W2(mu_0, mu_1)|
  int worst_s = 0, worst_t = 0;
};

/// Certifies GeoOpt membership operationally: the interpolation
/// t -> (e_t)#pi must be a constant-speed W2 geodesic, checked by solving
/// W2 between every pair of grid times.
template <class S>
wasserstein_geodesic_report is_wasserstein_geodesic(const geodesic_plan<S>& gp, double tol) {
  wasserstein_geodesic_report rep;
  std::vector<prob_measure<S>> mus;
  mus.reserve(gp.T + 1);
  for (int k = 0; k <= gp.T; ++k) mus.push_back(evaluate_at(gp, k));
  double w01 = solve_w2(mus.front(), mus.back()).distance;
  for (int s = 0; s <= gp.T; ++s)
    for (int t = s + 1; t <= gp.T; ++t) {
      double wst = solve_w2(mus[s], mus[t]).distance;
      double slack = std::abs(wst - (static_cast<double>(t - s) / gp.T) * w01);
      if (slack > rep.worst_slack) {
        rep.worst_slack = slack;
        rep.worst_s = s;
        rep.worst_t = t;
      }
    }
  rep.ok = rep.worst_slack <= tol;
  return rep;
}

/// Mass carried by each distinct point at grid step k (support of e_k pushforward).
template <class S>
std::vector<int> support_at(const geodesic_plan<S>& gp, int k) {
  std::map<int, S> mass;
  for (const auto& a : gp.atoms) mass[a.g.steps[k]] += a.mass;
  std::vector<int> out;
  for (const auto& [p, m] : mass)
    if (m > S(0)) out.push_back(p);
  return out;
}

}  // namespace cdk
