#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "cdk/geodesic_plan.hpp"

namespace cdk {

template <class S>
struct pair_atom {
  geodesic<S> g1, g2;
  S mass{};
};

/// Probability measure on ordered pairs of geodesics sharing one resolution.
template <class S>
struct pair_measure {
  space_ptr<S> sp;
  int T = 1;
  std::vector<pair_atom<S>> atoms;

  S diagonal_mass() const {
    S acc(0);
    for (const auto& a : atoms)
      if (a.g1 == a.g2) acc += a.mass;
    return acc;
  }
};

/// Number of leading steps (grid steps from time 0) on which two geodesics
/// agree; "agrees on [0, k/T]" means the first k+1 points coincide.
template <class S>
int agreement_steps(const geodesic<S>& a, const geodesic<S>& b) {
  int k = 0;
  while (k < static_cast<int>(a.steps.size()) && k < static_cast<int>(b.steps.size()) &&
         a.steps[k] == b.steps[k])
    ++k;
  return k - 1;  // last agreeing grid step, -1 if even the start differs
}

/// Pair-product measure at the split time k/T: atoms of pi are grouped by
/// their restriction to [0, k/T]; within a group of total mass w and
/// conditional weights q_i, every ordered pair (i, j) receives w q_i q_j.
/// All emitted pairs agree on [0, k/T] and the total mass stays 1.
template <class S>
pair_measure<S> pair_product_measure(const geodesic_plan<S>& gp, int k_split) {
  if (k_split <= 0 || k_split >= gp.T)
    throw grid_error("pair_product_measure: split step must lie strictly inside (0, T)");
  std::map<std::vector<int>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < gp.atoms.size(); ++i) {
    std::vector<int> head(gp.atoms[i].g.steps.begin(), gp.atoms[i].g.steps.begin() + k_split + 1);
    groups[std::move(head)].push_back(i);
  }
  pair_measure<S> out{gp.sp, gp.T, {}};
  for (const auto& [head, members] : groups) {
    S w(0);
    for (auto i : members) w += gp.atoms[i].mass;
    for (auto i : members)
      for (auto j : members) {
        S mass = gp.atoms[i].mass * gp.atoms[j].mass / w;
        out.atoms.push_back({gp.atoms[i].g, gp.atoms[j].g, std::move(mass)});
      }
  }
  return out;
}

/// First-component marginal of a pair measure, as a geodesic plan.
template <class S>
geodesic_plan<S> pair_marginal(const pair_measure<S>& pm, int component) {
  std::vector<geo_atom<S>> atoms;
  for (const auto& a : pm.atoms) atoms.push_back({component == 0 ? a.g1 : a.g2, a.mass});
  return make_geodesic_plan<S>(pm.sp, pm.T, std::move(atoms));
}

template <class S>
struct branching_profile_result {
  std::vector<S> f;       // f[k] = mass of pairs agreeing on [0, k/T]
  int max_drop_step = 0;  // k maximizing f(k) - f(k + 1/T), ties to smallest k
};

/// The branching profile f(t) = sigma{(g1, g2) agree on [0, t]}; agreement at
/// t is inclusive. f is nonincreasing and f(1) is the diagonal mass.
template <class S>
branching_profile_result<S> branching_profile(const pair_measure<S>& pm) {
  branching_profile_result<S> out;
  out.f.assign(pm.T + 1, S(0));
  for (const auto& a : pm.atoms) {
    int agree = agreement_steps(a.g1, a.g2);
    for (int k = 0; k <= agree; ++k) out.f[k] += a.mass;
  }
  S best(-1);
  for (int k = 0; k < pm.T; ++k) {
    S d = out.f[k] - out.f[k + 1];
    if (d > best) {
      best = d;
      out.max_drop_step = k;
    }
  }
  return out;
}

struct branch_pair {
  int atom1 = 0, atom2 = 0;  // indices into the plan's atom list
  int t_branch_step = 0;     // last grid step of agreement (> 0)
};

struct branch_report {
  std::vector<branch_pair> pairs;
  bool essentially_nonbranching = true;
};

/// Scans all support pairs of a plan for branching: two distinct geodesics
/// that agree on an initial segment of positive length. Sharing only the
/// start point is not branching.
template <class S>
branch_report find_branching_pairs(const geodesic_plan<S>& gp) {
  branch_report rep;
  for (std::size_t i = 0; i < gp.atoms.size(); ++i)
    for (std::size_t j = i + 1; j < gp.atoms.size(); ++j) {
      int agree = agreement_steps(gp.atoms[i].g, gp.atoms[j].g);
      if (agree >= 1 && agree < gp.T) {
        rep.pairs.push_back({static_cast<int>(i), static_cast<int>(j), agree});
        rep.essentially_nonbranching = false;
      }
    }
  return rep;
}

inline long long pow2ll(int e) { return 1LL << e; }

template <class S>
struct split_result {
  std::vector<int> subset;  // ground-set members of E (indices)
  S value{};                // sigma(E x complement)
  S lemma_bound{};          // 2^(n-2)/(2^n - 2) * total mass
  S subset_mean{};          // mean of sigma(E x E^c) over all proper nonempty E
};

/// Exhaustive maximization of sigma(E x (X \ E)) over nonempty proper subsets
/// of an n-point ground set carrying a zero-diagonal pair measure given as
/// (i, j, mass) triples. n <= cap (bitmask search); ties go to the lowest mask.
template <class S>
split_result<S> best_split_indexed(const std::vector<std::tuple<int, int, S>>& entries, int n,
                                   int cap = 20) {
  if (n > cap) throw size_error("best_split: ground set exceeds cap");
  if (n < 2) throw precondition_error("best_split: need at least two points");
  S total(0);
  for (const auto& [i, j, m] : entries) {
    if (i == j) throw precondition_error("best_split: measure must have zero diagonal");
    if (i < 0 || i >= n || j < 0 || j >= n) throw structural_error("best_split: index out of range");
    total += m;
  }
  const std::uint32_t masks = (1u << n) - 1;
  S best(-1), sum(0);
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 1; mask < masks; ++mask) {
    S v(0);
    for (const auto& [i, j, m] : entries)
      if ((mask >> i & 1u) && !(mask >> j & 1u)) v += m;
    sum += v;
    if (v > best) {
      best = v;
      best_mask = mask;
    }
  }
  split_result<S> out;
  for (int i = 0; i < n; ++i)
    if (best_mask >> i & 1u) out.subset.push_back(i);
  out.value = best;
  // 2^(n-2) of the 2^n - 2 proper subsets separate any fixed off-diagonal pair.
  S pow_n2 = S(pow2ll(n - 2));
  S denom = S(pow2ll(n)) - S(2);
  out.lemma_bound = total * pow_n2 / denom;
  out.subset_mean = sum / denom;
  return out;
}

/// best_split over the distinct geodesics of a zero-diagonal pair measure.
template <class S>
split_result<S> best_split(const pair_measure<S>& pm, int cap = 20) {
  std::map<std::vector<int>, int> index;
  auto id_of = [&](const geodesic<S>& g) {
    auto it = index.find(g.steps);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(index.size());
    index.emplace(g.steps, id);
    return id;
  };
  std::vector<std::tuple<int, int, S>> entries;
  for (const auto& a : pm.atoms) entries.emplace_back(id_of(a.g1), id_of(a.g2), a.mass);
  return best_split_indexed(entries, static_cast<int>(index.size()), cap);
}

/// best_split over the support points of a point-pair measure (a plan whose
/// source and target live in the same ground set), diagonal-free.
template <class S>
split_result<S> best_split(const transport_plan<S>& plan, int cap = 20) {
  std::map<int, int> index;
  auto id_of = [&](int p) {
    auto it = index.find(p);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(index.size());
    index.emplace(p, id);
    return id;
  };
  std::vector<std::tuple<int, int, S>> entries;
  for (const auto& e : plan.entries) entries.emplace_back(id_of(e.i), id_of(e.j), e.mass);
  return best_split_indexed(entries, static_cast<int>(index.size()), cap);
}

/// Removes diagonal atoms; returns the removed mass. No renormalization.
template <class S>
std::pair<pair_measure<S>, S> drop_diagonal(const pair_measure<S>& pm) {
  pair_measure<S> out{pm.sp, pm.T, {}};
  S diag(0);
  for (const auto& a : pm.atoms) {
    if (a.g1 == a.g2)
      diag += a.mass;
    else
      out.atoms.push_back(a);
  }
  return {std::move(out), std::move(diag)};
}

/// Rebuilds a pair agreeing on [0, k/T] into one with the same endpoint
/// triple (g1_0, g1_1, g2_1) that branches exactly once: the disagreement
/// set becomes a single grid interval.
///
/// Distinct endpoints: splice g2's tail onto g1 at their last common step.
/// Equal endpoints: replace g1 by g2 on the first disagreement interval only.
/// The spliced sequences are re-verified against the speed invariant and a
/// normalization_error is raised if they fail it.
template <class S>
std::pair<geodesic<S>, geodesic<S>> single_branch_normalize(const space<S>& X,
                                                            const geodesic<S>& g1,
                                                            const geodesic<S>& g2, int k_split,
                                                            double tol_geo) {
  if (g1.T() != g2.T()) throw precondition_error("single_branch_normalize: resolutions differ");
  const int T = g1.T();
  if (k_split < 0 || k_split > T || agreement_steps(g1, g2) < k_split)
    throw precondition_error("single_branch_normalize: pair does not agree on [0, T_split]");
  if (g1 == g2) return {g1, g2};

  auto rebuild = [&](std::vector<int> steps) {
    if (!constant_speed(X, steps, tol_geo))
      throw normalization_error("single_branch_normalize: spliced sequence is not a geodesic");
    S len = X.dist(steps.front(), steps.back());
    return geodesic<S>{std::move(steps), std::move(len)};
  };

  if (g1.end() != g2.end()) {
    int s = -1;  // last common step; branches never rejoin past it
    for (int k = T; k >= 0; --k)
      if (g1.steps[k] == g2.steps[k]) {
        s = k;
        break;
      }
    std::vector<int> spliced(g1.steps.begin(), g1.steps.begin() + s + 1);
    spliced.insert(spliced.end(), g2.steps.begin() + s + 1, g2.steps.end());
    return {g1, rebuild(std::move(spliced))};
  }

  // Equal endpoints: isolate the first disagreement interval (s1, s2).
  int s1 = agreement_steps(g1, g2);
  int s2 = s1 + 1;
  while (g1.steps[s2] != g2.steps[s2]) ++s2;  // endpoints agree, so this terminates
  std::vector<int> spliced = g1.steps;
  for (int k = s1 + 1; k < s2; ++k) spliced[k] = g2.steps[k];
  return {g1, rebuild(std::move(spliced))};
}

}  // namespace cdk
