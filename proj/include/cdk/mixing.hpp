#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cdk/branching.hpp"
#include "cdk/geodesic_plan.hpp"

namespace cdk {

template <class S>
struct map_induced_report {
  bool induced = true;
  std::optional<int> witness_source;  // first source point with split mass
};

/// A coupling is induced by a map when every source point with positive mass
/// feeds exactly one target.
template <class S>
map_induced_report<S> is_induced_by_map(const transport_plan<S>& plan) {
  std::map<int, int> targets;
  for (const auto& e : plan.entries)
    if (++targets[e.i] > 1) return {false, e.i};
  return {true, std::nullopt};
}

/// A geodesic plan is induced by a map when every source point carries
/// exactly one geodesic.
template <class S>
map_induced_report<S> is_induced_by_map(const geodesic_plan<S>& gp) {
  std::map<int, const geodesic<S>*> firsts;
  for (const auto& a : gp.atoms) {
    auto [it, fresh] = firsts.emplace(a.g.start(), &a.g);
    if (!fresh && !(*it->second == a.g)) return {false, a.g.start()};
  }
  return {true, std::nullopt};
}

/// Half of a geodesic plan around an anchor time: atoms at resolution k (left
/// halves ending at the anchor) or T-k (right halves starting at it).
template <class S>
struct half_plan {
  geodesic_plan<S> gp;
  int anchor_step = 0;        // the original grid time t = anchor_step / T_original
  bool anchored_at_end = true;  // left halves end at t, right halves start at t
};

/// Disintegration of a half plan over its anchor point: a base measure on
/// anchor points and one normalized conditional plan per anchor.
template <class S>
struct disintegration {
  prob_measure<S> base;
  std::map<int, geodesic_plan<S>> conditional;
  bool anchored_at_end = true;
};

template <class S>
disintegration<S> disintegrate(const half_plan<S>& hp) {
  std::map<int, std::vector<geo_atom<S>>> by_anchor;
  std::vector<S> base_w(hp.gp.sp->n(), S(0));
  for (const auto& a : hp.gp.atoms) {
    int anchor = hp.anchored_at_end ? a.g.end() : a.g.start();
    by_anchor[anchor].push_back(a);
    base_w[anchor] += a.mass;
  }
  disintegration<S> out;
  out.anchored_at_end = hp.anchored_at_end;
  out.base = make_measure<S>(hp.gp.sp, std::move(base_w));
  for (auto& [anchor, atoms] : by_anchor) {
    S w = out.base.w[anchor];
    for (auto& a : atoms) a.mass = a.mass / w;
    out.conditional.emplace(anchor, make_geodesic_plan<S>(hp.gp.sp, hp.gp.T, std::move(atoms)));
  }
  return out;
}

/// Reassembles sum_x base(x) * conditional_x; inverse of disintegrate.
template <class S>
geodesic_plan<S> reintegrate(const disintegration<S>& d, int T) {
  std::vector<geo_atom<S>> atoms;
  for (const auto& [anchor, cond] : d.conditional)
    for (const auto& a : cond.atoms) atoms.push_back({a.g, a.mass * d.base.w[anchor]});
  return make_geodesic_plan<S>(d.conditional.begin()->second.sp, T, std::move(atoms));
}

/// The two halves of (pi1 + pi2)/2 around time k/T, disintegrated: the left
/// over the evaluation at the anchor (endpoint of the restricted curves),
/// the right over the start point.
template <class S>
std::pair<disintegration<S>, disintegration<S>> split_and_disintegrate(
    const geodesic_plan<S>& pi1, const geodesic_plan<S>& pi2, int k) {
  require_same_space(pi1.sp, pi2.sp, "split_and_disintegrate");
  if (pi1.T != pi2.T) throw structural_error("split_and_disintegrate: resolutions differ");
  if (k <= 0 || k >= pi1.T)
    throw grid_error("split_and_disintegrate: anchor step must lie strictly inside (0, T)");

  auto halves = [&](int a, int b, bool at_end) {
    std::vector<geo_atom<S>> atoms;
    for (const auto& at : pi1.atoms)
      atoms.push_back({restrict_geodesic(*pi1.sp, at.g, a, b), at.mass * ratio<S>(1, 2)});
    for (const auto& at : pi2.atoms)
      atoms.push_back({restrict_geodesic(*pi2.sp, at.g, a, b), at.mass * ratio<S>(1, 2)});
    half_plan<S> hp{make_geodesic_plan<S>(pi1.sp, b - a, std::move(atoms)), k, at_end};
    return disintegrate(hp);
  };
  return {halves(0, k, true), halves(k, pi1.T, false)};
}

/// The mixing construction: at each anchor x, recombines every left half
/// ending at x with every right half starting at x, weighting by the product
/// of conditional masses and the base mass of x.
///
/// Each concatenation must itself be a constant-speed geodesic. That holds
/// exactly when the crossing halves have matching speeds, which the
/// equal-length chain guarantees for sub-plans of one optimal plan; any
/// speed-invalid concatenation raises a mix_error naming the anchor.
///
/// Atoms common to pi1 and pi2 are left untouched; only the mutually
/// singular parts are mixed.
template <class S>
geodesic_plan<S> mix_plans(const geodesic_plan<S>& pi1, const geodesic_plan<S>& pi2, int k,
                           double tol_geo = 1e-9) {
  require_same_space(pi1.sp, pi2.sp, "mix_plans");
  if (pi1.T != pi2.T) throw structural_error("mix_plans: resolutions differ");
  const int T = pi1.T;

  // Shared part: atom-wise minimum of the two plans.
  std::vector<geo_atom<S>> shared;
  std::vector<geo_atom<S>> sing1, sing2;
  {
    std::size_t i = 0, j = 0;
    while (i < pi1.atoms.size() || j < pi2.atoms.size()) {
      if (j >= pi2.atoms.size() ||
          (i < pi1.atoms.size() && pi1.atoms[i].g.steps < pi2.atoms[j].g.steps)) {
        sing1.push_back(pi1.atoms[i++]);
      } else if (i >= pi1.atoms.size() || pi2.atoms[j].g.steps < pi1.atoms[i].g.steps) {
        sing2.push_back(pi2.atoms[j++]);
      } else {
        S c = std::min(pi1.atoms[i].mass, pi2.atoms[j].mass);
        shared.push_back({pi1.atoms[i].g, c});
        if (pi1.atoms[i].mass > c) sing1.push_back({pi1.atoms[i].g, pi1.atoms[i].mass - c});
        if (pi2.atoms[j].mass > c) sing2.push_back({pi2.atoms[j].g, pi2.atoms[j].mass - c});
        ++i;
        ++j;
      }
    }
  }
  S shared_mass(0);
  for (const auto& a : shared) shared_mass += a.mass;
  if (sing1.empty()) return pi1;  // pi1 == pi2

  S w = S(1) - shared_mass;
  auto normalize = [&](std::vector<geo_atom<S>> atoms) {
    for (auto& a : atoms) a.mass = a.mass / w;
    return make_geodesic_plan<S>(pi1.sp, T, std::move(atoms));
  };
  auto [left, right] = split_and_disintegrate(normalize(std::move(sing1)),
                                              normalize(std::move(sing2)), k);

  std::vector<geo_atom<S>> mixed = std::move(shared);
  for (const auto& [anchor, lcond] : left.conditional) {
    auto rit = right.conditional.find(anchor);
    if (rit == right.conditional.end())
      throw structural_error("mix_plans: anchor bases of the two halves disagree");
    const S& base = left.base.w[anchor];
    for (const auto& la : lcond.atoms)
      for (const auto& ra : rit->second.atoms) {
        std::vector<int> steps = la.g.steps;
        steps.insert(steps.end(), ra.g.steps.begin() + 1, ra.g.steps.end());
        if (!constant_speed(*pi1.sp, steps, tol_geo))
          throw mix_error("mix_plans: concatenation at anchor " + pi1.sp->ids[anchor] +
                          " of " + format_geodesic(*pi1.sp, la.g) + " with " +
                          format_geodesic(*pi1.sp, ra.g) + " is not constant speed");
        S len = pi1.sp->dist(steps.front(), steps.back());
        mixed.push_back({geodesic<S>{std::move(steps), std::move(len)}, w * base * la.mass * ra.mass});
      }
  }
  return make_geodesic_plan<S>(pi1.sp, T, std::move(mixed));
}

struct length_equality_report {
  bool ok = true;
  std::vector<std::pair<int, int>> violations;  // atom index pairs with unequal lengths
  double worst_gap = 0.0;
};

/// Consequence of cyclical monotonicity: two support geodesics of an optimal
/// lift that cross at time k/T must have equal lengths. A violation
/// disproves optimality of the underlying plan.
template <class S>
length_equality_report verify_length_equality(const geodesic_plan<S>& gp, int k,
                                              double tol = 1e-9) {
  if (k < 0 || k > gp.T) throw grid_error("verify_length_equality: step outside the grid");
  length_equality_report rep;
  for (std::size_t i = 0; i < gp.atoms.size(); ++i)
    for (std::size_t j = i + 1; j < gp.atoms.size(); ++j) {
      if (gp.atoms[i].g.steps[k] != gp.atoms[j].g.steps[k]) continue;
      S gap = gp.atoms[i].g.length - gp.atoms[j].g.length;
      if (!abs_le(gap, tol)) {
        rep.ok = false;
        rep.violations.emplace_back(static_cast<int>(i), static_cast<int>(j));
        rep.worst_gap = std::max(rep.worst_gap, std::abs(to_double(gap)));
      }
    }
  return rep;
}

}  // namespace cdk
