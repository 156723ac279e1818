#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "cdk/measure.hpp"

namespace cdk {

template <class S>
struct plan_entry {
  int i = 0, j = 0;  // source/target point indices
  S mass{};
};

/// Coupling of two measures: sparse nonnegative masses on point pairs whose
/// row sums and column sums are the prescribed marginals. Cost is the total
/// squared-distance transport cost.
template <class S>
struct transport_plan {
  space_ptr<S> sp;
  std::vector<plan_entry<S>> entries;  // sorted by (i,j), masses > 0
  prob_measure<S> mu0, mu1;            // marginals computed from the entries
  S cost{};                            // sum mass * d(i,j)^2
};

template <class S>
transport_plan<S> make_plan(space_ptr<S> sp, std::vector<plan_entry<S>> entries) {
  if (!sp) throw structural_error("plan needs a space");
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
  std::vector<plan_entry<S>> merged;
  for (auto& e : entries) {
    if (e.i < 0 || e.i >= sp->n() || e.j < 0 || e.j >= sp->n())
      throw structural_error("plan entry references unknown point");
    if (e.mass < S(0)) throw structural_error("plan masses must be nonnegative");
    if (e.mass == S(0)) continue;
    if (!merged.empty() && merged.back().i == e.i && merged.back().j == e.j)
      merged.back().mass += e.mass;
    else
      merged.push_back(e);
  }
  if (merged.empty()) throw structural_error("plan has no mass");
  std::vector<S> row(sp->n(), S(0)), col(sp->n(), S(0));
  S cost(0);
  for (const auto& e : merged) {
    row[e.i] += e.mass;
    col[e.j] += e.mass;
    cost += e.mass * sp->dist(e.i, e.j) * sp->dist(e.i, e.j);
  }
  auto mu0 = make_measure<S>(sp, std::move(row));
  auto mu1 = make_measure<S>(sp, std::move(col));
  return transport_plan<S>{std::move(sp), std::move(merged), std::move(mu0), std::move(mu1),
                           std::move(cost)};
}

/// Largest deviation of the plan's marginals from the given measures.
template <class S>
double marginal_error(const transport_plan<S>& plan, const prob_measure<S>& mu0,
                      const prob_measure<S>& mu1) {
  double worst = 0.0;
  for (int i = 0; i < plan.sp->n(); ++i) {
    worst = std::max(worst, std::abs(to_double(S(plan.mu0.w[i] - mu0.w[i]))));
    worst = std::max(worst, std::abs(to_double(S(plan.mu1.w[i] - mu1.w[i]))));
  }
  return worst;
}

struct monotonicity_report {
  bool ok = true;
  std::vector<int> cycle;  // entry indices of the violating cycle, empty if ok
  double slack = 0.0;      // own cost minus permuted cost (> tol means violation)
};

/// Searches support cycles of length <= max_len for a violation of
/// cyclical monotonicity with the squared-distance cost:
///   sum d(x_i, y_i)^2 <= sum d(x_{i+1}, y_i)^2  (cyclic).
/// Returns the first witness in deterministic scan order, or a pass.
template <class S>
monotonicity_report check_cyclical_monotonicity(const transport_plan<S>& plan, double tol,
                                                int max_len = 3) {
  const auto& X = *plan.sp;
  const auto& es = plan.entries;
  const int s = static_cast<int>(es.size());
  auto c2 = [&](int i, int j) { return X.dist(i, j) * X.dist(i, j); };

  // own(t) - shifted(t) summed over the cycle; positive slack = improvement by permuting
  std::vector<int> cyc;
  monotonicity_report rep;
  std::function<bool(int)> extend = [&](int len_left) -> bool {
    if (static_cast<int>(cyc.size()) >= 2) {
      S own(0), shifted(0);
      for (std::size_t t = 0; t < cyc.size(); ++t) {
        const auto& cur = es[cyc[t]];
        const auto& nxt = es[cyc[(t + 1) % cyc.size()]];
        own += c2(cur.i, cur.j);
        shifted += c2(nxt.i, cur.j);
      }
      S slack = own - shifted;
      if (!(slack <= S(0)) && !abs_le(slack, tol)) {
        rep.ok = false;
        rep.cycle = cyc;
        rep.slack = to_double(slack);
        return true;
      }
    }
    if (len_left == 0) return false;
    for (int k = cyc.front() + 1; k < s; ++k) {
      if (std::find(cyc.begin(), cyc.end(), k) != cyc.end()) continue;
      cyc.push_back(k);
      if (extend(len_left - 1)) return true;
      cyc.pop_back();
    }
    return false;
  };

  for (int first = 0; first < s && rep.ok; ++first) {
    cyc.assign(1, first);
    extend(max_len - 1);
  }
  return rep;
}

/// Renormalized sub-coupling: keeps entries selected by a predicate (or reweighted
/// by a per-entry density), scales the rest away. Returns the plan and the kept mass.
template <class S>
std::pair<transport_plan<S>, S> restrict_plan(const transport_plan<S>& plan,
                                              const std::function<bool(int, int)>& keep) {
  std::vector<plan_entry<S>> kept;
  S scale(0);
  for (const auto& e : plan.entries)
    if (keep(e.i, e.j)) {
      kept.push_back(e);
      scale += e.mass;
    }
  if (!(scale > S(0))) throw empty_error("restrict_plan: kept mass is zero");
  for (auto& e : kept) e.mass = e.mass / scale;
  return {make_plan<S>(plan.sp, std::move(kept)), scale};
}

template <class S>
std::pair<transport_plan<S>, S> restrict_plan(const transport_plan<S>& plan,
                                              const std::vector<S>& density) {
  if (density.size() != plan.entries.size())
    throw structural_error("restrict_plan: density size does not match entry count");
  std::vector<plan_entry<S>> kept;
  S scale(0);
  for (std::size_t k = 0; k < density.size(); ++k) {
    if (density[k] < S(0)) throw structural_error("restrict_plan: density must be nonnegative");
    if (density[k] == S(0)) continue;
    plan_entry<S> e = plan.entries[k];
    e.mass = e.mass * density[k];
    scale += e.mass;
    kept.push_back(std::move(e));
  }
  if (!(scale > S(0))) throw empty_error("restrict_plan: kept mass is zero");
  for (auto& e : kept) e.mass = e.mass / scale;
  return {make_plan<S>(plan.sp, std::move(kept)), scale};
}

}  // namespace cdk
