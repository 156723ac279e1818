#pragma once

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "cdk/measure.hpp"
#include "cdk/transport.hpp"

namespace cdk {

/// A vertex of the transport polytope, as sparse flows over (row, col)
/// index pairs into the support lists used during enumeration.
template <class S>
struct polytope_vertex {
  std::vector<plan_entry<S>> entries;  // space point indices, sorted, mass > 0
  S cost{};
};

namespace detail {

/// Enumerates every extreme point of the transportation polytope by the
/// crossing-out recursion: pick any alive cell, saturate it, cross out the
/// exhausted line, recurse. Every selection order yields a vertex (the
/// support built this way is acyclic) and every vertex arises from some
/// order (peel a leaf of its support forest), so with deduplication the
/// enumeration is exhaustive. Intended for desk-scale supports.
template <class S>
class vertex_enumerator {
 public:
  vertex_enumerator(std::vector<S> a, std::vector<S> b, std::size_t max_vertices)
      : a_(std::move(a)), b_(std::move(b)), cap_(max_vertices) {}

  // Returns vertices as (row, col, mass) triples; exhausted reports whether
  // the recursion ran to completion within the vertex budget.
  std::vector<std::vector<plan_entry<S>>> run(bool* exhausted) {
    rows_alive_.assign(a_.size(), 1);
    cols_alive_.assign(b_.size(), 1);
    ra_ = a_;
    rb_ = b_;
    chosen_.clear();
    seen_.clear();
    out_.clear();
    hit_cap_ = false;
    recurse(static_cast<int>(a_.size()), static_cast<int>(b_.size()));
    if (exhausted) *exhausted = !hit_cap_;
    return out_;
  }

 private:
  void emit() {
    std::vector<plan_entry<S>> v;
    for (const auto& e : chosen_)
      if (e.mass > S(0)) v.push_back(e);
    std::sort(v.begin(), v.end(),
              [](const auto& x, const auto& y) { return std::tie(x.i, x.j) < std::tie(y.i, y.j); });
    std::vector<std::pair<int, int>> key;
    for (const auto& e : v) key.emplace_back(e.i, e.j);
    if (seen_.insert(key).second) out_.push_back(std::move(v));
  }

  void recurse(int rows_left, int cols_left) {
    if (hit_cap_ || (cap_ && out_.size() >= cap_)) {
      hit_cap_ = true;
      return;
    }
    if (rows_left == 0 && cols_left == 0) {
      emit();
      return;
    }
    // Forced move: an alive column with zero remaining demand only ever
    // receives zero mass; close it deterministically instead of branching
    // over the orderings of such closures.
    if (cols_left > 1 || rows_left > 1) {
      for (int c = 0; c < static_cast<int>(b_.size()); ++c) {
        if (!cols_alive_[c] || rb_[c] != S(0)) continue;
        if (cols_left == 1) break;  // keep the terminal anchor column
        cols_alive_[c] = 0;
        recurse(rows_left, cols_left - 1);
        cols_alive_[c] = 1;
        return;
      }
      for (int r = 0; r < static_cast<int>(a_.size()); ++r) {
        if (!rows_alive_[r] || ra_[r] != S(0)) continue;
        if (rows_left == 1) break;
        rows_alive_[r] = 0;
        recurse(rows_left - 1, cols_left);
        rows_alive_[r] = 1;
        return;
      }
    }
    if (rows_left == 1 && cols_left == 1) {
      int r = alive_index(rows_alive_), c = alive_index(cols_alive_);
      chosen_.push_back({r, c, ra_[r]});
      rows_alive_[r] = 0;
      cols_alive_[c] = 0;
      recurse(0, 0);
      rows_alive_[r] = 1;
      cols_alive_[c] = 1;
      chosen_.pop_back();
      return;
    }
    for (int r = 0; r < static_cast<int>(a_.size()) && !hit_cap_; ++r) {
      if (!rows_alive_[r]) continue;
      for (int c = 0; c < static_cast<int>(b_.size()) && !hit_cap_; ++c) {
        if (!cols_alive_[c]) continue;
        S f = std::min(ra_[r], rb_[c]);
        chosen_.push_back({r, c, f});
        S old_ra = ra_[r], old_rb = rb_[c];
        ra_[r] -= f;
        rb_[c] -= f;
        // On an exact tie the row dies and the column stays alive with zero
        // demand; the forced closure above mops it up. The positive flows,
        // and hence the vertex, do not depend on this convention.
        bool row_dies = (ra_[r] == S(0)) && (rows_left > 1 || rb_[c] != S(0));
        if (row_dies) {
          rows_alive_[r] = 0;
          recurse(rows_left - 1, cols_left);
          rows_alive_[r] = 1;
        } else {
          cols_alive_[c] = 0;
          recurse(rows_left, cols_left - 1);
          cols_alive_[c] = 1;
        }
        ra_[r] = old_ra;
        rb_[c] = old_rb;
        chosen_.pop_back();
      }
    }
  }

  static int alive_index(const std::vector<char>& alive) {
    for (int i = 0; i < static_cast<int>(alive.size()); ++i)
      if (alive[i]) return i;
    return -1;
  }

  std::vector<S> a_, b_, ra_, rb_;
  std::vector<char> rows_alive_, cols_alive_;
  std::vector<plan_entry<S>> chosen_;
  std::set<std::vector<std::pair<int, int>>> seen_;
  std::vector<std::vector<plan_entry<S>>> out_;
  std::size_t cap_ = 0;
  bool hit_cap_ = false;
};

}  // namespace detail

/// All vertices of the transport polytope of (mu0, mu1), restricted to the
/// product of their supports. max_vertices = 0 means unbounded.
template <class S>
std::vector<polytope_vertex<S>> enumerate_plan_vertices(const prob_measure<S>& mu0,
                                                        const prob_measure<S>& mu1,
                                                        std::size_t max_vertices,
                                                        bool* exhausted = nullptr) {
  require_same_space(mu0.sp, mu1.sp, "enumerate_plan_vertices");
  const auto& X = *mu0.sp;
  auto rows = mu0.support();
  auto cols = mu1.support();
  std::vector<S> a, b;
  for (int i : rows) a.push_back(mu0.w[i]);
  for (int j : cols) b.push_back(mu1.w[j]);
  detail::vertex_enumerator<S> en(std::move(a), std::move(b), max_vertices);
  bool done = true;
  auto raw = en.run(&done);
  if (exhausted) *exhausted = done;
  std::vector<polytope_vertex<S>> out;
  out.reserve(raw.size());
  for (auto& v : raw) {
    polytope_vertex<S> pv;
    pv.cost = S(0);
    for (auto& e : v) {
      int i = rows[e.i], j = cols[e.j];
      pv.cost += e.mass * X.dist(i, j) * X.dist(i, j);
      pv.entries.push_back({i, j, std::move(e.mass)});
    }
    out.push_back(std::move(pv));
  }
  return out;
}

/// Independent oracle for solve_w2: exact minimum of the transport cost over
/// all combinatorial vertices (spanning-forest basic solutions) of the
/// transport polytope. Refuses instances with combined support above cap.
template <class S>
S brute_force_w2(const prob_measure<S>& mu0, const prob_measure<S>& mu1, int cap = 8) {
  require_same_space(mu0.sp, mu1.sp, "brute_force_w2");
  auto rows = mu0.support();
  auto cols = mu1.support();
  if (static_cast<int>(rows.size() + cols.size()) > cap)
    throw size_error("brute_force_w2: combined support exceeds cap");
  auto vertices = enumerate_plan_vertices(mu0, mu1, 0);
  bool first = true;
  S best(0);
  for (const auto& v : vertices) {
    if (first || v.cost < best) {
      best = v.cost;
      first = false;
    }
  }
  if (first) throw error("brute_force_w2: no vertices enumerated");
  return best;
}

/// Vertices of the optimal face: the enumerated vertices with minimal cost.
/// In float mode, costs within 1e-9 of the minimum are treated as optimal.
template <class S>
std::vector<polytope_vertex<S>> optimal_plan_vertices(const prob_measure<S>& mu0,
                                                      const prob_measure<S>& mu1,
                                                      std::size_t max_vertices,
                                                      bool* exhausted = nullptr) {
  auto all = enumerate_plan_vertices(mu0, mu1, max_vertices, exhausted);
  if (all.empty()) return all;
  S best = all.front().cost;
  for (const auto& v : all)
    if (v.cost < best) best = v.cost;
  std::vector<polytope_vertex<S>> out;
  for (auto& v : all)
    if (abs_le(S(v.cost - best), scalar_traits<S>::is_exact ? 0.0 : 1e-9)) out.push_back(std::move(v));
  return out;
}

}  // namespace cdk
