#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cdk/transport.hpp"

namespace cdk {

/// Exact transportation simplex for the squared-distance cost on the
/// bipartite support graph of two measures.
///
/// Bases are spanning trees of the bipartite graph; the initial basis comes
/// from the northwest-corner rule. Pivoting uses Bland's rule throughout
/// (lowest-index entering arc, lowest-index leaving arc among ratio ties),
/// which both prevents cycling under degeneracy and makes the returned plan
/// deterministic. With exact scalars the result is the exact optimum.
template <class S>
class transport_simplex {
 public:
  transport_simplex(std::vector<S> supply, std::vector<S> demand, std::vector<S> cost)
      : m_(static_cast<int>(supply.size())),
        n_(static_cast<int>(demand.size())),
        a_(std::move(supply)),
        b_(std::move(demand)),
        c_(std::move(cost)) {
    if (!scalar_traits<S>::is_exact) {
      // Absorb float imbalance (<= a few ulps) into the last demand so the
      // northwest-corner rule closes exactly.
      S sa(0), sb(0);
      for (const auto& v : a_) sa += v;
      for (int j = 0; j + 1 < n_; ++j) sb += b_[j];
      b_[n_ - 1] = sa - sb;
    }
    double cmax = 0.0;
    for (const auto& v : c_) cmax = std::max(cmax, std::abs(to_double(v)));
    eps_ = scalar_traits<S>::is_exact ? 0.0 : 1e-12 * (1.0 + cmax);
  }

  void run() {
    northwest_corner();
    const long long max_pivots = 4096LL * (m_ + n_) * (m_ + n_) + 4096;
    for (long long iter = 0; iter < max_pivots; ++iter) {
      compute_potentials();
      int enter = entering_arc();
      if (enter < 0) return;
      pivot(enter);
    }
    throw error("transport simplex failed to converge");
  }

  // Basic flows with mass > 0, as (row, col, mass), sorted by (row, col).
  std::vector<plan_entry<S>> flows() const {
    std::vector<plan_entry<S>> out;
    for (std::size_t k = 0; k < basis_.size(); ++k)
      if (flow_[k] > S(0)) out.push_back({basis_[k] / n_, basis_[k] % n_, flow_[k]});
    std::sort(out.begin(), out.end(),
              [](const auto& x, const auto& y) { return std::tie(x.i, x.j) < std::tie(y.i, y.j); });
    return out;
  }

 private:
  int arc_id(int r, int c) const { return r * n_ + c; }

  void northwest_corner() {
    basis_.clear();
    flow_.clear();
    in_basis_.assign(static_cast<std::size_t>(m_) * n_, 0);
    std::vector<S> ar = a_, bc = b_;
    int r = 0, c = 0;
    while (true) {
      S f = (r == m_ - 1 && c == n_ - 1) ? ar[r] : std::min(ar[r], bc[c]);
      if (f < S(0)) f = S(0);
      basis_.push_back(arc_id(r, c));
      flow_.push_back(f);
      in_basis_[arc_id(r, c)] = 1;
      ar[r] -= f;
      bc[c] -= f;
      if (r == m_ - 1 && c == n_ - 1) break;
      if (ar[r] == S(0) && r < m_ - 1)
        ++r;
      else
        ++c;
    }
  }

  void compute_potentials() {
    // u_r + v_c = c_rc on basic arcs; tree traversal from row 0.
    u_.assign(m_, S(0));
    v_.assign(n_, S(0));
    std::vector<char> done_u(m_, 0), done_v(n_, 0);
    std::vector<std::vector<int>> arcs_of_row(m_), arcs_of_col(n_);
    for (int id : basis_) {
      arcs_of_row[id / n_].push_back(id);
      arcs_of_col[id % n_].push_back(id);
    }
    std::vector<int> stack;
    done_u[0] = 1;
    stack.push_back(0);  // rows encoded as r, cols as m_ + c
    while (!stack.empty()) {
      int node = stack.back();
      stack.pop_back();
      if (node < m_) {
        for (int id : arcs_of_row[node]) {
          int c = id % n_;
          if (done_v[c]) continue;
          v_[c] = c_[id] - u_[node];
          done_v[c] = 1;
          stack.push_back(m_ + c);
        }
      } else {
        int c = node - m_;
        for (int id : arcs_of_col[c]) {
          int r = id / n_;
          if (done_u[r]) continue;
          u_[r] = c_[id] - v_[c];
          done_u[r] = 1;
          stack.push_back(r);
        }
      }
    }
  }

  int entering_arc() const {
    for (int r = 0; r < m_; ++r)
      for (int c = 0; c < n_; ++c) {
        int id = arc_id(r, c);
        if (in_basis_[id]) continue;
        S red = c_[id] - u_[r] - v_[c];
        if constexpr (scalar_traits<S>::is_exact) {
          if (red < S(0)) return id;
        } else {
          if (to_double(red) < -eps_) return id;
        }
      }
    return -1;
  }

  void pivot(int enter) {
    const int er = enter / n_, ec = enter % n_;
    // Unique tree path from col ec back to row er.
    std::vector<int> parent(m_ + n_, -1), via(m_ + n_, -1);
    std::vector<std::vector<std::pair<int, int>>> adj(m_ + n_);  // (neighbor, basis slot)
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      int r = basis_[k] / n_, c = m_ + basis_[k] % n_;
      adj[r].push_back({c, static_cast<int>(k)});
      adj[c].push_back({r, static_cast<int>(k)});
    }
    std::vector<int> stack{er};
    std::vector<char> seen(m_ + n_, 0);
    seen[er] = 1;
    while (!stack.empty()) {
      int node = stack.back();
      stack.pop_back();
      for (auto [nb, slot] : adj[node]) {
        if (seen[nb]) continue;
        seen[nb] = 1;
        parent[nb] = node;
        via[nb] = slot;
        stack.push_back(nb);
      }
    }
    // Walk from ec to er; arcs alternate -,+,-,... after the entering +.
    std::vector<int> minus_slots, plus_slots;
    int node = m_ + ec;
    bool minus = true;
    while (node != er) {
      (minus ? minus_slots : plus_slots).push_back(via[node]);
      node = parent[node];
      minus = !minus;
    }
    // Leaving arc: smallest flow among minus arcs, ties to lowest arc id.
    int leave_slot = -1;
    for (int slot : minus_slots) {
      if (leave_slot < 0 || flow_[slot] < flow_[leave_slot] ||
          (flow_[slot] == flow_[leave_slot] && basis_[slot] < basis_[leave_slot]))
        leave_slot = slot;
    }
    S theta = flow_[leave_slot];
    for (int slot : minus_slots) flow_[slot] -= theta;
    for (int slot : plus_slots) flow_[slot] += theta;
    in_basis_[basis_[leave_slot]] = 0;
    in_basis_[enter] = 1;
    basis_[leave_slot] = enter;
    flow_[leave_slot] = theta;
  }

  int m_, n_;
  std::vector<S> a_, b_, c_;
  std::vector<int> basis_;
  std::vector<S> flow_;
  std::vector<char> in_basis_;
  std::vector<S> u_, v_;
  double eps_ = 0.0;
};

template <class S>
struct w2_result {
  transport_plan<S> plan;
  S cost{};           // W_2 squared
  double distance{};  // W_2
};

/// Exact optimal W_2 plan between two measures on the same space.
template <class S>
w2_result<S> solve_w2(const prob_measure<S>& mu0, const prob_measure<S>& mu1) {
  require_same_space(mu0.sp, mu1.sp, "solve_w2");
  const auto& X = *mu0.sp;
  auto rows = mu0.support();
  auto cols = mu1.support();
  const int m = static_cast<int>(rows.size()), n = static_cast<int>(cols.size());
  std::vector<S> a, b, c;
  a.reserve(m);
  b.reserve(n);
  c.reserve(static_cast<std::size_t>(m) * n);
  for (int i : rows) a.push_back(mu0.w[i]);
  for (int j : cols) b.push_back(mu1.w[j]);
  for (int i : rows)
    for (int j : cols) c.push_back(X.dist(i, j) * X.dist(i, j));

  transport_simplex<S> simplex(std::move(a), std::move(b), std::move(c));
  simplex.run();
  std::vector<plan_entry<S>> entries;
  for (const auto& f : simplex.flows()) entries.push_back({rows[f.i], cols[f.j], f.mass});
  auto plan = make_plan<S>(mu0.sp, std::move(entries));
  S cost = plan.cost;
  double dist = std::sqrt(std::max(0.0, to_double(cost)));
  return {std::move(plan), std::move(cost), dist};
}

}  // namespace cdk
