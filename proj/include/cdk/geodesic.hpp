#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cdk/space.hpp"

namespace cdk {

/// Discrete constant-speed geodesic: a (T+1)-step point sequence with
/// |d(p_i,p_j) - (|i-j|/T) * d(p_0,p_T)| <= tol_geo for all i,j.
template <class S>
struct geodesic {
  std::vector<int> steps;  // point indices, size T+1
  S length{};              // d(p_0, p_T)

  int T() const { return static_cast<int>(steps.size()) - 1; }
  int start() const { return steps.front(); }
  int end() const { return steps.back(); }

  friend bool operator==(const geodesic& a, const geodesic& b) { return a.steps == b.steps; }
  friend bool operator<(const geodesic& a, const geodesic& b) { return a.steps < b.steps; }
};

template <class S>
bool constant_speed(const space<S>& X, const std::vector<int>& steps, double tol_geo) {
  const int T = static_cast<int>(steps.size()) - 1;
  if (T < 1) return false;
  const S& len = X.dist(steps.front(), steps.back());
  for (int i = 0; i <= T; ++i)
    for (int j = i + 1; j <= T; ++j) {
      S want = len * ratio<S>(j - i, T);
      if (!abs_le(S(X.dist(steps[i], steps[j]) - want), tol_geo)) return false;
    }
  return true;
}

template <class S>
geodesic<S> make_geodesic(const space<S>& X, std::vector<int> steps, double tol_geo) {
  if (steps.size() < 2) throw structural_error("geodesic needs at least two steps");
  if (!constant_speed(X, steps, tol_geo))
    throw structural_error("point sequence violates the constant-speed invariant");
  S len = X.dist(steps.front(), steps.back());
  return geodesic<S>{std::move(steps), std::move(len)};
}

/// Exact enumeration of all T-step constant-speed geodesics from x to y,
/// in lexicographic order of the point-index sequence.
///
/// A sequence with d(p_k, p_{k+1}) = L/T for all k, d(x, p_k) = k L/T and
/// d(p_k, y) = (T-k) L/T is automatically constant speed (triangle inequality
/// squeezes every other pair), so suffixes can be memoized on (point, position)
/// independently of the prefix. Candidates are re-verified in full before
/// being returned, which also weeds out tolerance-boundary artifacts.
template <class S>
std::vector<geodesic<S>> enumerate_geodesics(const space<S>& X, int x, int y, int T,
                                             double tol_geo) {
  if (T < 1) throw precondition_error("enumerate_geodesics: T must be >= 1");
  if (x < 0 || x >= X.n() || y < 0 || y >= X.n())
    throw structural_error("enumerate_geodesics: point index out of range");
  const S len = X.dist(x, y);
  const int n = X.n();

  // admissible[k] = points p with d(x,p) ~ k L/T and d(p,y) ~ (T-k) L/T
  std::vector<std::vector<char>> admissible(T + 1, std::vector<char>(n, 0));
  for (int k = 0; k <= T; ++k)
    for (int p = 0; p < n; ++p) {
      bool ok = abs_le(S(X.dist(x, p) - len * ratio<S>(k, T)), tol_geo) &&
                abs_le(S(X.dist(p, y) - len * ratio<S>(T - k, T)), tol_geo);
      admissible[k][p] = ok ? 1 : 0;
    }

  const S step_len = len * ratio<S>(1, T);
  // memo[(k, p)] = suffix sequences from position k at point p to y (excluding p)
  std::map<std::pair<int, int>, std::vector<std::vector<int>>> memo;

  auto suffixes = [&](auto&& self, int k, int p) -> const std::vector<std::vector<int>>& {
    auto key = std::make_pair(k, p);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<std::vector<int>> out;
    if (k == T) {
      if (p == y) out.push_back({});
    } else {
      for (int q = 0; q < n; ++q) {
        if (!admissible[k + 1][q]) continue;
        if (!abs_le(S(X.dist(p, q) - step_len), tol_geo)) continue;
        for (const auto& tail : self(self, k + 1, q)) {
          std::vector<int> seq;
          seq.reserve(tail.size() + 1);
          seq.push_back(q);
          seq.insert(seq.end(), tail.begin(), tail.end());
          out.push_back(std::move(seq));
        }
      }
    }
    return memo.emplace(key, std::move(out)).first->second;
  };

  std::vector<geodesic<S>> result;
  if (!admissible[0][x]) return result;
  for (const auto& tail : suffixes(suffixes, 0, x)) {
    std::vector<int> seq;
    seq.reserve(tail.size() + 1);
    seq.push_back(x);
    seq.insert(seq.end(), tail.begin(), tail.end());
    if (constant_speed(X, seq, tol_geo)) result.push_back(geodesic<S>{std::move(seq), len});
  }
  std::sort(result.begin(), result.end());
  return result;
}

/// Restriction to the grid interval [k1/T, k2/T], reparametrized to
/// resolution k2-k1. New length is (k2-k1)/T times the old one.
template <class S>
geodesic<S> restrict_geodesic(const space<S>& X, const geodesic<S>& g, int k1, int k2) {
  if (k1 < 0 || k2 > g.T() || k1 >= k2)
    throw grid_error("restrict_geodesic: need grid steps 0 <= k1 < k2 <= T");
  std::vector<int> steps(g.steps.begin() + k1, g.steps.begin() + k2 + 1);
  S len = X.dist(steps.front(), steps.back());
  return geodesic<S>{std::move(steps), std::move(len)};
}

template <class S>
geodesic<S> reverse_geodesic(const geodesic<S>& g) {
  geodesic<S> r = g;
  std::reverse(r.steps.begin(), r.steps.end());
  return r;
}

/// Formats a geodesic as "id0 -> id1 -> ..." for error messages and reports.
template <class S>
std::string format_geodesic(const space<S>& X, const geodesic<S>& g) {
  std::string out;
  for (std::size_t i = 0; i < g.steps.size(); ++i) {
    if (i) out += " -> ";
    out += X.ids[g.steps[i]];
  }
  return out;
}

}  // namespace cdk
