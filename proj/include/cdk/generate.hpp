#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "cdk/space.hpp"

namespace cdk {

enum class norm_kind { l1, l2, linf };

inline const char* to_string(norm_kind p) {
  switch (p) {
    case norm_kind::l1: return "1";
    case norm_kind::l2: return "2";
    case norm_kind::linf: return "inf";
  }
  return "?";
}

inline norm_kind norm_from_string(const std::string& s) {
  if (s == "1") return norm_kind::l1;
  if (s == "2") return norm_kind::l2;
  if (s == "inf" || s == "oo") return norm_kind::linf;
  throw spec_error("unknown norm: " + s + " (expected 1, 2, or inf)");
}

struct grid_spec {
  int side = 2;        // points per axis
  double step = 1.0;   // dyadic coordinate step
  norm_kind norm = norm_kind::linf;
};

struct graph_spec {
  int n = 0;
  std::vector<std::tuple<int, int, double>> edges;  // undirected, weighted
};

struct explicit_spec {
  std::vector<std::string> ids;
  std::vector<double> dist_flat;  // row-major n*n
};

struct space_gen_spec {
  std::variant<grid_spec, graph_spec, explicit_spec> kind;
  std::vector<double> weights;  // empty = uniform measure (weight 1 per point)
};

inline std::string coord_id(double x, double y) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "(%g,%g)", x, y);
  return buf;
}

namespace detail {

template <class S>
S norm_distance(const std::vector<S>& a, const std::vector<S>& b, norm_kind p) {
  if (a.size() != b.size()) throw structural_error("label dimension mismatch");
  if constexpr (scalar_traits<S>::is_exact) {
    if (p == norm_kind::l2)
      throw spec_error("euclidean norm is not available in exact mode (irrational distances)");
  }
  S acc(0);
  double sq = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    S d = abs_value(S(a[k] - b[k]));
    switch (p) {
      case norm_kind::l1: acc += d; break;
      case norm_kind::linf: acc = std::max(acc, d); break;
      case norm_kind::l2: sq += to_double(d) * to_double(d); break;
    }
  }
  if (p == norm_kind::l2) return from_double<S>(std::sqrt(sq));
  return acc;
}

}  // namespace detail

/// Builds a space whose metric is the lp distance on the given coordinate labels.
template <class S>
space_ptr<S> space_from_labels(std::vector<std::string> ids, std::vector<std::vector<S>> labels,
                               norm_kind p, std::vector<S> m) {
  auto n = ids.size();
  std::vector<S> dist(n * n, S(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      S d = detail::norm_distance(labels[i], labels[j], p);
      dist[i * n + j] = d;
      dist[j * n + i] = d;
    }
  return make_space<S>(std::move(ids), std::move(dist), std::move(m), std::move(labels));
}

/// All-pairs shortest paths on a weighted graph; throws if disconnected.
template <class S>
space_ptr<S> space_from_graph(const graph_spec& g, std::vector<S> m) {
  if (g.n <= 0) throw spec_error("graph space needs at least one point");
  const int n = g.n;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d(static_cast<std::size_t>(n) * n, inf);
  std::vector<S> dx(static_cast<std::size_t>(n) * n, S(0));
  std::vector<char> known(static_cast<std::size_t>(n) * n, 0);
  auto at = [n](int i, int j) { return static_cast<std::size_t>(i) * n + j; };
  for (int i = 0; i < n; ++i) {
    d[at(i, i)] = 0.0;
    known[at(i, i)] = 1;
  }
  for (const auto& [a, b, w] : g.edges) {
    if (a < 0 || a >= n || b < 0 || b >= n) throw spec_error("graph edge references unknown point");
    if (!(w > 0)) throw spec_error("graph edge weights must be positive");
    if (w < d[at(a, b)]) {
      d[at(a, b)] = d[at(b, a)] = w;
      dx[at(a, b)] = dx[at(b, a)] = from_double<S>(w);
      known[at(a, b)] = known[at(b, a)] = 1;
    }
  }
  // Floyd-Warshall, mirrored exactly in S arithmetic.
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (d[at(i, k)] + d[at(k, j)] < d[at(i, j)]) {
          d[at(i, j)] = d[at(i, k)] + d[at(k, j)];
          dx[at(i, j)] = dx[at(i, k)] + dx[at(k, j)];
          known[at(i, j)] = 1;
        }
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!known[at(i, j)]) throw spec_error("graph is disconnected; metric undefined");
  std::vector<std::string> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = std::to_string(i);
  return make_space<S>(std::move(ids), std::move(dx), std::move(m));
}

template <class S>
space_ptr<S> build_space(const space_gen_spec& spec) {
  std::vector<S> m;
  auto fill_measure = [&](std::size_t n) {
    if (spec.weights.empty()) {
      m.assign(n, S(1));
    } else {
      if (spec.weights.size() != n) throw spec_error("measure weight count does not match point count");
      m.clear();
      for (double w : spec.weights) {
        if (!(w > 0)) throw spec_error("measure weights must be positive");
        m.push_back(from_double<S>(w));
      }
    }
  };

  if (const auto* g = std::get_if<grid_spec>(&spec.kind)) {
    if (g->side < 1) throw spec_error("grid side must be >= 1");
    if (!(g->step > 0) || !is_small_dyadic(g->step))
      throw spec_error("grid step must be a positive dyadic rational");
    std::vector<std::string> ids;
    std::vector<std::vector<S>> labels;
    for (int i = 0; i < g->side; ++i)
      for (int j = 0; j < g->side; ++j) {
        double x = i * g->step, y = j * g->step;
        ids.push_back(coord_id(x, y));
        labels.push_back({from_double<S>(x), from_double<S>(y)});
      }
    fill_measure(ids.size());
    return space_from_labels<S>(std::move(ids), std::move(labels), g->norm, std::move(m));
  }
  if (const auto* g = std::get_if<graph_spec>(&spec.kind)) {
    fill_measure(static_cast<std::size_t>(g->n));
    return space_from_graph<S>(*g, std::move(m));
  }
  const auto& e = std::get<explicit_spec>(spec.kind);
  auto n = e.ids.size();
  if (e.dist_flat.size() != n * n) throw spec_error("explicit metric has wrong size");
  std::vector<S> dist;
  dist.reserve(n * n);
  for (double v : e.dist_flat) dist.push_back(from_double<S>(v));
  fill_measure(n);
  return make_space<S>(e.ids, std::move(dist), std::move(m));
}

/// Path graph 0-1-...-(n-1) with unit edges; handy in tests and demos.
template <class S>
space_ptr<S> path_graph_space(int n) {
  graph_spec g;
  g.n = n;
  for (int i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1, 1.0);
  space_gen_spec spec;
  spec.kind = g;
  return build_space<S>(spec);
}

}  // namespace cdk
