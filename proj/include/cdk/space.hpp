#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cdk/errors.hpp"
#include "cdk/scalar.hpp"

namespace cdk {

/// Finite metric measure space: points, an exact symmetric distance matrix,
/// and a strictly positive reference measure m.
template <class S>
struct space {
  std::vector<std::string> ids;           // opaque point identifiers
  std::vector<S> dist_flat;               // n*n row-major distances
  std::vector<S> m;                       // per-point reference weights, all > 0
  std::vector<std::vector<S>> labels;     // optional coordinates (empty or size n)
  std::unordered_map<std::string, int> index;

  int n() const { return static_cast<int>(ids.size()); }
  const S& dist(int i, int j) const { return dist_flat[static_cast<std::size_t>(i) * ids.size() + j]; }

  int index_of(const std::string& id) const {
    auto it = index.find(id);
    if (it == index.end()) throw structural_error("unknown point id: " + id);
    return it->second;
  }
};

template <class S>
using space_ptr = std::shared_ptr<const space<S>>;

template <class S>
space_ptr<S> make_space(std::vector<std::string> ids, std::vector<S> dist_flat,
                        std::vector<S> m, std::vector<std::vector<S>> labels = {}) {
  auto n = ids.size();
  if (n == 0) throw structural_error("space needs at least one point");
  if (dist_flat.size() != n * n)
    throw structural_error("distance matrix size does not match point count");
  if (m.size() != n) throw structural_error("measure size does not match point count");
  if (!labels.empty() && labels.size() != n)
    throw structural_error("label count does not match point count");
  for (const auto& w : m)
    if (!(w > S(0))) throw structural_error("reference measure must be strictly positive");
  auto sp = std::make_shared<space<S>>();
  sp->ids = std::move(ids);
  sp->dist_flat = std::move(dist_flat);
  sp->m = std::move(m);
  sp->labels = std::move(labels);
  for (int i = 0; i < sp->n(); ++i) {
    if (!sp->index.emplace(sp->ids[i], i).second)
      throw structural_error("duplicate point id: " + sp->ids[i]);
  }
  return sp;
}

enum class metric_axiom {
  symmetry,
  zero_diagonal,
  positivity,
  triangle,
};

inline const char* to_string(metric_axiom a) {
  switch (a) {
    case metric_axiom::symmetry: return "symmetry";
    case metric_axiom::zero_diagonal: return "zero_diagonal";
    case metric_axiom::positivity: return "positivity";
    case metric_axiom::triangle: return "triangle";
  }
  return "?";
}

struct metric_violation {
  metric_axiom axiom;
  int i = -1, j = -1, k = -1;  // witness points (k only for triangle)
  double amount = 0.0;         // size of the violation
};

struct metric_report {
  std::vector<metric_violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks every metric axiom and reports all violations with witnesses.
/// The report is empty iff the space is a metric space within tol.
template <class S>
metric_report check_metric(const space<S>& X, double tol_metric) {
  metric_report rep;
  const int n = X.n();
  for (int i = 0; i < n; ++i) {
    if (!abs_le(X.dist(i, i), tol_metric))
      rep.violations.push_back({metric_axiom::zero_diagonal, i, i, -1, to_double(X.dist(i, i))});
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      S diff = X.dist(i, j) - X.dist(j, i);
      if (!abs_le(diff, tol_metric))
        rep.violations.push_back({metric_axiom::symmetry, i, j, -1, to_double(diff)});
      if (!(X.dist(i, j) > S(0)) || !(X.dist(j, i) > S(0)))
        rep.violations.push_back({metric_axiom::positivity, i, j, -1, to_double(X.dist(i, j))});
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        S slack = X.dist(i, j) - (X.dist(i, k) + X.dist(k, j));
        if (!(slack <= S(0)) && !abs_le(slack, tol_metric))
          rep.violations.push_back({metric_axiom::triangle, i, j, k, to_double(slack)});
      }
    }
  return rep;
}

template <class S>
bool same_space(const space_ptr<S>& a, const space_ptr<S>& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->ids == b->ids && a->dist_flat == b->dist_flat && a->m == b->m;
}

template <class S>
void require_same_space(const space_ptr<S>& a, const space_ptr<S>& b, const char* what) {
  if (!same_space(a, b)) throw structural_error(std::string(what) + ": operands live on different spaces");
}

}  // namespace cdk
