#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "cdk/geodesic_plan.hpp"
#include "cdk/measure.hpp"

namespace cdk {

/// Relative entropy value in nats; finite unless the measure charges a point
/// of zero reference weight.
struct entropy_value {
  double value = 0.0;
  bool finite = true;
};

/// Ent_m(mu) = sum_x m(x) rho(x) log rho(x) with rho = mu/m and 0 log 0 = 0.
template <class S>
entropy_value entropy(const prob_measure<S>& mu, const std::vector<S>& ref) {
  if (ref.size() != mu.w.size()) throw structural_error("entropy: reference measure size mismatch");
  double acc = 0.0;
  for (std::size_t x = 0; x < mu.w.size(); ++x) {
    if (!(mu.w[x] > S(0))) continue;
    if (!(ref[x] > S(0)))
      return {std::numeric_limits<double>::infinity(), false};
    double mass = to_double(mu.w[x]);
    acc += mass * std::log(mass / to_double(ref[x]));
  }
  return {acc, true};
}

template <class S>
entropy_value entropy(const prob_measure<S>& mu) {
  return entropy(mu, mu.sp->m);
}

/// Reference-measure mass of the support of mu; Ent(mu) >= -log of this.
template <class S>
double support_ref_mass(const prob_measure<S>& mu) {
  S acc(0);
  for (std::size_t x = 0; x < mu.w.size(); ++x)
    if (mu.w[x] > S(0)) acc += mu.sp->m[x];
  return to_double(acc);
}

/// K-convexity report for the entropy along a geodesic plan's interpolation:
/// slack(t) = Ent(mu_t) - [(1-t) Ent(mu_0) + t Ent(mu_1) - (K/2) t(1-t) W2^2].
struct cd_report {
  double K = 0.0;
  std::vector<double> times;      // grid times k/T
  std::vector<double> entropies;  // Ent(mu_t), +inf possible
  double w2_squared = 0.0;
  double worst_slack = -std::numeric_limits<double>::infinity();
  double worst_time = 0.0;
  bool pass = true;
};

template <class S>
cd_report check_k_convexity(const geodesic_plan<S>& gp, double K, double tol_cd) {
  cd_report rep;
  rep.K = K;
  std::vector<prob_measure<S>> mus;
  for (int k = 0; k <= gp.T; ++k) mus.push_back(evaluate_at(gp, k));
  rep.w2_squared = to_double(solve_w2(mus.front(), mus.back()).cost);
  std::vector<double> ent(gp.T + 1);
  for (int k = 0; k <= gp.T; ++k) {
    auto e = entropy(mus[k]);
    ent[k] = e.value;
    rep.times.push_back(static_cast<double>(k) / gp.T);
    rep.entropies.push_back(e.value);
  }
  for (int k = 0; k <= gp.T; ++k) {
    double t = static_cast<double>(k) / gp.T;
    double bound = (1.0 - t) * ent.front() + t * ent.back() - 0.5 * K * t * (1.0 - t) * rep.w2_squared;
    double slack = ent[k] - bound;
    if (slack > rep.worst_slack) {
      rep.worst_slack = slack;
      rep.worst_time = t;
    }
  }
  rep.pass = rep.worst_slack <= tol_cd;
  return rep;
}

/// Diameter cap sqrt(log 2 / (6|K| + 1)) used when sizing demo instances.
inline double length_bound(double K) {
  return std::sqrt(std::log(2.0) / (6.0 * std::abs(K) + 1.0));
}

}  // namespace cdk
