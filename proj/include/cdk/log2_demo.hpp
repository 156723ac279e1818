#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "cdk/entropy.hpp"
#include "cdk/generate.hpp"
#include "cdk/geodesic_plan.hpp"

namespace cdk {

/// Converts a time in [0,1] to a grid step, refusing off-grid values.
inline int step_from_time(double t, int T, double tol = 1e-9) {
  double scaled = t * T;
  int k = static_cast<int>(std::llround(scaled));
  if (k < 0 || k > T || std::abs(scaled - k) > tol * T)
    throw grid_error("time " + std::to_string(t) + " is not a multiple of 1/" + std::to_string(T));
  return k;
}

/// Configuration of the entropy-drop experiment: two families of geodesics
/// on an l-infinity dyadic band that share their initial segment up to t1
/// and occupy disjoint supports after t2.
struct log2_config {
  int T = 32;
  int t1_step = 28;     // families agree on [0, t1]
  int t2_step = 29;     // families disjoint on (t2, 1]
  int family_size = 2;  // parallel strands per family
  double K = 0.0;
  double tol = 1e-9;
};

template <class S>
struct log2_report {
  space_ptr<S> sp;
  geodesic_plan<S> up, down, mixture;
  double t1 = 0.0, t2 = 0.0;
  std::vector<double> times;
  std::vector<double> ent_up, ent_down, ent_mix;
  std::vector<double> drop;   // (ent_up + ent_down)/2 - ent_mix per grid time
  double measured_drop = 0.0;  // drop on the disjoint tail
  bool drop_ok = false;        // drop = log 2 within tol for every s > t2
  cd_report mix_cd;            // K-convexity of the mixture
};

/// Builds the two geodesic families on a generated l-infinity band, together
/// with their half/half mixture, and reports the entropy curves, the
/// entropy drop past t2, and the CD slack of the mixture.
///
/// Strand j of each family runs horizontally at height G*j until t1 and then
/// shifts one grid row per step, up or down, until t2; G = 2*(t2-t1)*T + 1
/// keeps the two families disjoint at every time past t1.
template <class S>
log2_report<S> log2_drop_experiment(const log2_config& cfg) {
  const int T = cfg.T, k1 = cfg.t1_step, k2 = cfg.t2_step, fam = cfg.family_size;
  if (T < 2) throw construction_error("log2 demo needs T >= 2");
  if (!(0 < k1 && k1 < k2 && k2 < T))
    throw construction_error("log2 demo needs grid steps 0 < t1 < t2 < 1");
  if (fam < 1) throw construction_error("log2 demo needs family_size >= 1");

  const int shift = k2 - k1;       // rows gained during the branch window
  const int gap = 2 * shift + 1;   // strand spacing
  const int rows = fam * gap;      // y values: -shift .. (fam-1)*gap + shift

  // Band of the l-infinity dyadic grid with step 1/T.
  std::vector<std::string> ids;
  std::vector<std::vector<S>> labels;
  auto point_index = [&](int xi, int yi) { return xi * rows + (yi + shift); };
  for (int xi = 0; xi <= T; ++xi)
    for (int yi = -shift; yi < rows - shift; ++yi) {
      double x = static_cast<double>(xi) / T, y = static_cast<double>(yi) / T;
      ids.push_back(coord_id(x, y));
      labels.push_back({ratio<S>(xi, T), ratio<S>(yi, T)});
    }
  auto sp = space_from_labels<S>(std::move(ids), std::move(labels), norm_kind::linf,
                                 std::vector<S>(static_cast<std::size_t>(T + 1) * rows, S(1)));

  auto strand = [&](int j, int dir) {
    std::vector<int> steps;
    const int center = j * gap;
    for (int i = 0; i <= T; ++i) {
      int off = std::max(0, std::min(i - k1, shift));
      steps.push_back(point_index(i, center + dir * off));
    }
    return make_geodesic(*sp, std::move(steps), scalar_traits<S>::is_exact ? 0.0 : cfg.tol);
  };

  std::vector<geo_atom<S>> up_atoms, down_atoms, mix_atoms;
  for (int j = 0; j < fam; ++j) {
    S w = ratio<S>(1, fam);
    up_atoms.push_back({strand(j, +1), w});
    down_atoms.push_back({strand(j, -1), w});
    mix_atoms.push_back({up_atoms.back().g, w * ratio<S>(1, 2)});
    mix_atoms.push_back({down_atoms.back().g, w * ratio<S>(1, 2)});
  }

  log2_report<S> rep;
  rep.sp = sp;
  rep.up = make_geodesic_plan<S>(sp, T, std::move(up_atoms));
  rep.down = make_geodesic_plan<S>(sp, T, std::move(down_atoms));
  rep.mixture = make_geodesic_plan<S>(sp, T, std::move(mix_atoms));
  rep.t1 = static_cast<double>(k1) / T;
  rep.t2 = static_cast<double>(k2) / T;

  const double ln2 = std::log(2.0);
  rep.drop_ok = true;
  for (int i = 0; i <= T; ++i) {
    double eu = entropy(evaluate_at(rep.up, i)).value;
    double ed = entropy(evaluate_at(rep.down, i)).value;
    double em = entropy(evaluate_at(rep.mixture, i)).value;
    double dr = 0.5 * eu + 0.5 * ed - em;
    rep.times.push_back(static_cast<double>(i) / T);
    rep.ent_up.push_back(eu);
    rep.ent_down.push_back(ed);
    rep.ent_mix.push_back(em);
    rep.drop.push_back(dr);
    if (i > k2) {
      rep.measured_drop = dr;
      if (std::abs(dr - ln2) > cfg.tol) rep.drop_ok = false;
    }
  }
  rep.mix_cd = check_k_convexity(rep.mixture, cfg.K, cfg.tol);
  return rep;
}

}  // namespace cdk
