#pragma once

#include <utility>
#include <vector>

#include "cdk/space.hpp"

namespace cdk {

/// Probability measure on the points of a space: nonnegative weights
/// summing to 1 (exactly in exact mode, within 1e-12 in float mode).
template <class S>
struct prob_measure {
  space_ptr<S> sp;
  std::vector<S> w;

  std::vector<int> support() const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(w.size()); ++i)
      if (w[i] > S(0)) out.push_back(i);
    return out;
  }
};

inline constexpr double kMassTol = 1e-12;

template <class S>
prob_measure<S> make_measure(space_ptr<S> sp, std::vector<S> w) {
  if (!sp) throw structural_error("measure needs a space");
  if (static_cast<int>(w.size()) != sp->n())
    throw structural_error("measure weight count does not match point count");
  S total(0);
  bool any = false;
  for (const auto& v : w) {
    if (v < S(0)) throw structural_error("measure weights must be nonnegative");
    if (v > S(0)) any = true;
    total += v;
  }
  if (!any) throw structural_error("measure support is empty");
  if (!abs_le(S(total - S(1)), kMassTol))
    throw structural_error("measure weights must sum to 1");
  return prob_measure<S>{std::move(sp), std::move(w)};
}

template <class S>
prob_measure<S> dirac(space_ptr<S> sp, int i) {
  std::vector<S> w(sp->n(), S(0));
  w.at(i) = S(1);
  return make_measure<S>(std::move(sp), std::move(w));
}

template <class S>
prob_measure<S> uniform_on(space_ptr<S> sp, const std::vector<int>& pts) {
  if (pts.empty()) throw structural_error("uniform_on: empty support");
  std::vector<S> w(sp->n(), S(0));
  for (int i : pts) w.at(i) += ratio<S>(1, static_cast<long long>(pts.size()));
  return make_measure<S>(std::move(sp), std::move(w));
}

template <class S>
prob_measure<S> mix(const prob_measure<S>& a, const prob_measure<S>& b) {
  require_same_space(a.sp, b.sp, "mix");
  std::vector<S> w(a.w.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = (a.w[i] + b.w[i]) * ratio<S>(1, 2);
  return prob_measure<S>{a.sp, std::move(w)};
}

}  // namespace cdk
