#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdk/generate.hpp"
#include "cdk/geodesic_plan.hpp"
#include "cdk/measure.hpp"
#include "cdk/transport.hpp"

namespace cdk {

using json = nlohmann::json;

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // json::parse_error carries a byte offset; convert it to a line number.
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    throw io_error(path + ":" + std::to_string(line) + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write " + path);
  out << text;
  if (!out) throw io_error("write failed: " + path);
}

// ---------------------------------------------------------------------------
// scalar <-> json
// ---------------------------------------------------------------------------

/// Scalars serialize as plain numbers in float mode and as exact "p/q"
/// strings in exact mode, so files round-trip without loss either way.
template <class S>
json scalar_to_json(const S& v) {
  if constexpr (scalar_traits<S>::is_exact) {
    const rational& r = v;
    if (boost::multiprecision::denominator(r) == 1)
      return json(boost::multiprecision::numerator(r).str());
    return json(r.str());
  } else {
    return json(v);
  }
}

/// Parses "p/q", integer, or decimal text into a scalar.
template <class S>
S scalar_from_text(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) {
    if constexpr (scalar_traits<S>::is_exact) {
      if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
          s.find('E') == std::string::npos && !s.empty())
        return rational(s);
    }
    return from_double<S>(std::strtod(s.c_str(), nullptr));
  }
  if constexpr (scalar_traits<S>::is_exact) {
    return rational(s);
  } else {
    double num = std::strtod(s.substr(0, slash).c_str(), nullptr);
    double den = std::strtod(s.substr(slash + 1).c_str(), nullptr);
    return num / den;
  }
}

template <class S>
S scalar_from_json(const json& j) {
  if (j.is_number()) return from_double<S>(j.get<double>());
  if (j.is_string()) return scalar_from_text<S>(j.get<std::string>());
  throw io_error("expected a number or 'p/q' string");
}

/// Report values go through 12-significant-digit rounding for byte-stable output.
inline json report_number(double v) { return json(round_sig12(v)); }

// ---------------------------------------------------------------------------
// space files: {points:[{id,label?}], metric:{kind:...}, measure:[w_i]}
// ---------------------------------------------------------------------------

template <class S>
json space_to_json(const space<S>& X) {
  json points = json::array();
  for (int i = 0; i < X.n(); ++i) {
    json p;
    p["id"] = X.ids[i];
    if (!X.labels.empty()) {
      json lab = json::array();
      for (const auto& c : X.labels[i]) lab.push_back(scalar_to_json<S>(c));
      p["label"] = lab;
    }
    points.push_back(std::move(p));
  }
  json dist = json::array();
  for (int i = 0; i < X.n(); ++i) {
    json row = json::array();
    for (int j = 0; j < X.n(); ++j) row.push_back(scalar_to_json<S>(X.dist(i, j)));
    dist.push_back(std::move(row));
  }
  json measure = json::array();
  for (const auto& w : X.m) measure.push_back(scalar_to_json<S>(w));
  json out;
  out["points"] = std::move(points);
  out["metric"] = {{"kind", "matrix"}, {"dist", std::move(dist)}};
  out["measure"] = std::move(measure);
  return out;
}

template <class S>
space_ptr<S> space_from_json(const json& j) {
  if (!j.contains("points") || !j.contains("metric"))
    throw io_error("space file needs 'points' and 'metric'");
  std::vector<std::string> ids;
  std::vector<std::vector<S>> labels;
  bool any_label = false;
  for (const auto& p : j.at("points")) {
    ids.push_back(p.at("id").get<std::string>());
    std::vector<S> lab;
    if (p.contains("label")) {
      any_label = true;
      for (const auto& c : p.at("label")) lab.push_back(scalar_from_json<S>(c));
    }
    labels.push_back(std::move(lab));
  }
  const auto n = ids.size();
  std::vector<S> m;
  if (j.contains("measure")) {
    for (const auto& w : j.at("measure")) m.push_back(scalar_from_json<S>(w));
    if (m.size() != n) throw io_error("space measure length does not match point count");
  } else {
    m.assign(n, S(1));
  }
  const auto& metric = j.at("metric");
  const std::string kind = metric.at("kind").get<std::string>();
  if (kind == "matrix") {
    std::vector<S> dist;
    dist.reserve(n * n);
    for (const auto& row : metric.at("dist"))
      for (const auto& v : row) dist.push_back(scalar_from_json<S>(v));
    if (dist.size() != n * n) throw io_error("space metric matrix has wrong size");
    return make_space<S>(std::move(ids), std::move(dist), std::move(m),
                         any_label ? std::move(labels) : std::vector<std::vector<S>>{});
  }
  if (kind == "norm") {
    if (!any_label) throw io_error("norm metric needs point labels");
    return space_from_labels<S>(std::move(ids), std::move(labels),
                                norm_from_string(metric.at("p").is_string()
                                                     ? metric.at("p").get<std::string>()
                                                     : std::to_string(metric.at("p").get<int>())),
                                std::move(m));
  }
  if (kind == "graph") {
    graph_spec g;
    g.n = static_cast<int>(n);
    for (const auto& e : metric.at("edges"))
      g.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>());
    auto sp = space_from_graph<S>(g, std::move(m));
    auto mutable_sp = std::const_pointer_cast<space<S>>(sp);
    mutable_sp->ids = ids;
    mutable_sp->index.clear();
    for (int i = 0; i < mutable_sp->n(); ++i) mutable_sp->index.emplace(ids[i], i);
    return sp;
  }
  throw io_error("unknown metric kind: " + kind);
}

// ---------------------------------------------------------------------------
// measure files: {"weights":[...]} or {"by_id":{id: w}}
// ---------------------------------------------------------------------------

template <class S>
json measure_to_json(const prob_measure<S>& mu) {
  json w = json::array();
  for (const auto& v : mu.w) w.push_back(scalar_to_json<S>(v));
  return json{{"weights", std::move(w)}};
}

template <class S>
prob_measure<S> measure_from_json(space_ptr<S> sp, const json& j) {
  std::vector<S> w(sp->n(), S(0));
  if (j.contains("weights")) {
    const auto& arr = j.at("weights");
    if (arr.size() != static_cast<std::size_t>(sp->n()))
      throw io_error("measure weights length does not match point count");
    for (int i = 0; i < sp->n(); ++i) w[i] = scalar_from_json<S>(arr[i]);
  } else if (j.contains("by_id")) {
    for (const auto& [id, v] : j.at("by_id").items()) w[sp->index_of(id)] = scalar_from_json<S>(v);
  } else {
    throw io_error("measure file needs 'weights' or 'by_id'");
  }
  return make_measure<S>(std::move(sp), std::move(w));
}

// ---------------------------------------------------------------------------
// plan CSV: source_id,target_id,mass (ids quoted)
// ---------------------------------------------------------------------------

inline std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

template <class S>
std::string mass_to_text(const S& v) {
  if constexpr (scalar_traits<S>::is_exact) {
    return static_cast<const rational&>(v).str();
  } else {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  }
}

template <class S>
S mass_from_text(const std::string& s) {
  return scalar_from_json<S>(s.find('/') == std::string::npos && !s.empty() &&
                                     (std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '-' ||
                                      s[0] == '.')
                                 ? json(std::strtod(s.c_str(), nullptr))
                                 : json(s));
}

template <class S>
std::string plan_to_csv(const transport_plan<S>& plan) {
  std::string out = "source_id,target_id,mass\n";
  for (const auto& e : plan.entries) {
    out += csv_quote(plan.sp->ids[e.i]) + ',' + csv_quote(plan.sp->ids[e.j]) + ',' +
           mass_to_text<S>(e.mass) + '\n';
  }
  return out;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

template <class S>
transport_plan<S> plan_from_csv(space_ptr<S> sp, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<plan_entry<S>> entries;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (first) {
      first = false;
      if (!fields.empty() && fields[0] == "source_id") continue;  // header
    }
    if (fields.size() != 3) throw io_error("plan CSV rows need source_id,target_id,mass");
    entries.push_back(
        {sp->index_of(fields[0]), sp->index_of(fields[1]), mass_from_text<S>(fields[2])});
  }
  return make_plan<S>(std::move(sp), std::move(entries));
}

// ---------------------------------------------------------------------------
// geodesic plan files: {T, atoms:[{steps:[ids], mass}]}
// ---------------------------------------------------------------------------

template <class S>
json geodesic_plan_to_json(const geodesic_plan<S>& gp) {
  json atoms = json::array();
  for (const auto& a : gp.atoms) {
    json steps = json::array();
    for (int p : a.g.steps) steps.push_back(gp.sp->ids[p]);
    atoms.push_back(json{{"steps", std::move(steps)}, {"mass", scalar_to_json<S>(a.mass)}});
  }
  return json{{"T", gp.T}, {"atoms", std::move(atoms)}};
}

template <class S>
geodesic_plan<S> geodesic_plan_from_json(space_ptr<S> sp, const json& j, double tol_geo) {
  int T = j.at("T").get<int>();
  std::vector<geo_atom<S>> atoms;
  for (const auto& a : j.at("atoms")) {
    std::vector<int> steps;
    for (const auto& id : a.at("steps")) steps.push_back(sp->index_of(id.get<std::string>()));
    atoms.push_back({make_geodesic(*sp, std::move(steps), tol_geo),
                     scalar_from_json<S>(a.at("mass"))});
  }
  return make_geodesic_plan<S>(std::move(sp), T, std::move(atoms));
}

}  // namespace cdk
