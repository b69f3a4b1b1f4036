#pragma once

// JSON forms shared with the CLI:
//   MomentTable      {"M":int,"N":int,"s":[[s00,s01,...],[s10,...],...]}
//   AtomicMeasure2D  {"atoms":[{"x1":num,"x2":num,"w":num},...]}
//   IntervalSet      [{"lo":num,"hi":num|null,"hi_inf":bool},...]

#include <cmath>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "momentlines/error.hpp"
#include "momentlines/interval_set.hpp"
#include "momentlines/line_reduction.hpp"
#include "momentlines/measure.hpp"

namespace momentlines::json {

using Json = nlohmann::ordered_json;

namespace detail {

template <class J>
double number(const J& j, const std::string& what) {
  if (!j.is_number()) throw Error(ErrorKind::InvalidInput, what + ": expected a number");
  const double v = j.template get<double>();
  if (!std::isfinite(v)) throw Error(ErrorKind::InvalidInput, what + ": non-finite number");
  return v;
}

template <class J>
const J& field(const J& obj, const char* key, const std::string& what) {
  if (!obj.is_object()) throw Error(ErrorKind::InvalidInput, what + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorKind::InvalidInput, what + ": missing field \"" + key + "\"");
  return *it;
}

template <class J>
std::size_t dimension(const J& j, const std::string& what) {
  if (!j.is_number_integer() || j.template get<long long>() < 0)
    throw Error(ErrorKind::InvalidInput, what + ": expected a nonnegative integer");
  return static_cast<std::size_t>(j.template get<long long>());
}

}  // namespace detail

/// Parses text, mapping syntax errors onto ErrorKind::InvalidInput.
inline nlohmann::json parse(const std::string& text, const std::string& source) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, source + ": malformed JSON: " + e.what());
  }
}

template <class J>
MomentTable table_from_json(const J& j) {
  const std::size_t M = detail::dimension(detail::field(j, "M", "table"), "table.M");
  const std::size_t N = detail::dimension(detail::field(j, "N", "table"), "table.N");
  const auto& s = detail::field(j, "s", "table");
  if (!s.is_array() || s.size() != M + 1)
    throw Error(ErrorKind::InvalidInput, "table.s: expected " + std::to_string(M + 1) + " rows");
  std::vector<double> v;
  v.reserve((M + 1) * (N + 1));
  for (std::size_t m = 0; m <= M; ++m) {
    const auto& row = s[m];
    if (!row.is_array() || row.size() != N + 1)
      throw Error(ErrorKind::InvalidInput, "table.s[" + std::to_string(m) + "]: expected " +
                                               std::to_string(N + 1) + " entries");
    for (std::size_t n = 0; n <= N; ++n)
      v.push_back(detail::number(row[n], "table.s[" + std::to_string(m) + "][" + std::to_string(n) + "]"));
  }
  return MomentTable(M, N, std::move(v));
}

inline Json to_json(const MomentTable& t) {
  Json rows = Json::array();
  for (std::size_t m = 0; m <= t.M(); ++m) {
    Json row = Json::array();
    for (std::size_t n = 0; n <= t.N(); ++n) row.push_back(t(m, n));
    rows.push_back(std::move(row));
  }
  return Json{{"M", t.M()}, {"N", t.N()}, {"s", std::move(rows)}};
}

template <class J>
AtomicMeasure2D measure_from_json(const J& j) {
  const auto& atoms = detail::field(j, "atoms", "measure");
  if (!atoms.is_array()) throw Error(ErrorKind::InvalidInput, "measure.atoms: expected an array");
  std::vector<Atom2D> out;
  out.reserve(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::string where = "measure.atoms[" + std::to_string(i) + "]";
    out.push_back({detail::number(detail::field(atoms[i], "x1", where), where + ".x1"),
                   detail::number(detail::field(atoms[i], "x2", where), where + ".x2"),
                   detail::number(detail::field(atoms[i], "w", where), where + ".w")});
  }
  return AtomicMeasure2D(std::move(out));
}

inline Json to_json(const AtomicMeasure2D& mu) {
  Json atoms = Json::array();
  for (const Atom2D& a : mu.atoms()) atoms.push_back(Json{{"x1", a.x1}, {"x2", a.x2}, {"w", a.w}});
  return Json{{"atoms", std::move(atoms)}};
}

inline Json to_json(const IntervalSet& set) {
  Json out = Json::array();
  for (const Interval& i : set.components()) {
    const bool inf = std::isinf(i.hi);
    out.push_back(Json{{"lo", i.lo}, {"hi", inf ? Json(nullptr) : Json(i.hi)}, {"hi_inf", inf}});
  }
  return out;
}

inline Json to_json(const SplitMoments& split) {
  Json grid = Json::array();
  for (std::size_t m = 0; m <= split.M; ++m) {
    Json row = Json::array();
    for (std::size_t j = 0; j <= split.N; ++j) row.push_back(split(m, j));
    grid.push_back(std::move(row));
  }
  return Json{{"W", split.W}, {"s", std::move(grid)}};
}

}  // namespace momentlines::json
