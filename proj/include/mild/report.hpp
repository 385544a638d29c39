#ifndef MILD_REPORT_HPP
#define MILD_REPORT_HPP

// JSON views of the computed objects.  Every result object carries a
// "status"; no timings are recorded, so equal inputs give equal bytes.

#include <sstream>
#include <string>

#include "json.hpp"
#include "mild/models.hpp"
#include "mild/sectional.hpp"

namespace mild {

using json = nlohmann::json;

inline json scalar_json(const Scalar& s) { return s.str(); }

inline std::string module_label(const ModuleEntry& e) {
  if (e.is_zero()) return "0";
  std::string out;
  if (e.free_rank > 0) out = e.free_rank == 1 ? "R" : "R^" + std::to_string(e.free_rank);
  for (auto& t : e.torsion) out += (out.empty() ? "" : " + ") + std::string("R/") + t.str();
  return out;
}

inline json entry_json(const ModuleEntry& e) {
  json t = json::array();
  for (auto& x : e.torsion) t.push_back(scalar_json(x));
  return {{"degree", e.degree}, {"free_rank", e.free_rank}, {"torsion", t}, {"module", module_label(e)}};
}

inline json cohomology_json(const std::string& name, const CohomologyTable& t, Certainty mild, int r) {
  json degrees = json::array();
  for (int k = t.lo; k <= t.hi; ++k) degrees.push_back(entry_json(t.entry(k)));
  return {{"command", "cohomology"},
          {"algebra", name},
          {"ring", t.ring.str()},
          {"status", "exact"},
          {"window", {{"lo", t.lo}, {"hi", t.hi}}},
          {"degrees", degrees},
          {"mild", {{"r", r}, {"status", certainty_name(mild)}}}};
}

inline json minimality_json(const MinimalityReport& m, const CoefficientRing& R) {
  json entries = json::array();
  for (auto& e : m.entries)
    entries.push_back({{"generator", e.generator},
                       {"degree", e.degree},
                       {"decomposable", e.decomposable},
                       {"scaling_factor", scalar_json(e.scaling_factor)}});
  return {{"status", m.minimal(R) ? "minimal" : "not_minimal"}, {"field", m.field}, {"entries", entries}};
}

inline json model_json(const std::string& morphism, const RelativeModel& M, int window) {
  json gens = json::array();
  const FreeGradedAlgebra& E = *M.extended;
  for (auto& a : M.added)
    gens.push_back({{"name", E.generator(a.index).name},
                    {"degree", E.generator(a.index).degree},
                    {"stratum", a.stratum},
                    {"d", E.format(E.generator_differential(a.index))},
                    {"image", M.projection.target()->format(M.projection.image(a.index))}});
  auto q = is_quasi_iso(M.projection, window);
  return {{"command", "model"},
          {"morphism", morphism},
          {"ring", E.ring().str()},
          {"flavor", flavor_name(E.flavor())},
          {"status", q.ok ? "exact" : "failed"},
          {"window", {{"lo", M.window_lo}, {"hi", M.window_hi}}},
          {"quasi_iso", q.ok},
          {"stratified", is_stratified(M)},
          {"generators", gens},
          {"minimality", minimality_json(check_minimality(M), E.ring())}};
}

inline json morphism_images_json(const AlgebraMorphism& f) {
  json out = json::array();
  for (int g = 0; g < f.source()->num_generators(); ++g)
    out.push_back({{"generator", f.source()->generator(g).name}, {"image", f.target()->format(f.image(g))}});
  return out;
}

inline json lift_json(const AlgebraMorphism& psi, const AlgebraMorphism& eta, const AlgebraMorphism& phi,
                      int window) {
  auto defect = lift_defect(phi, eta, psi);
  return {{"command", "lift"},
          {"psi", psi.name()},
          {"eta", eta.name()},
          {"status", defect ? "failed" : "exact"},
          {"window", {{"lo", 0}, {"hi", window}}},
          {"defect", defect ? json(*defect) : json(nullptr)},
          {"images", morphism_images_json(phi)}};
}

inline json bound_json(const Bound& b) {
  json j = {{"status", status_name(b.status)}, {"value", b.value}};
  if (!b.witness.empty()) j["witness"] = b.witness;
  if (!b.note.empty()) j["note"] = b.note;
  return j;
}

inline json upper_json(const std::optional<int>& v) {
  if (!v) return {{"status", "not_found"}};
  return {{"status", "certified"}, {"value", *v}};
}

inline json invariants_json(const InvariantReport& r) {
  json certs = json::array();
  for (auto& c : r.certificates) {
    json vals = json::array();
    for (auto& [g, v] : c.values) vals.push_back({{"generator", g}, {"r", v}});
    certs.push_back({{"level", c.m},
                     {"side", c.side},
                     {"values", vals},
                     {"multiplicative", c.multiplicative},
                     {"multiplicative_witness", c.multiplicative_witness}});
  }
  auto violations = chain_violations(r);
  json hn = bound_json(r.Hnil_ub);
  if (!r.Hnil_certificate.empty()) hn["certificate"] = r.Hnil_certificate;
  return {{"morphism", r.morphism},
          {"ring", r.ring},
          {"flavor", r.flavor},
          {"window", {{"lo", 0}, {"hi", r.window}}},
          {"m_max", r.m_max},
          {"nil_ker_H", bound_json(r.nil_ker_H)},
          {"nil_ker", bound_json(r.nil_ker)},
          {"Hnil_ub", hn},
          {"Hsecat", bound_json(r.Hsecat)},
          {"msecat", bound_json(r.msecat)},
          {"Hsc", bound_json(r.Hsc)},
          {"msc", bound_json(r.msc)},
          {"secat_ub", upper_json(r.secat_ub)},
          {"sc_ub", upper_json(r.sc_ub)},
          {"chain", {{"status", violations.empty() ? "consistent" : "violated"}, {"violations", violations}}},
          {"certificates", certs},
          {"notes", r.notes}};
}

inline json bracket_json(const Bracket& b) {
  json j = {{"lo", b.lo}, {"hi", b.hi ? json(*b.hi) : json(nullptr)}};
  j["status"] = b.exact() ? "exact" : b.hi ? "bracketed" : "lower_bound";
  return j;
}

inline json tc_json(const TCReport& r, const char* command) {
  const bool tensor = std::string(command) == "atc";
  json inv = invariants_json(r.inv);
  return {{"command", command},
          {"algebra", r.algebra},
          {"n", r.n},
          {"ring", r.original_ring},
          {"working_ring", r.ring},
          {"window", {{"lo", 0}, {"hi", r.window}}},
          {"mild", {{"status", certainty_name(r.mild)}}},
          {"status", r.TC.exact() && r.tc.exact() ? "exact" : "bracketed"},
          {tensor ? "ATC" : "TC", bracket_json(r.TC)},
          {tensor ? "Atc" : "tc", bracket_json(r.tc)},
          {"invariants", inv}};
}

inline json retraction_json(const std::string& candidate, const std::string& inclusion, const RetractionCheck& c) {
  return {{"command", "verify-retraction"},
          {"candidate", candidate},
          {"inclusion", inclusion},
          {"status", c.ok ? "verified" : "rejected"},
          {"witness", c.witness}};
}

/// True when every member that can be uncertified is certified.
inline bool fully_certified(const json& j) {
  if (j.is_object()) {
    if (j.contains("status") && j["status"].is_string()) {
      const std::string s = j["status"];
      if (s == "saturated" || s == "unknown" || s == "bracketed" || s == "lower_bound" || s == "uncertified")
        return false;
    }
    for (auto& [k, v] : j.items())
      if (!fully_certified(v)) return false;
  } else if (j.is_array()) {
    for (auto& v : j)
      if (!fully_certified(v)) return false;
  }
  return true;
}

namespace detail {

inline std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  return v.dump();
}

inline bool is_flat(const json& j) {
  for (auto& [k, v] : j.items())
    if (v.is_structured()) return false;
  return true;
}

inline void render(std::ostream& out, const json& j, int indent) {
  const std::string pad(indent, ' ');
  for (auto& [k, v] : j.items()) {
    if (v.is_object() && is_flat(v)) {
      out << pad << k << ":";
      for (auto& [k2, v2] : v.items()) out << " " << k2 << "=" << scalar_text(v2);
      out << "\n";
    } else if (v.is_object()) {
      out << pad << k << ":\n";
      render(out, v, indent + 2);
    } else if (v.is_array()) {
      if (v.empty()) continue;
      out << pad << k << ":\n";
      for (auto& e : v) {
        if (e.is_object()) {
          out << pad << "  -";
          bool first = true;
          for (auto& [k2, v2] : e.items()) {
            if (v2.is_structured()) {
              if (v2.empty()) continue;
              out << (first ? " " : "\n" + pad + "    ") << k2 << "=" << v2.dump();
            } else {
              out << (first ? " " : ", ") << k2 << "=" << scalar_text(v2);
            }
            first = false;
          }
          out << "\n";
        } else {
          out << pad << "  - " << scalar_text(e) << "\n";
        }
      }
    } else {
      out << pad << k << ": " << scalar_text(v) << "\n";
    }
  }
}

}  // namespace detail

/// Plain-text view of a report, derived from its JSON.
inline std::string render_text(const json& j) {
  std::ostringstream out;
  detail::render(out, j, 0);
  return out.str();
}

}  // namespace mild

#endif  // MILD_REPORT_HPP
