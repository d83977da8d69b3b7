#pragma once

// Text and JSON renderings of check reports.

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cutcheck/term.hpp"
#include "cutcheck/verdict.hpp"

namespace cutcheck {

using ordered_json = nlohmann::ordered_json;

/// FNV-1a over the inputs, to tie a report to what was checked.
inline std::string input_digest(const std::vector<std::string>& parts) {
  std::uint64_t h = 14695981039346656037ull;
  for (const auto& p : parts) {
    for (unsigned char c : p) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

inline ordered_json to_json(const Substitution& s) {
  ordered_json o = ordered_json::object();
  for (const auto& [k, v] : s.bindings()) o[k] = to_string(v);
  return o;
}

inline ordered_json witness_json(const std::string& stage, const Verdict& v) {
  ordered_json o;
  o["stage"] = stage;
  if (v.refuted_p() && v.witness) {
    const Witness& w = *v.witness;
    o["kind"] = w.kind;
    o["atom"] = w.atom ? ordered_json(to_string(*w.atom)) : ordered_json(nullptr);
    o["clause"] = w.clause_index ? ordered_json(*w.clause_index + 1) : ordered_json(nullptr);
    o["substitution"] = to_json(w.substitution);
    o["instance"] = w.instance ? ordered_json(to_string(*w.instance)) : ordered_json(nullptr);
    o["note"] = w.note;
  } else {
    o["kind"] = "bound_exhausted";
    o["bound"] = v.bound;
    o["value"] = v.bound_value;
    o["note"] = v.note;
  }
  return o;
}

inline ordered_json verdict_detail_json(const std::string& label, const Verdict& v) {
  ordered_json o;
  o["label"] = label;
  o["verdict"] = to_string(v.outcome);
  o["note"] = v.note;
  return o;
}

/// {check, verdict, bounds, witnesses, per_atom, timing_ms}. Witnesses list
/// the evidence of every stage that is not Verified, Unknown bounds included.
/// per_atom holds the atoms that are not Verified; S can have many members.
inline ordered_json report_json(const CheckReport& r) {
  ordered_json o;
  o["check"] = r.check;
  o["verdict"] = to_string(r.verdict.outcome);
  o["bounds"] = {{"depth", r.bounds.depth}, {"nodes", r.bounds.nodes}, {"steps", r.bounds.steps}};
  ordered_json ws = ordered_json::array();
  if (r.stages.empty()) {
    if (!r.verdict.verified_p()) ws.push_back(witness_json(r.check, r.verdict));
  } else {
    for (const auto& s : r.stages)
      if (!s.verdict.verified_p()) ws.push_back(witness_json(s.label, s.verdict));
  }
  o["witnesses"] = ws;
  ordered_json pa = ordered_json::array();
  for (const auto& a : r.per_atom) {
    if (a.verdict.verified_p()) continue;
    ordered_json x;
    x["atom"] = to_string(a.atom);
    x["verdict"] = to_string(a.verdict.outcome);
    x["clause"] = a.clause_index ? ordered_json(*a.clause_index + 1) : ordered_json(nullptr);
    ordered_json ds = ordered_json::array();
    for (const auto& d : a.details) ds.push_back(verdict_detail_json(d.label, d.verdict));
    x["details"] = ds;
    pa.push_back(x);
  }
  o["per_atom"] = pa;
  o["timing_ms"] = r.timing_ms ? ordered_json(*r.timing_ms) : ordered_json(nullptr);
  return o;
}

inline std::string describe(const Verdict& v) {
  std::string s = to_string(v.outcome);
  if (v.unknown_p()) s += " (" + v.bound + " = " + std::to_string(v.bound_value) + ")";
  if (!v.note.empty()) s += ": " + v.note;
  return s;
}

inline std::string describe(const Witness& w) {
  std::string s = w.kind;
  if (w.atom) s += " atom " + to_string(*w.atom);
  if (w.clause_index) s += " clause " + std::to_string(*w.clause_index + 1);
  if (!w.substitution.empty()) s += " with " + to_string(w.substitution);
  if (w.instance) s += " instance " + to_string(*w.instance);
  return s;
}

/// Per-atom lines are printed only for atoms that are not Verified.
inline std::string report_text(const CheckReport& r) {
  std::ostringstream os;
  os << "check: " << r.check << "\n";
  os << "inputs: " << r.digest << "\n";
  os << "bounds: depth=" << r.bounds.depth << " nodes=" << r.bounds.nodes << " steps=" << r.bounds.steps << "\n";
  for (const auto& s : r.stages) {
    os << "stage " << s.label << ": " << describe(s.verdict) << "\n";
    if (s.verdict.witness) os << "  witness: " << describe(*s.verdict.witness) << "\n";
  }
  std::size_t bad = 0;
  for (const auto& a : r.per_atom) {
    if (a.verdict.verified_p()) continue;
    ++bad;
    os << "atom " << to_string(a.atom) << ": " << describe(a.verdict) << "\n";
    for (const auto& d : a.details) os << "  " << d.label << ": " << describe(d.verdict) << "\n";
  }
  if (r.atoms_checked) os << "atoms verified: " << r.atoms_checked - bad << " of " << r.atoms_checked << "\n";
  if (r.stages.empty() && r.verdict.witness) os << "witness: " << describe(*r.verdict.witness) << "\n";
  os << "verdict: " << describe(r.verdict) << "\n";
  if (r.timing_ms) os << "timing_ms: " << *r.timing_ms << "\n";
  return os.str();
}

}  // namespace cutcheck
