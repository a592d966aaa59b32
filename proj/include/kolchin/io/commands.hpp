#pragma once

// Command implementations behind the CLI. Each returns a JSON report in
// the kolchin-report/1 schema together with an exit code:
//   0 success, 1 parse or validation error, 2 search exhausted,
//   3 property violated (the report carries a witness).

#include <cstddef>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "kolchin/essential.hpp"
#include "kolchin/homology.hpp"
#include "kolchin/index_bound.hpp"
#include "kolchin/interesting_lifts.hpp"
#include "kolchin/io/document.hpp"
#include "kolchin/map_group.hpp"

namespace kolchin::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "kolchin-report/1";

enum ExitCode : int { kOk = 0, kInvalid = 1, kExhausted = 2, kViolated = 3 };

struct Outcome {
  Json report;
  int exit_code = kOk;
};

inline Json envelope(const std::string& command) {
  Json j;
  j["schema"] = kSchema;
  j["command"] = command;
  j["status"] = "ok";
  return j;
}

inline Json matrix_json(const IntegerMatrix& m) {
  Json rows = Json::array();
  for (const auto& row : m.to_strings()) {
    Json r = Json::array();
    // small entries print as numbers, large ones as strings
    for (const auto& x : row) {
      if (x.size() < 16) {
        r.push_back(std::stoll(x));
      } else {
        r.push_back(x);
      }
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

inline Json verdict_json(const Verdict& v, const std::vector<std::string>& labels) {
  Json j;
  j["outcome"] = to_string(v.outcome);
  j["bound"] = v.bound;
  if (v.witness) j["witness"] = format_word(labels, *v.witness);
  if (!v.detail.empty()) j["detail"] = v.detail;
  return j;
}

inline const NamedGroup& require_group(const Document& doc, const std::optional<std::string>& name) {
  if (name) {
    const auto* g = doc.find_group(*name);
    if (!g) throw DomainError("no group named '" + *name + "'");
    return *g;
  }
  if (doc.groups.size() != 1) throw DomainError("the document has " + std::to_string(doc.groups.size()) + " groups; pick one with --group");
  return doc.groups.front();
}

// ---------------------------------------------------------------------------

inline Outcome cmd_check(const Document& doc) {
  Outcome out{envelope("check"), kOk};
  Json graphs = Json::array();
  for (const auto& ng : doc.graphs) {
    const auto rep = validate(*ng.graph);
    Json j;
    j["name"] = ng.name;
    j["vertices"] = ng.graph->vertex_count();
    j["edges"] = ng.graph->edge_count();
    j["rank"] = ng.graph->rank();
    Json filt = Json::array();
    for (const auto& [e, idx] : rep.filtration) filt.push_back({{"edge", e}, {"index", idx}});
    j["filtration"] = std::move(filt);
    Json findings = Json::array();
    for (const auto& f : rep.findings) findings.push_back({{"fatal", f.fatal}, {"message", f.message}});
    j["findings"] = std::move(findings);
    j["valid"] = rep.valid();
    if (!rep.valid()) out.exit_code = kInvalid;
    graphs.push_back(std::move(j));
  }
  out.report["graphs"] = std::move(graphs);

  Json maps = Json::array();
  for (const auto& nm : doc.maps) {
    const auto& f = nm.map;
    const FilteredMap inv = invert(f);
    const bool left = compose(inv, f).is_identity();
    const bool right = compose(f, inv).is_identity();
    const bool involution = equal(invert(inv), f);
    Json j;
    j["name"] = nm.name;
    j["graph"] = nm.graph;
    j["inverse"] = emit_map(nm.name + "_inv", nm.graph, inv);
    j["two_sided_inverse"] = left && right;
    j["inverse_of_inverse"] = involution;
    if (!(left && right && involution)) out.exit_code = kViolated;
    maps.push_back(std::move(j));
  }
  out.report["maps"] = std::move(maps);

  // associativity on consecutive triples of maps sharing a graph
  Json assoc = Json::array();
  for (const auto& ng : doc.graphs) {
    std::vector<const NamedMap*> on;
    for (const auto& nm : doc.maps) {
      if (nm.graph == ng.name) on.push_back(&nm);
    }
    for (std::size_t k = 0; k < on.size(); ++k) {
      const NamedMap* t[3] = {on[k], on[(k + 1) % on.size()], on[(k + 2) % on.size()]};
      const bool ok = equal(compose(compose(t[0]->map, t[1]->map), t[2]->map),
                            compose(t[0]->map, compose(t[1]->map, t[2]->map)));
      assoc.push_back({{"maps", {t[0]->name, t[1]->name, t[2]->name}}, {"holds", ok}});
      if (!ok) out.exit_code = kViolated;
    }
  }
  out.report["associativity"] = std::move(assoc);
  return out;
}

inline Outcome cmd_upg(const Document& doc, const std::optional<std::string>& only) {
  Outcome out{envelope("upg"), kOk};
  Json maps = Json::array();
  bool any = false;
  for (const auto& nm : doc.maps) {
    if (only && nm.name != *only) continue;
    any = true;
    const auto& f = nm.map;
    const auto m = homology_action(f);
    const auto basis = spanning_tree_basis(f.graph(), f.graph()->base());
    const auto c = cycle_space_action(f, basis);
    const auto growth = growth_degree(f);
    Json j;
    j["name"] = nm.name;
    j["edge_order"] = Json::array();
    for (const auto& e : f.graph()->edges()) j["edge_order"].push_back(e.name);
    j["homology"] = matrix_json(m);
    j["unipotent"] = is_unipotent(m);
    j["strictly_triangular"] = is_strictly_upper_unipotent(m);
    j["cycle_basis"] = basis.labels();
    j["cycle_action"] = matrix_json(c);
    j["identity_mod3"] = is_identity_mod(c, 3);
    Json g;
    for (EdgeId e = 0; e < f.graph()->edge_count(); ++e) {
      const auto k = static_cast<std::size_t>(e);
      g.push_back({{"edge", f.graph()->edge(e).name}, {"bound", growth.bound[k]}, {"empirical", growth.empirical[k]}});
    }
    j["growth"] = std::move(g);
    j["growth_consistent"] = growth.consistent();
    if (!is_unipotent(m) || !is_strictly_upper_unipotent(m)) out.exit_code = kViolated;
    maps.push_back(std::move(j));
  }
  if (only && !any) throw DomainError("no map named '" + *only + "'");
  out.report["maps"] = std::move(maps);
  return out;
}

inline Outcome cmd_abelian(const Document& doc, const std::optional<std::string>& group) {
  const auto& ng = require_group(doc, group);
  const MapGroup k = doc.group(ng.name);
  const auto cert = abelian_certificate(k);
  Outcome out{envelope("abelian"), kOk};
  out.report["group"] = ng.name;
  out.report["abelian"] = cert.abelian;
  Json pairs = Json::array();
  for (const auto& [a, b] : cert.checked) pairs.push_back({k.generators()[a].label, k.generators()[b].label});
  out.report["checked_pairs"] = std::move(pairs);
  if (cert.witness) {
    const auto& w = *cert.witness;
    const auto& g = *k.graph();
    out.report["witness"] = {{"first", k.generators()[w.first].label},
                             {"second", k.generators()[w.second].label},
                             {"edge", g.edge(w.edge).name},
                             {"first_then_second", format_path(g, w.lhs)},
                             {"second_then_first", format_path(g, w.rhs)}};
    out.exit_code = kViolated;
  }
  return out;
}

inline Json steps_json(const std::vector<RewriteStep>& steps, const std::vector<Verdict>& verdicts,
                       const std::vector<std::string>& labels) {
  Json arr = Json::array();
  for (std::size_t s = 0; s < steps.size(); ++s) {
    Json j;
    j["description"] = steps[s].description;
    if (s < verdicts.size()) j["outer_class"] = verdict_json(verdicts[s], labels);
    arr.push_back(std::move(j));
  }
  return arr;
}

inline Outcome cmd_condition(const Document& doc, const std::optional<std::string>& group, int check_length) {
  const auto& ng = require_group(doc, group);
  const MapGroup k = doc.group(ng.name);
  const auto r = condition(k, check_length);
  Outcome out{envelope("condition"), kOk};
  out.report["group"] = ng.name;
  out.report["changed"] = r.changed();
  out.report["steps"] = steps_json(r.steps, r.certificate, {});
  out.report["document"] = emit(document_of(r.group, ng.graph, ng.name));
  return out;
}

inline std::string axis_id(std::size_t a) { return "alpha" + std::to_string(a + 1); }

inline Json essential_json(const EssentialData& d) {
  const auto& g = *d.group.graph();
  Json edges = Json::array();
  for (const auto& e : d.edges) {
    Json j;
    j["edge"] = g.edge(e.edge).name;
    j["index"] = e.edge + 1;
    j["route"] = to_string(e.route);
    j["anchor"] = format_path(g, e.anchor);
    j["vertex"] = format_path(g, e.line.anchor);
    j["period"] = format_path(g, e.line.period);
    j["axis"] = axis_id(e.axis);
    edges.push_back(std::move(j));
  }
  Json axes = Json::array();
  for (std::size_t a = 0; a < d.axes.size(); ++a) {
    const auto& ax = d.axes[a];
    Json j;
    j["id"] = axis_id(a);
    j["loop"] = format_path(g, ax.period);
    j["preferred_vertex"] = format_path(g, ax.preferred);
    j["translation"] = format_path(g, ax.translation.loop);
    j["multiplicity"] = ax.multiplicity();
    j["edges"] = Json::array();
    for (const auto x : ax.edges) j["edges"].push_back(g.edge(d.edges[x].edge).name);
    axes.push_back(std::move(j));
  }
  Json j;
  j["essential_edges"] = std::move(edges);
  j["axes"] = std::move(axes);
  return j;
}

/// Conditions the group and builds its essential data, checking every
/// rewrite with the outer-class oracle at check_length.
struct Pipeline {
  MapGroup conditioned;
  ConditionResult conditioning;
  EssentialData data;
  std::vector<Verdict> slide_verdicts;
};

inline Pipeline run_pipeline(const MapGroup& k, int search_bound, int check_length) {
  auto c = condition(k, check_length);
  auto d = essential_data(c.group, search_bound);
  std::vector<Verdict> verdicts;
  if (check_length > 0) {
    for (const auto& step : d.rewrites) {
      Verdict v = check_rewrite(step, check_length);
      if (!v.holds()) throw InternalError("slide '" + step.description + "' changed an outer class: " + v.detail);
      verdicts.push_back(std::move(v));
    }
  }
  MapGroup cg = c.group;
  return {std::move(cg), std::move(c), std::move(d), std::move(verdicts)};
}

inline Outcome abelian_gate(const Document& doc, const NamedGroup& ng, const std::string& command) {
  Outcome gate = cmd_abelian(doc, ng.name);
  gate.report["command"] = command;
  gate.report["status"] = "violated";
  gate.report["error"] = {{"kind", "property-violation"}, {"message", "the group is not abelian"}};
  return gate;
}

inline Outcome cmd_axes(const Document& doc, const std::optional<std::string>& group, int search_bound, int check_length) {
  const auto& ng = require_group(doc, group);
  const MapGroup k = doc.group(ng.name);
  if (!abelian_certificate(k).abelian) return abelian_gate(doc, ng, "axes");
  const Pipeline p = run_pipeline(k, search_bound, check_length);
  Outcome out{envelope("axes"), kOk};
  out.report["group"] = ng.name;
  out.report["search_bound"] = search_bound;
  out.report["conditioning"] = steps_json(p.conditioning.steps, p.conditioning.certificate, {});
  Json slides = Json::array();
  for (std::size_t s = 0; s < p.data.rewrites.size(); ++s) {
    Json j;
    j["description"] = p.data.rewrites[s].description;
    if (s < p.slide_verdicts.size()) j["outer_class"] = verdict_json(p.slide_verdicts[s], {});
    slides.push_back(std::move(j));
  }
  out.report["slides"] = std::move(slides);
  const Json ess = essential_json(p.data);
  for (const auto& [key, val] : ess.items()) out.report[key] = val;
  if (!p.conditioning.steps.empty() || !p.data.rewrites.empty()) {
    out.report["document"] = emit(document_of(p.data.group, ng.graph, ng.name));
  }
  const auto prop = verify_property_A(p.data.group, p.data);
  Json checks = Json::array();
  for (const auto& c : prop.checks) {
    Json j;
    j["check"] = c.check;
    j["edge"] = c.edge;
    if (!c.subject.empty()) j["subject"] = c.subject;
    if (!c.generator.empty()) j["generator"] = c.generator;
    j["pass"] = c.pass;
    if (!c.witness.empty()) j["witness"] = c.witness;
    checks.push_back(std::move(j));
  }
  out.report["property_A"] = {{"pass", prop.pass()}, {"checks", std::move(checks)}};
  if (!prop.pass()) {
    out.exit_code = kViolated;
    out.report["status"] = "violated";
  }
  return out;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

inline Outcome cmd_embed(const Document& doc, const std::optional<std::string>& group, const std::vector<std::string>& words,
                         int search_bound, int check_length) {
  const auto& ng = require_group(doc, group);
  const MapGroup k = doc.group(ng.name);
  if (!abelian_certificate(k).abelian) return abelian_gate(doc, ng, "embed");
  const Pipeline p = run_pipeline(k, search_bound, check_length);
  const auto& g = *p.data.group.graph();
  Outcome out{envelope("embed"), kOk};
  out.report["group"] = ng.name;
  out.report["convention"] = "w = x1.x2...xm evaluates to x1 o x2 o ... o xm; coordinate k means s_i(f) = T^k o s_alpha(f)";
  Json cols = Json::array();
  for (const auto& e : p.data.edges) cols.push_back(g.edge(e.edge).name);
  out.report["columns"] = std::move(cols);
  Json rows = Json::array();
  for (const auto& w : words) {
    const FilteredMap f = evaluate(p.data.group, w);
    const TwistVector v = twist_coordinates(f, p.data);
    Json j;
    j["word"] = w;
    j["twist"] = v.values;
    j["identity"] = f.is_identity();
    if (v.is_zero() && !f.is_identity()) {
      j["witness"] = "zero twist vector on a nontrivial map";
      out.exit_code = kViolated;
      out.report["status"] = "violated";
    }
    rows.push_back(std::move(j));
  }
  out.report["rows"] = std::move(rows);
  return out;
}

/// Resolves "--axis": a 1-based index, "alphaN", or the axis loop written
/// with spaces or dots (any rotation, either direction).
inline std::size_t resolve_axis(const EssentialData& d, const std::optional<std::string>& spec) {
  if (!spec) {
    if (d.axes.size() == 1) return 0;
    throw DomainError("there are " + std::to_string(d.axes.size()) + " axes; pick one with --axis");
  }
  std::string s = *spec;
  if (s.rfind("alpha", 0) == 0) s = s.substr(5);
  if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos) {
    const auto n = std::stoul(s);
    if (n < 1 || n > d.axes.size()) throw DomainError("axis index " + s + " out of range");
    return n - 1;
  }
  std::string text = *spec;
  for (auto& c : text) {
    if (c == '.') c = ' ';
  }
  std::istringstream in(text);
  std::vector<std::string> toks;
  for (std::string t; in >> t;) toks.push_back(t);
  const auto& g = *d.group.graph();
  for (std::size_t a = 0; a < d.axes.size(); ++a) {
    const auto& rho = d.axes[a].period;
    std::vector<OrientedEdge> es;
    for (const auto& t : toks) {
      const bool rev = t[0] == '~' || t[0] == '\'';
      const auto e = g.find_edge(rev ? t.substr(1) : t);
      if (!e) throw DomainError("unknown edge '" + t + "' in --axis");
      es.push_back({*e, rev});
    }
    if (es.size() != rho.size()) continue;
    if (rotation_offset<OrientedEdge>(rho.edges(), es) || rotation_offset<OrientedEdge>(inverted<OrientedEdge>(rho.edges()), es)) {
      return a;
    }
  }
  throw DomainError("no essential axis matches '" + *spec + "'");
}

inline Outcome cmd_il(const Document& doc, const std::optional<std::string>& group, const std::string& element,
                      const std::optional<std::string>& axis, int exp_bound, int radius, int depth, int search_bound,
                      int check_length) {
  const auto& ng = require_group(doc, group);
  const MapGroup k = doc.group(ng.name);
  if (!abelian_certificate(k).abelian) return abelian_gate(doc, ng, "il");
  const Pipeline p = run_pipeline(k, search_bound, check_length);
  const std::size_t a = resolve_axis(p.data, axis);
  const FilteredMap f = evaluate(p.data.group, element);
  const auto rep = interesting_lifts(f, p.data, a, exp_bound, radius, static_cast<std::size_t>(depth));
  const auto& g = *p.data.group.graph();
  Outcome out{envelope("il"), kOk};
  out.report["group"] = ng.name;
  out.report["element"] = element;
  out.report["axis"] = {{"id", axis_id(a)}, {"loop", format_path(g, p.data.axes[a].period)},
                        {"translation", format_path(g, p.data.axes[a].translation.loop)}};
  out.report["bounds"] = {{"exp_bound", exp_bound}, {"radius", radius}, {"depth", depth}};
  out.report["identity"] = rep.identity;
  Json cands = Json::array();
  for (const auto& c : rep.candidates) {
    Json j;
    j["k"] = c.exponent;
    j["twist"] = format_path(g, c.lift.twist());
    j["commutes"] = c.commutes;
    if (c.commutes) {
      j["fixed_vertices"] = c.fixed.fixed_vertices.size();
      j["fixed_ends_lower_bound"] = c.fixed.count_lower_bound;
      j["exactly_two_within_bounds"] = c.fixed.exactly_two_within_bounds;
    }
    j["interesting"] = c.interesting;
    cands.push_back(std::move(j));
  }
  out.report["candidates"] = std::move(cands);
  out.report["found"] = rep.found;
  out.report["predicted"] = rep.predicted;
  Json sources = Json::array();
  for (const auto& [name, k2] : rep.sources) sources.push_back({{"lift", name}, {"k", k2}});
  out.report["prediction_sources"] = std::move(sources);
  out.report["differences"] = rep.differences;
  out.report["complete"] = rep.complete;
  out.report["match"] = rep.matches();
  if (!rep.identity && rep.complete && !rep.matches()) {
    out.exit_code = kViolated;
    out.report["status"] = "violated";
  }
  return out;
}

inline Outcome cmd_bound(int n) {
  const auto b = index_bound(n);
  Outcome out{envelope("bound"), kOk};
  out.report["rank"] = n;
  out.report["gl_order"] = b.d.str();
  out.report["three_pow_n2"] = b.three_n2.str();
  out.report["gl_order_below_three_pow_n2"] = b.d_below();
  out.report["vcd"] = b.vcd;
  out.report["gl_order_vcd"] = b.d_vcd.str();
  out.report["index_bound"] = b.product.str();
  out.report["three_pow_5n2"] = b.three_5n2.str();
  out.report["index_bound_below_three_pow_5n2"] = b.product_below();
  if (!b.d_below() || !b.product_below()) out.exit_code = kViolated;
  return out;
}

/// Runs fn, turning library errors into error reports with the matching
/// exit code.
inline Outcome guarded(const std::string& command, const std::function<Outcome()>& fn) {
  auto fail = [&](const std::string& kind, const std::string& msg, int code) {
    Outcome o{envelope(command), code};
    o.report["status"] = "error";
    o.report["error"] = {{"kind", kind}, {"message", msg}};
    return o;
  };
  try {
    return fn();
  } catch (const ParseError& e) {
    return fail("parse-error", e.what(), kInvalid);
  } catch (const SearchExhausted& e) {
    return fail("search-exhausted", e.what(), kExhausted);
  } catch (const PropertyViolation& e) {
    return fail("property-violation", e.what(), kViolated);
  } catch (const InternalError& e) {
    return fail("internal-error", e.what(), kViolated);
  } catch (const Error& e) {
    return fail("invalid-input", e.what(), kInvalid);
  }
}

// ---------------------------------------------------------------------------
// Text rendering

namespace detail {

inline void render(std::ostringstream& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  auto flat = [](const Json& v) {
    if (!v.is_array()) return false;
    for (const auto& x : v) {
      if (x.is_structured()) return false;
    }
    return true;
  };
  if (j.is_object()) {
    for (const auto& [key, val] : j.items()) {
      if (val.is_string() && val.get<std::string>().find('\n') != std::string::npos) {
        out << pad << key << ":\n";
        std::istringstream lines(val.get<std::string>());
        for (std::string l; std::getline(lines, l);) out << pad << "  | " << l << '\n';
      } else if (!val.is_structured()) {
        out << pad << key << ": " << scalar(val) << '\n';
      } else if (flat(val)) {
        out << pad << key << ": [";
        for (std::size_t k = 0; k < val.size(); ++k) out << (k ? ", " : "") << scalar(val[k]);
        out << "]\n";
      } else {
        out << pad << key << ":\n";
        render(out, val, indent + 2);
      }
    }
  } else if (j.is_array()) {
    for (const auto& x : j) {
      if (x.is_object()) {
        std::ostringstream inner;
        render(inner, x, indent + 2);
        std::string s = inner.str();
        if (s.size() < static_cast<std::size_t>(indent) + 2) {
          out << pad << "- {}\n";
          continue;
        }
        s.replace(static_cast<std::size_t>(indent), 2, "- ");
        out << s;
      } else if (flat(x)) {
        out << pad << "- [";
        for (std::size_t k = 0; k < x.size(); ++k) out << (k ? ", " : "") << scalar(x[k]);
        out << "]\n";
      } else {
        out << pad << "- " << scalar(x) << '\n';
      }
    }
  }
}

}  // namespace detail

inline std::string render_text(const Json& report) {
  std::ostringstream out;
  detail::render(out, report, 0);
  return out.str();
}

}  // namespace kolchin::io
