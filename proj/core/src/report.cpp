#include "praag/report.hpp"

#include <sstream>

#include "json.hpp"

namespace praag {

namespace {

bool all_components_chordal(const Graph& g) {
  for (const auto& comp : connected_components(g)) {
    if (!chordal_structure(full_subgraph(g, comp)).chordal) return false;
  }
  return true;
}

} // namespace

AnalysisReport analyze(const PGraph& g, const AnalyzeOptions& opts) {
  g.validate();
  AnalysisReport rep;
  rep.input = g;

  const Presentation pr = praag_presentation(g);
  rep.d = pr.d();
  rep.r = pr.r();
  rep.triangle_free = is_triangle_free(g.graph);
  rep.complete = is_complete(g.graph);
  rep.chordal = all_components_chordal(g.graph);
  rep.predicted = predicted_cohomology(g);
  rep.mildness = mildness_check(g, opts.mildness_depth);
  rep.quadraticity = quadraticity_status(g, opts.completion);

  try {
    rep.cyclotomic = cyclotomic_check(g).cyclotomic();
  } catch (const PrecisionError& e) {
    rep.cyclotomic = std::nullopt;
    rep.cyclotomic_note = e.what();
  }

  try {
    rep.abelianization = abelianization(pr);
  } catch (const PrecisionError& e) {
    rep.abelianization = std::nullopt;
    rep.abelianization_note = e.what();
  }

  try {
    rep.ggs = ggs_search(pr, opts.ggs);
  } catch (const PrecisionError& e) {
    rep.ggs.certificate = std::nullopt;
    rep.ggs.note = e.what();
  }
  rep.free_subgroup = free_subgroup_verdict(pr, rep.ggs);
  return rep;
}

namespace {

using nlohmann::json;

json tri_state(const std::optional<bool>& v, const std::string& note) {
  json out;
  out["verdict"] = v.has_value() ? json(*v) : json("unknown");
  if (!note.empty()) out["note"] = note;
  return out;
}

json certificate_json(const GgsCertificate& c) {
  json out;
  json weights = json::array();
  for (const auto& w : c.weights.w) weights.push_back(w ? json(rat_string(*w)) : json(nullptr));
  out["weights"] = std::move(weights);
  out["t0"] = rat_string(c.t0);
  out["value"] = rat_string(c.value);
  json vals = json::array();
  for (const auto& v : c.relator_valuations) vals.push_back(v ? json(rat_string(*v)) : json(nullptr));
  out["relator_valuations"] = std::move(vals);
  out["strategy"] = c.strategy;
  return out;
}

std::string dims_string(const std::vector<long long>& v) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
  out << "]";
  return out.str();
}

} // namespace

std::string report_json(const AnalysisReport& r) {
  json out;
  out["schema"] = "praag-report/1";
  out["input"] = serialize_pgraph(r.input);
  out["p"] = r.input.p;
  out["precision"] = r.input.precision;
  out["d"] = r.d;
  out["r"] = r.r;
  out["triangle_free"] = r.triangle_free;
  out["chordal"] = r.chordal;
  out["complete"] = r.complete;
  out["betti"] = {{"values", r.predicted.betti}, {"annotation", PredictedCohomology::annotation}};
  {
    json m;
    m["mild"] = r.mildness.mild;
    m["depth"] = r.mildness.depth;
    m["dims"] = r.mildness.dims;
    m["series"] = r.mildness.series;
    m["first_mismatch"] =
        r.mildness.first_mismatch ? json(*r.mildness.first_mismatch) : json(nullptr);
    out["mildness"] = std::move(m);
  }
  {
    json q;
    q["proven"] = r.quadraticity.proven;
    q["reason"] = r.quadraticity.reason ? json(to_string(*r.quadraticity.reason)) : json("unknown");
    q["diagnostics"] = r.quadraticity.diagnostics;
    out["quadraticity"] = std::move(q);
  }
  out["cyclotomic"] = tri_state(r.cyclotomic, r.cyclotomic_note);
  if (r.abelianization) {
    out["abelianization"] = {{"free_rank", r.abelianization->free_rank},
                             {"torsion", r.abelianization->torsion},
                             {"text", r.abelianization->to_string(r.input.p)}};
  } else {
    out["abelianization"] = {{"verdict", "unknown"}, {"note", r.abelianization_note}};
  }
  {
    json g;
    g["certificate"] = r.ggs.certificate ? certificate_json(*r.ggs.certificate) : json(nullptr);
    if (!r.ggs.note.empty()) g["note"] = r.ggs.note;
    out["ggs"] = std::move(g);
  }
  {
    json fs = json::array();
    for (const auto& v : r.free_subgroup)
      fs.push_back({{"tag", to_string(v.tag)}, {"justification", v.justification}});
    out["free_subgroup"] = std::move(fs);
  }
  return out.dump(2) + "\n";
}

std::string report_text(const AnalysisReport& r) {
  std::ostringstream out;
  out << "p-graph: " << r.d << " vertices, " << r.input.graph.edges.size() << " edges (p = "
      << r.input.p << ", precision " << r.input.precision << ")\n";
  out << "d = " << r.d << ", r = " << r.r << "\n";
  out << "flags: triangle-free " << (r.triangle_free ? "yes" : "no") << ", chordal "
      << (r.chordal ? "yes" : "no") << ", complete " << (r.complete ? "yes" : "no") << "\n";
  out << "predicted betti: " << dims_string(r.predicted.betti) << "\n";
  out << "  (" << PredictedCohomology::annotation << ")\n";
  if (r.mildness.mild) {
    out << "mildness: mild through degree " << r.mildness.depth << "\n";
  } else {
    out << "mildness: not mild, first mismatch at degree "
        << (r.mildness.first_mismatch ? std::to_string(*r.mildness.first_mismatch) : "?")
        << " (dims " << dims_string(r.mildness.dims) << " vs series "
        << dims_string(r.mildness.series) << ")\n";
  }
  out << "quadraticity: ";
  if (r.quadraticity.proven) {
    out << "proven (" << to_string(*r.quadraticity.reason) << ")\n";
  } else {
    out << "unknown\n";
    for (const auto& dnote : r.quadraticity.diagnostics) out << "  - " << dnote << "\n";
  }
  out << "cyclotomic: "
      << (r.cyclotomic ? (*r.cyclotomic ? "consistent" : "inconsistent") : "unknown");
  if (!r.cyclotomic_note.empty()) out << " (" << r.cyclotomic_note << ")";
  out << "\n";
  out << "abelianization: ";
  if (r.abelianization) {
    out << r.abelianization->to_string(r.input.p) << "\n";
  } else {
    out << "unknown (" << r.abelianization_note << ")\n";
  }
  out << "ggs: ";
  if (r.ggs.certificate) {
    out << "certificate (strategy " << r.ggs.certificate->strategy << ", T0 = "
        << rat_string(r.ggs.certificate->t0) << ", value = " << rat_string(r.ggs.certificate->value)
        << ")\n";
  } else {
    out << "none found";
    if (!r.ggs.note.empty()) out << " (" << r.ggs.note << ")";
    out << "\n";
  }
  for (const auto& v : r.free_subgroup)
    out << "free subgroup: " << to_string(v.tag) << ": " << v.justification << "\n";
  return out.str();
}

} // namespace praag
