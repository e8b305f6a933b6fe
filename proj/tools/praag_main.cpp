#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "praag/assembler.hpp"
#include "praag/lie.hpp"
#include "praag/report.hpp"

namespace {

using nlohmann::json;
using namespace praag;

PGraph load_pgraph(const std::string& path, std::optional<std::uint64_t> p_override,
                   std::optional<unsigned> k_override) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (p_override || k_override) {
    std::istringstream lines(text);
    std::string line, rebuilt;
    bool injected = false;
    while (std::getline(lines, line)) {
      std::istringstream ls(line);
      std::string head;
      ls >> head;
      if ((p_override && head == "p") || (k_override && head == "precision")) continue;
      rebuilt += line + "\n";
      if (!injected && head == "pgraph") {
        if (p_override) rebuilt += "p " + std::to_string(*p_override) + "\n";
        if (k_override) rebuilt += "precision " + std::to_string(*k_override) + "\n";
        injected = true;
      }
    }
    text = rebuilt;
  }
  return parse_pgraph_string(text);
}

json condition_json(const ConditionCheck& c) {
  return {{"holds", c.holds}, {"witness", c.witness}};
}

void print_condition(std::ostream& out, const char* name, const ConditionCheck& c) {
  out << name << ": " << (c.holds ? "holds" : "fails") << " (" << c.witness << ")\n";
}

std::string dims_string(const std::vector<long long>& v) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
  out << "]";
  return out.str();
}

int run_analyze(const std::string& file, bool as_json, std::optional<std::uint64_t> p,
                std::optional<unsigned> k) {
  const PGraph g = load_pgraph(file, p, k);
  const AnalysisReport rep = analyze(g);
  std::cout << (as_json ? report_json(rep) : report_text(rep));
  return 0;
}

int run_classify(std::uint64_t p, unsigned k, const std::vector<long long>& labels, bool as_json) {
  if (labels.size() != 6)
    throw ValidationError("classify-triangle: --labels needs a1,a2,b2,b3,g1,g3");
  const TriangleLabels t = TriangleLabels::from_ints(p, k, labels[0], labels[1], labels[2],
                                                     labels[3], labels[4], labels[5]);
  const auto tag = classify_triangle(t);
  std::optional<bool> metabelian;
  if (tag) metabelian = is_metabelian(triangle_lattice(t));

  static const char* names[] = {"L1", "L2", "L3", "L4", "Lstar"};
  if (as_json) {
    json out;
    out["schema"] = "praag-report/1";
    if (tag) {
      out["family"] = names[static_cast<int>(tag->family)];
      out["normal_form"] = tag->to_string();
      out["metabelian"] = *metabelian;
    } else {
      out["family"] = nullptr;
      out["note"] = "labels do not define a Lie lattice (consistency system fails)";
    }
    std::cout << out.dump(2) << "\n";
  } else if (tag) {
    std::cout << "family: " << names[static_cast<int>(tag->family)] << "\n"
              << "normal form: " << tag->to_string() << "\n"
              << "metabelian: " << (*metabelian ? "yes" : "no") << "\n";
  } else {
    std::cout << "labels do not define a Lie lattice (consistency system fails)\n";
  }
  return 0;
}

int run_amalgam(const std::string& file, bool assume_proper, std::size_t degree, bool as_json) {
  const AmalgamFixture fx = load_amalgam_fixture(file);
  if (degree == 0)
    degree = fx.d1.ambient.generators.size() + fx.d2.ambient.generators.size() -
             fx.d1.sub.generators.size();
  const AmalgamReport rep = amalgam_report(fx.d1, fx.d2, degree, assume_proper);
  if (rep.condition_i.holds && rep.condition_ii.holds && rep.properness == Properness::Unknown)
    throw ValidationError(
        "properness of the amalgam is not recognizable from the data; pass --assume-proper to "
        "acknowledge it as an assumption");
  if (as_json) {
    json out;
    out["schema"] = "praag-report/1";
    out["condition_i"] = condition_json(rep.condition_i);
    out["condition_ii"] = condition_json(rep.condition_ii);
    out["properness"] = to_string(rep.properness);
    if (rep.assembled) {
      out["generators"] = rep.assembled->generators;
      out["dims"] = rep.dims;
      out["mayer_vietoris"] = rep.mayer_vietoris;
    } else {
      out["generators"] = nullptr;
      out["note"] = "hypotheses not satisfied: the decomposition theorem gives no conclusion";
    }
    std::cout << out.dump(2) << "\n";
  } else {
    print_condition(std::cout, "condition (i)", rep.condition_i);
    print_condition(std::cout, "condition (ii)", rep.condition_ii);
    std::cout << "properness: " << to_string(rep.properness) << "\n";
    if (rep.assembled) {
      std::cout << "assembled dims: " << dims_string(rep.dims) << "\n"
                << "mayer-vietoris: " << dims_string(rep.mayer_vietoris) << "\n";
    } else {
      std::cout << "hypotheses not satisfied: no conclusion\n";
    }
  }
  return 0;
}

int run_hnn(const std::string& file, bool assume_proper, std::size_t degree, bool as_json) {
  const HnnFixture fx = load_hnn_fixture(file);
  if (degree == 0) degree = fx.d.ambient.generators.size() + 1;
  const HnnReport rep = hnn_report(fx.d, fx.phi, degree, assume_proper);
  if (rep.conditions.all() && rep.properness == Properness::Unknown)
    throw ValidationError(
        "properness of the HNN extension cannot be checked from the data; pass --assume-proper "
        "to acknowledge it as an assumption");
  if (as_json) {
    json out;
    out["schema"] = "praag-report/1";
    out["condition_i"] = condition_json(rep.conditions.condition_i);
    out["condition_ii"] = condition_json(rep.conditions.condition_ii);
    out["condition_iii"] = condition_json(rep.conditions.condition_iii);
    out["properness"] = to_string(rep.properness);
    if (rep.conditions.all()) {
      out["dims"] = rep.dims;
      out["alpha_t"] = rep.alpha_t;
    } else {
      out["note"] = "hypotheses not satisfied: the decomposition theorem gives no conclusion";
    }
    std::cout << out.dump(2) << "\n";
  } else {
    print_condition(std::cout, "condition (i)", rep.conditions.condition_i);
    print_condition(std::cout, "condition (ii)", rep.conditions.condition_ii);
    print_condition(std::cout, "condition (iii)", rep.conditions.condition_iii);
    std::cout << "properness: " << to_string(rep.properness) << "\n";
    if (rep.conditions.all()) {
      std::cout << "dims: " << dims_string(rep.dims) << " (degree-1 class " << rep.alpha_t
                << ")\n";
    } else {
      std::cout << "hypotheses not satisfied: no conclusion\n";
    }
  }
  return 0;
}

int run_ggs(const std::string& file, unsigned max_weight, std::uint64_t grid, bool as_json) {
  const PGraph g = load_pgraph(file, std::nullopt, std::nullopt);
  const Presentation pr = praag_presentation(g);
  GgsBounds bounds;
  bounds.max_weight = max_weight;
  bounds.grid = grid;
  const GgsSearchOutcome out = ggs_search(pr, bounds);
  const auto verdicts = free_subgroup_verdict(pr, out);
  if (as_json) {
    json j;
    j["schema"] = "praag-report/1";
    if (out.certificate) {
      json weights = json::array();
      for (const auto& w : out.certificate->weights.w)
        weights.push_back(w ? json(rat_string(*w)) : json(nullptr));
      j["certificate"] = {{"weights", std::move(weights)},
                          {"t0", rat_string(out.certificate->t0)},
                          {"value", rat_string(out.certificate->value)},
                          {"strategy", out.certificate->strategy}};
    } else {
      j["certificate"] = nullptr;
    }
    if (!out.note.empty()) j["note"] = out.note;
    json fs = json::array();
    for (const auto& v : verdicts)
      fs.push_back({{"tag", to_string(v.tag)}, {"justification", v.justification}});
    j["free_subgroup"] = std::move(fs);
    std::cout << j.dump(2) << "\n";
  } else {
    if (out.certificate) {
      std::cout << "certificate: strategy " << out.certificate->strategy << ", T0 = "
                << rat_string(out.certificate->t0) << ", value = "
                << rat_string(out.certificate->value) << "\n";
    } else {
      std::cout << "no certificate found";
      if (!out.note.empty()) std::cout << " (" << out.note << ")";
      std::cout << "\n";
    }
    for (const auto& v : verdicts)
      std::cout << "free subgroup: " << to_string(v.tag) << ": " << v.justification << "\n";
  }
  return 0;
}

int run_lazard(const std::string& file, std::optional<unsigned> k, bool as_json) {
  const PGraph g = load_pgraph(file, std::nullopt, k);
  if (!is_complete(g.graph))
    throw ValidationError("lazard-verify: verification needs a complete p-graph");
  auto lat = complete_graph_lattice(g);
  if (const auto* fail = std::get_if<TripleFailure>(&lat)) {
    throw ValidationError("lazard-verify: consistency system fails at triple (" +
                          g.graph.vertices[fail->triple[0]] + ", " +
                          g.graph.vertices[fail->triple[1]] + ", " +
                          g.graph.vertices[fail->triple[2]] + ")");
  }
  const auto& L = std::get<PowerfulLieLattice>(lat);

  json edges = json::array();
  bool all_agree = true;
  for (std::size_t e = 0; e < g.graph.edges.size(); ++e) {
    const auto [i, j] = g.graph.edges[e];
    const EdgeRelation er = solve_edge_relation(L, i, j);
    const auto& [f1, f2] = g.labels[e];

    // The solved exponents must reproduce the labels mod p^{1+v}, v the least
    // label valuation on the edge (full precision when both labels vanish).
    unsigned agree_k = g.precision;
    for (const auto* f : {&f1, &f2})
      if (!f->is_exact_zero())
        agree_k = std::min(agree_k, std::min(g.precision, 1 + f->known_valuation("lazard-verify")));
    std::uint64_t mod = 1;
    for (unsigned t = 0; t < agree_k; ++t) mod *= g.p;
    const bool agree =
        (er.a.residue() % mod) == (f1.residue() % mod) && (er.b.residue() % mod) == (f2.residue() % mod);
    all_agree = all_agree && agree;

    if (as_json) {
      edges.push_back({{"edge", {g.graph.vertices[i], g.graph.vertices[j]}},
                       {"a", er.a.to_string()},
                       {"b", er.b.to_string()},
                       {"label_f1", f1.to_string()},
                       {"label_f2", f2.to_string()},
                       {"agree_mod_exponent", agree_k},
                       {"agree", agree}});
    } else {
      std::cout << "edge (" << g.graph.vertices[i] << ", " << g.graph.vertices[j]
                << "): a = " << er.a.to_string() << ", b = " << er.b.to_string()
                << "; labels (" << f1.to_string() << ", " << f2.to_string() << "); agree mod "
                << g.p << "^" << agree_k << ": " << (agree ? "yes" : "NO") << "\n";
    }
  }
  if (as_json) {
    json out;
    out["schema"] = "praag-report/1";
    out["edges"] = std::move(edges);
    out["all_agree"] = all_agree;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << (all_agree ? "all edge relations verified\n" : "edge relation mismatch\n");
  }
  return all_agree ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact-arithmetic analyzer for generalised right-angled Artin pro-p groups"};
  app.require_subcommand(1);

  std::string file;
  bool as_json = false, assume_proper = false;
  std::optional<std::uint64_t> p_override;
  std::optional<unsigned> k_override;
  std::uint64_t cls_p = 5;
  unsigned cls_k = 4;
  std::string labels_csv;
  std::size_t degree = 0;
  unsigned max_weight = 12;
  std::uint64_t grid = 1000;

  auto* analyze_cmd = app.add_subcommand("analyze", "run the full p-graph pipeline");
  analyze_cmd->add_option("file", file, "p-graph file")->required();
  analyze_cmd->add_flag("--json", as_json, "emit canonical JSON");
  analyze_cmd->add_option("--p", p_override, "override the prime");
  analyze_cmd->add_option("--precision", k_override, "override the working precision");

  auto* classify_cmd = app.add_subcommand("classify-triangle", "triangle Lie lattice family");
  classify_cmd->add_option("--p", cls_p, "prime")->capture_default_str();
  classify_cmd->add_option("--precision", cls_k, "working precision")->capture_default_str();
  classify_cmd
      ->add_option("--labels", labels_csv,
                   "a1,a2,b2,b3,g1,g3 for [x1,x2]=a1 x1+a2 x2, [x2,x3]=b2 x2+b3 x3, "
                   "[x3,x1]=g3 x3+g1 x1")
      ->required();
  classify_cmd->add_flag("--json", as_json, "emit canonical JSON");

  auto* amalgam_cmd = app.add_subcommand("amalgam", "check and assemble an amalgam fixture");
  amalgam_cmd->add_option("file", file, "fixture JSON")->required();
  amalgam_cmd->add_flag("--assume-proper", assume_proper, "acknowledge properness as an assumption");
  amalgam_cmd->add_option("--degree", degree, "report dims through this degree");
  amalgam_cmd->add_flag("--json", as_json, "emit canonical JSON");

  auto* hnn_cmd = app.add_subcommand("hnn", "check and assemble an HNN fixture");
  hnn_cmd->add_option("file", file, "fixture JSON")->required();
  hnn_cmd->add_flag("--assume-proper", assume_proper, "acknowledge properness as an assumption");
  hnn_cmd->add_option("--degree", degree, "report dims through this degree");
  hnn_cmd->add_flag("--json", as_json, "emit canonical JSON");

  auto* ggs_cmd = app.add_subcommand("ggs", "Golod-Shafarevich certificate search");
  ggs_cmd->add_option("file", file, "p-graph file")->required();
  ggs_cmd->add_option("--max-weight", max_weight, "weight bound W")->capture_default_str();
  ggs_cmd->add_option("--grid", grid, "evaluation grid for the pre-screen")->capture_default_str();
  ggs_cmd->add_flag("--json", as_json, "emit canonical JSON");

  auto* lazard_cmd = app.add_subcommand("lazard-verify", "verify edge relations via exp/log");
  lazard_cmd->add_option("file", file, "p-graph file (complete graph)")->required();
  lazard_cmd->add_option("--precision", k_override, "override the working precision");
  lazard_cmd->add_flag("--json", as_json, "emit canonical JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    // A bad or missing subcommand is a usage error; bad flags on a valid
    // subcommand are treated as malformed input.
    app.exit(e);
    return app.get_subcommands().empty() ? 64 : 2;
  }

  try {
    if (analyze_cmd->parsed()) return run_analyze(file, as_json, p_override, k_override);
    if (classify_cmd->parsed()) {
      std::vector<long long> labels;
      std::istringstream ls(labels_csv);
      std::string tok;
      while (std::getline(ls, tok, ',')) {
        try {
          labels.push_back(std::stoll(tok));
        } catch (const std::exception&) {
          throw ValidationError("classify-triangle: bad label \"" + tok + "\"");
        }
      }
      return run_classify(cls_p, cls_k, labels, as_json);
    }
    if (amalgam_cmd->parsed()) return run_amalgam(file, assume_proper, degree, as_json);
    if (hnn_cmd->parsed()) return run_hnn(file, assume_proper, degree, as_json);
    if (ggs_cmd->parsed()) return run_ggs(file, max_weight, grid, as_json);
    if (lazard_cmd->parsed()) return run_lazard(file, k_override, as_json);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const PrecisionError& e) {
    std::cerr << "precision: " << e.what() << "\n";
    return 3;
  } catch (const ResourceError& e) {
    std::cerr << "resources: " << e.what() << "\n";
    return 3;
  }
  return 64;
}
