// Command-line front end for building spinal groups from scenario files,
// evaluating words and running the verification suites.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "spinal/construction.hpp"
#include "spinal/error.hpp"
#include "spinal/scenario.hpp"
#include "spinal/verify.hpp"

using namespace spinal;
using nlohmann::json;

namespace {

struct Options {
  bool json_out = false;
  std::string scenario;
  std::string group;
  std::string word;
  std::string vertex;
  std::size_t depth = 3;
  std::size_t level = 1;
  std::string suite = "all";
};

// A catalog name, inline JSON, or a path to a JSON file.
json group_ref(const std::string& text) {
  if (!text.empty() && text.front() == '{') {
    try {
      return json::parse(text);
    } catch (const json::parse_error&) {
      throw InputError("malformed group reference");
    }
  }
  if (catalog_group(text)) return text;
  std::ifstream in(text);
  if (!in) throw InputError("unknown group '" + text + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error&) {
    throw InputError("malformed group reference in '" + text + "'");
  }
}

json perm_list(const std::vector<Permutation>& ps) {
  json a = json::array();
  for (const auto& p : ps) a.push_back(format_cycles(p));
  return a;
}

void labels(const Portrait& p, const Vertex& v, json& out) {
  if (!p.label) return;
  if (!p.label->is_identity()) out[v.to_string()] = format_cycles(*p.label);
  for (std::size_t x = 0; x < p.children.size(); ++x) labels(p.children[x], v.child(static_cast<Point>(x)), out);
}

json portrait_json(const Element& e, std::size_t depth) {
  json l = json::object();
  labels(e.portrait(depth), Vertex(), l);
  return l;
}

std::string show_vertex(const Vertex& v) { return v.is_root() ? "(root)" : v.to_string(); }

void print_labels(std::ostream& out, const json& l) {
  if (l.empty()) out << "  (trivial to this depth)\n";
  for (const auto& [v, p] : l.items()) out << "  " << (v.empty() ? "(root)" : v) << ": " << p.get<std::string>() << "\n";
}

json classification_json(const Classification& c) {
  json forms = json::array();
  for (const auto& f : c.forms)
    forms.push_back({{"vertex", f.vertex.to_string()},
                     {"component", format_cycles(f.component)},
                     {"remainder", format_fin(f.remainder)}});
  return {{"k", c.k}, {"forms", forms}, {"top", format_fin(c.top)}, {"all_finitary", c.all_finitary()}};
}

int emit(const Options& o, const json& j, const std::string& text, int code = 0) {
  if (o.json_out)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
  return code;
}

int cmd_tau(const Options& o) {
  const PermutationGroup g = resolve_plain_group(group_ref(o.group));
  const TauAction t = tau_action(g);
  json j{{"group_order", order_string(g.order())},
         {"degree", t.point_count},
         {"generators", perm_list(g.generators())},
         {"images", perm_list(t.images)}};
  std::ostringstream s;
  s << "degree " << t.point_count << "\n";
  for (std::size_t i = 0; i < t.images.size(); ++i)
    s << "  " << format_cycles(g.generators()[i]) << " -> " << format_cycles(t.images[i]) << "\n";
  return emit(o, j, s.str());
}

int cmd_check_rep(const Options& o) {
  const Scenario sc = load_scenario(o.scenario);
  const RepCheck rc = check_rep(sc.rep);
  json levels = json::array();
  std::ostringstream s;
  for (const auto& l : rc.levels) {
    levels.push_back({{"level", l.level},
                      {"image_order", order_string(l.image_order)},
                      {"target_order", order_string(l.target_order)}});
    s << "component " << l.level << ": image " << order_string(l.image_order) << " of "
      << order_string(l.target_order) << "\n";
  }
  s << "tail kernel order " << order_string(rc.tail_kernel_order) << "\n"
    << "subdirect " << (rc.subdirect ? "yes" : "no") << ", infinitary " << (rc.infinitary ? "yes" : "no") << "\n";
  if (!rc.ok()) s << "rejected: " << rc.violation << "\n";
  json j{{"levels", levels},
         {"tail_kernel_order", order_string(rc.tail_kernel_order)},
         {"subdirect", rc.subdirect},
         {"infinitary", rc.infinitary},
         {"ok", rc.ok()},
         {"violation", rc.violation}};
  return emit(o, j, s.str(), rc.ok() ? 0 : 1);
}

int cmd_build(const Options& o) {
  const Scenario sc = load_scenario(o.scenario);
  const GammaSpec spec = sc.build();
  json gens = json::array();
  std::ostringstream s;
  s << "digest " << spec_digest(spec) << "\n";
  s << "alphabet sizes";
  json alphabet = json::array();
  for (std::size_t n = 0; n < 4; ++n) {
    alphabet.push_back(spec.frame->degree(n));
    s << " " << spec.frame->degree(n);
  }
  s << " ...\n" << spec.generator_count() << " generators\n";
  for (std::size_t i = 0; i < spec.rooted_gens.size(); ++i) {
    const auto label = format_cycles(spec.rooted_gens[i].root_label());
    gens.push_back({{"name", "r" + std::to_string(i + 1)}, {"kind", "rooted"}, {"label", label}});
    s << "  r" << i + 1 << "  rooted " << label << "\n";
  }
  for (std::size_t i = 0; i < spec.spinal_gens.size(); ++i) {
    const auto g = format_cycles(spec.group().generators()[i]);
    gens.push_back({{"name", "sG" + std::to_string(i + 1)}, {"kind", "spinal"}, {"component", g}});
    s << "  sG" << i + 1 << " spinal " << g << "\n";
  }
  json j{{"digest", spec_digest(spec)}, {"spec", describe(spec)}, {"generators", gens}, {"alphabet", alphabet}};
  if (sc.h) {
    const ProperCheck pc = is_proper_delta(spec, *sc.h);
    const NuclearWindow w = nuclear_window(delta(spec, *sc.h), 0, 3);
    json orders = json::array();
    for (const auto& e : w.entries) orders.push_back(order_string(e.order));
    j["H"] = {{"order", order_string(sc.h->order())},
              {"proper", pc.proper},
              {"witness", pc.witness ? json(format_cycles(*pc.witness)) : json(nullptr)},
              {"nuclear_window", orders}};
    s << "H of order " << order_string(sc.h->order()) << ", Delta(H) " << (pc.proper ? "proper" : "not proper");
    if (pc.witness) s << ", witness " << format_cycles(*pc.witness);
    s << "\n";
  }
  return emit(o, j, s.str());
}

int cmd_portrait(const Options& o) {
  const GammaSpec spec = load_scenario(o.scenario).build();
  const Element w = parse_word(spec, o.word);
  const json l = portrait_json(w, o.depth);
  std::ostringstream s;
  s << "portrait of " << w.to_string() << " to depth " << o.depth << "\n";
  print_labels(s, l);
  return emit(o, {{"word", o.word}, {"depth", o.depth}, {"labels", l}}, s.str());
}

int cmd_act(const Options& o) {
  const GammaSpec spec = load_scenario(o.scenario).build();
  const Element w = parse_word(spec, o.word);
  const Vertex v = parse_vertex(o.vertex);
  const Vertex image = w.act(v);
  return emit(o, {{"word", o.word}, {"vertex", v.to_string()}, {"image", image.to_string()}},
              show_vertex(image) + "\n");
}

int cmd_section(const Options& o) {
  const GammaSpec spec = load_scenario(o.scenario).build();
  const Element w = parse_word(spec, o.word);
  const Vertex v = parse_vertex(o.vertex);
  const Element s = w.section(v);
  const json l = portrait_json(s, o.depth);
  std::ostringstream t;
  t << "section at " << show_vertex(v) << ": " << s.to_string() << "\n";
  print_labels(t, l);
  return emit(o, {{"word", o.word}, {"vertex", v.to_string()}, {"depth", o.depth}, {"section", s.to_string()}, {"labels", l}},
              t.str());
}

int cmd_classify(const Options& o) {
  const GammaSpec spec = load_scenario(o.scenario).build();
  const Element w = parse_word(spec, o.word);
  const Classification c = classify(w);
  std::ostringstream s;
  s << "k = " << c.k << "\n";
  for (const auto& f : c.forms)
    s << "  " << show_vertex(f.vertex) << ": s" << format_cycles(f.component) << " * " << format_fin(f.remainder) << "\n";
  s << "  top: " << format_fin(c.top) << "\n";
  json j = classification_json(c);
  j["word"] = o.word;
  return emit(o, j, s.str());
}

int cmd_member(const Options& o) {
  const Scenario sc = load_scenario(o.scenario);
  if (!sc.h) throw InputError("scenario has no \"H\"");
  const GammaSpec spec = sc.build();
  const Element w = parse_word(spec, o.word);
  const DeltaMembership r = member_delta(spec, *sc.h, w);
  const char* verdict = r.verdict == DeltaMembership::Verdict::yes  ? "yes"
                        : r.verdict == DeltaMembership::Verdict::no ? "no"
                                                                    : "unknown";
  json j{{"word", o.word}, {"verdict", verdict}, {"classification", classification_json(r.classification)}};
  std::ostringstream s;
  s << verdict << "\n";
  if (r.refutation) {
    j["refutation"] = {{"vertex", r.refutation->vertex.to_string()},
                       {"component", format_cycles(r.refutation->component)}};
    s << "  component " << format_cycles(r.refutation->component) << " at " << show_vertex(r.refutation->vertex)
      << " is not in H\n";
  }
  if (r.verdict == DeltaMembership::Verdict::yes) {
    json factors = json::array();
    for (const auto& f : r.witness)
      factors.push_back(f.spinal < 0 ? json(format_fin(f.fin))
                                     : json("sH" + std::to_string(f.spinal + 1)));
    j["witness"] = factors;
    s << "  witness of " << factors.size() << " factors\n";
  }
  if (!r.note.empty()) j["note"] = r.note;
  return emit(o, j, s.str());
}

int cmd_quotient(const Options& o) {
  const GammaSpec spec = load_scenario(o.scenario).build();
  const SuiteReport r = verify_fin_in_gamma(spec, o.level);
  const auto& cert = r.checks.back().certificate;
  json j{{"level", o.level},
         {"order", cert["order"]},
         {"wreath_order", cert["wreath_order"]},
         {"full", r.passed()}};
  return emit(o, j, cert["order"].get<std::string>() + "\n");
}

int cmd_max(const Options& o) {
  const PermutationGroup g = resolve_plain_group(group_ref(o.group));
  const auto maxes = non_normal_maximal(g);
  json list = json::array();
  std::ostringstream s;
  s << maxes.size() << " non-normal maximal subgroups\n";
  for (const auto& m : maxes) {
    list.push_back({{"order", order_string(m.order())}, {"generators", perm_list(m.generators())}});
    s << "  order " << order_string(m.order()) << ": " << perm_list(m.generators()).dump() << "\n";
  }
  return emit(o, {{"group_order", order_string(g.order())}, {"count", maxes.size()}, {"subgroups", list}}, s.str());
}

int cmd_verify(const Options& o, bool depth_given) {
  const GammaSpec spec = load_scenario(o.scenario).build();
  Depths d;
  if (depth_given) d.portrait = o.depth;
  d.layered = std::min(d.layered, d.portrait == 0 ? 0 : d.portrait - 1);
  std::vector<SuiteReport> reports;
  if (o.suite == "all")
    reports = run_all(spec, d);
  else
    reports.push_back(run_suite(spec, o.suite, d));
  json arr = json::array();
  std::string text;
  bool ok = true;
  for (const auto& r : reports) {
    arr.push_back(r.to_json());
    text += r.to_text();
    ok = ok && r.passed();
  }
  return emit(o, {{"passed", ok}, {"reports", arr}}, text, ok ? 0 : 1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spinal groups on rooted trees: construction, evaluation and verification"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--json", o.json_out, "Machine-readable output");

  auto scenario_cmd = [&](const char* name, const char* help) {
    auto* c = app.add_subcommand(name, help);
    c->add_option("scenario", o.scenario, "Scenario file")->required();
    c->add_flag("--json", o.json_out, "Machine-readable output");
    return c;
  };

  auto* tau = app.add_subcommand("tau", "Find a faithful transitive non-regular action");
  tau->add_option("group", o.group, "Catalog name, inline JSON or JSON file")->required();
  tau->add_flag("--json", o.json_out, "Machine-readable output");

  auto* check = scenario_cmd("check-rep", "Check the residual representation");
  auto* build = scenario_cmd("build", "Build the group and list its generators");

  auto* portrait = scenario_cmd("portrait", "Portrait of a word");
  portrait->add_option("word", o.word, "Word such as \"r1 sG2^-1\"")->required();
  portrait->add_option("--depth", o.depth, "Portrait depth");

  auto* act = scenario_cmd("act", "Image of a vertex");
  act->add_option("word", o.word, "Word")->required();
  act->add_option("vertex", o.vertex, "Vertex such as 1.0")->required();

  auto* section = scenario_cmd("section", "Section of a word at a vertex");
  section->add_option("word", o.word, "Word")->required();
  section->add_option("vertex", o.vertex, "Vertex such as 1.0")->required();
  section->add_option("--depth", o.depth, "Portrait depth");

  auto* cls = scenario_cmd("classify", "Contract a word to spinal and finitary sections");
  cls->add_option("word", o.word, "Word")->required();

  auto* member = scenario_cmd("member", "Decide membership in Delta(H) for the scenario's H");
  member->add_option("word", o.word, "Word")->required();

  auto* quotient = scenario_cmd("quotient", "Order of the group modulo a layer stabilizer");
  quotient->add_option("--level", o.level, "Layer")->check(CLI::Range(1, 3));

  auto* max = app.add_subcommand("max", "Non-normal maximal subgroups of a group");
  max->add_option("group", o.group, "Catalog name, inline JSON or JSON file")->required();
  max->add_flag("--json", o.json_out, "Machine-readable output");

  auto* verify = scenario_cmd("verify", "Run verification suites");
  verify->add_option("--suite", o.suite, "Suite name or all");
  auto* verify_depth = verify->add_option("--depth", o.depth, "Portrait depth for the suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*tau) return cmd_tau(o);
    if (*check) return cmd_check_rep(o);
    if (*build) return cmd_build(o);
    if (*portrait) return cmd_portrait(o);
    if (*act) return cmd_act(o);
    if (*section) return cmd_section(o);
    if (*cls) return cmd_classify(o);
    if (*member) return cmd_member(o);
    if (*quotient) return cmd_quotient(o);
    if (*max) return cmd_max(o);
    if (*verify) return cmd_verify(o, verify_depth->count() > 0);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
