#include "spinal/scenario.hpp"

#include <fstream>
#include <sstream>

#include "spinal/error.hpp"

namespace spinal {

using nlohmann::json;

namespace {

const json& field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key))
    throw InputError(std::string("scenario is missing \"") + key + "\"");
  return doc.at(key);
}

std::vector<Permutation> cycle_list(const json& a, std::size_t degree, const std::string& what) {
  if (!a.is_array()) throw InputError(what + " must be a list of cycle strings");
  std::vector<Permutation> out;
  for (const auto& s : a) {
    if (!s.is_string()) throw InputError(what + " must be a list of cycle strings");
    out.push_back(parse_cycles(s.get<std::string>(), degree));
  }
  return out;
}

std::vector<Point> points(const json& a, const std::string& what) {
  if (!a.is_array()) throw InputError(what + " must be a list");
  std::vector<Point> out;
  for (const auto& x : a) {
    if (!x.is_number_unsigned()) throw InputError(what + " entries must be non-negative integers");
    out.push_back(x.get<Point>());
  }
  return out;
}

// An integer (constant), a list (pure period) or {"prefix", "period"}.
EventuallyPeriodic<Point> point_sequence(const json& s, const std::string& what) {
  if (s.is_number_unsigned()) return EventuallyPeriodic<Point>::constant(s.get<Point>());
  if (s.is_array()) {
    if (s.empty()) throw InputError(what + " needs a non-empty period");
    return EventuallyPeriodic<Point>({}, points(s, what));
  }
  if (s.is_object()) {
    auto pre = s.contains("prefix") ? points(s.at("prefix"), what) : std::vector<Point>{};
    auto per = points(field(s, "period"), what);
    if (per.empty()) throw InputError(what + " needs a non-empty period");
    return EventuallyPeriodic<Point>(std::move(pre), std::move(per));
  }
  throw InputError(what + " must be an integer, a list or {\"prefix\", \"period\"}");
}

std::string ref_name(const json& ref) {
  if (ref.is_string()) return ref.get<std::string>();
  if (ref.is_object() && ref.contains("name") && ref.at("name").is_string())
    return ref.at("name").get<std::string>();
  return ref.dump();
}

}  // namespace

PermutationGroup resolve_plain_group(const json& ref) {
  if (ref.is_string()) {
    auto g = catalog_group(ref.get<std::string>());
    if (!g) throw InputError("unknown catalog group '" + ref.get<std::string>() + "'");
    return *g;
  }
  if (!ref.is_object() || !ref.contains("degree") || !ref.contains("generators"))
    throw InputError("group reference must be a catalog name or {\"degree\", \"generators\"}");
  if (!ref.at("degree").is_number_unsigned() || ref.at("degree").get<std::size_t>() == 0)
    throw InputError("group degree must be a positive integer");
  const auto degree = ref.at("degree").get<std::size_t>();
  auto gens = cycle_list(ref.at("generators"), degree, "group generators");
  if (gens.empty()) gens.push_back(Permutation::identity(degree));
  return PermutationGroup(std::move(gens), degree);
}

LevelGroupPtr resolve_group(const json& ref) {
  if (ref.is_string()) return catalog_level_group(ref.get<std::string>());
  return make_level_group(ref_name(ref), resolve_plain_group(ref));
}

Scenario parse_scenario(const json& doc) {
  if (!doc.is_object() || doc.empty()) throw InputError("scenario must be a non-empty object");
  Scenario sc;
  sc.document = doc;
  sc.s0 = resolve_group(field(doc, "S0"));
  sc.g = resolve_group(field(doc, "G"));
  const PermutationGroup& g = sc.g->group;

  const json& comps = field(doc, "components");
  if (comps.is_string()) {
    if (comps.get<std::string>() != "diagonal")
      throw InputError("components must be \"diagonal\" or a homomorphism sequence");
    sc.rep = make_diagonal_rep(sc.g);
  } else {
    auto hom = [&](const json& c) {
      if (!c.is_object()) throw InputError("each component needs \"target\" and \"images\"");
      auto target = resolve_group(field(c, "target"));
      return make_component(g, target,
                            cycle_list(field(c, "images"), target->group.degree(), "component images"));
    };
    std::vector<ComponentPtr> pre, per;
    if (comps.is_array()) {
      for (const auto& c : comps) per.push_back(hom(c));
    } else if (comps.is_object()) {
      if (comps.contains("prefix")) {
        if (!comps.at("prefix").is_array()) throw InputError("components prefix must be a list");
        for (const auto& c : comps.at("prefix")) pre.push_back(hom(c));
      }
      const json& p = field(comps, "period");
      if (!p.is_array()) throw InputError("components period must be a list");
      for (const auto& c : p) per.push_back(hom(c));
    } else {
      throw InputError("components must be \"diagonal\" or a homomorphism sequence");
    }
    if (per.empty()) throw InputError("components need a non-empty period");
    sc.rep = ResidualRep{g, EventuallyPeriodic<ComponentPtr>(std::move(pre), std::move(per))};
  }

  sc.ray = point_sequence(field(doc, "ray"), "ray");
  sc.spinal = point_sequence(field(doc, "spinal"), "spinal");
  if (doc.contains("H")) {
    const json& h = doc.at("H");
    const json& gens = h.is_object() ? field(h, "generators") : h;
    auto list = cycle_list(gens, g.degree(), "H generators");
    if (list.empty()) list.push_back(Permutation::identity(g.degree()));
    sc.h = PermutationGroup(std::move(list), g.degree());
    if (!is_subgroup(*sc.h, g)) throw InputError("H is not a subgroup of G");
  }
  return sc;
}

Scenario parse_scenario_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("scenario is not valid JSON: ") + e.what());
  }
  return parse_scenario(doc);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read scenario '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario_text(text.str());
}

GammaSpec Scenario::build() const { return build_gamma(rep, ray, spinal, s0); }

}  // namespace spinal
