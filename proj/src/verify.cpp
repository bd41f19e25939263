#include "spinal/verify.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "spinal/error.hpp"

namespace spinal {

using nlohmann::json;

namespace {

json perm_json(const Permutation& p) { return format_cycles(p); }

json perms_json(const std::vector<Permutation>& ps) {
  json a = json::array();
  for (const auto& p : ps) a.push_back(perm_json(p));
  return a;
}

json group_json(const PermutationGroup& g) {
  return {{"degree", g.degree()}, {"generators", perms_json(g.generators())}, {"order", order_string(g.order())}};
}

template <class T, class F>
json seq_json(const EventuallyPeriodic<T>& s, F f) {
  json pre = json::array(), per = json::array();
  for (const auto& x : s.prefix()) pre.push_back(f(x));
  for (const auto& x : s.period()) per.push_back(f(x));
  return {{"prefix", pre}, {"period", per}};
}

std::string fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SuiteReport start(const GammaSpec& spec, std::string name, json params) {
  SuiteReport r;
  r.suite = std::move(name);
  r.digest = spec_digest(spec);
  r.params = std::move(params);
  return r;
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

void SuiteReport::add(std::string description, bool ok, json certificate) {
  checks.push_back({std::move(description), ok, std::move(certificate)});
}

json SuiteReport::to_json() const {
  json cs = json::array();
  for (const auto& c : checks)
    cs.push_back({{"description", c.description}, {"passed", c.passed}, {"certificate", c.certificate}});
  return {{"suite", suite}, {"digest", digest}, {"params", params}, {"passed", passed()}, {"checks", cs}};
}

std::string SuiteReport::to_text() const {
  std::ostringstream out;
  const auto ok = std::count_if(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  out << suite << ": " << (passed() ? "PASS" : "FAIL") << " (" << ok << "/" << checks.size() << ")\n";
  for (const auto& c : checks) {
    out << "  " << (c.passed ? "ok   " : "FAIL ") << c.description << "\n";
    if (!c.passed) out << "       " << c.certificate.dump() << "\n";
  }
  return out.str();
}

json describe(const GammaSpec& spec) {
  auto comp = [](const ComponentPtr& c) {
    return json{{"target", c->target->name}, {"images", perms_json(c->pi.generator_images())}};
  };
  auto point = [](Point p) { return p; };
  return {{"S0", {{"name", spec.s0->name},
                  {"generators", perms_json(spec.s0->group.generators())},
                  {"points", spec.s0->tau.point_count}}},
          {"G", group_json(spec.group())},
          {"components", seq_json(spec.rep.components, comp)},
          {"ray", seq_json(spec.ray, point)},
          {"spinal", seq_json(spec.spinal, point)}};
}

std::string spec_digest(const GammaSpec& spec) { return fnv1a(describe(spec).dump()); }

Permutation layer_action(const Element& e, std::size_t n) {
  const auto verts = layer_vertices(e.frame()->valency(), n, e.level());
  std::map<Vertex, Point> index;
  for (std::size_t i = 0; i < verts.size(); ++i) index.emplace(verts[i], static_cast<Point>(i));
  std::vector<Point> im;
  im.reserve(verts.size());
  for (const auto& v : verts) im.push_back(index.at(e.act(v)));
  return Permutation(std::move(im));
}

PermutationGroup layer_quotient(const std::vector<Element>& gens, std::size_t n) {
  if (gens.empty()) throw Error("no generators");
  std::vector<Permutation> p;
  for (const auto& g : gens) p.push_back(layer_action(g, n));
  return bsgs(p, p.front().degree());
}

std::vector<Element> gamma_generators(const GammaSpec& spec) {
  std::vector<Element> out = spec.rooted_gens;
  out.insert(out.end(), spec.spinal_gens.begin(), spec.spinal_gens.end());
  return out;
}

json fin_json(const Fin& f) {
  if (!f) return nullptr;
  json children = json::array();
  for (const auto& c : f->children) children.push_back(fin_json(c));
  return {{"label", perm_json(f->label)}, {"children", children}};
}

SuiteReport verify_spherical(const GammaSpec& spec, std::size_t d) {
  SuiteReport r = start(spec, "spherical", {{"depth", d}});
  const auto gens = gamma_generators(spec);
  for (std::size_t n = 1; n <= d; ++n) {
    Vertex root;
    for (std::size_t i = 0; i < n; ++i) root = root.child(0);
    std::set<Vertex> seen{root};
    std::vector<Vertex> queue{root};
    for (std::size_t i = 0; i < queue.size(); ++i)
      for (const auto& g : gens)
        for (const auto& y : {g.act(queue[i]), g.inverse().act(queue[i])})
          if (seen.insert(y).second) queue.push_back(y);
    const Order layer = layer_size(spec.frame->valency(), n);
    const bool ok = Order(seen.size()) == layer;
    json cert{{"level", n}, {"orbit_size", seen.size()}, {"layer_size", order_string(layer)},
              {"start", root.to_string()}};
    if (!ok) {
      json orbit = json::array();
      for (const auto& v : seen) orbit.push_back(v.to_string());
      cert["orbit"] = orbit;
    }
    r.add("layer " + std::to_string(n) + " is a single orbit", ok, cert);
  }
  return r;
}

SuiteReport verify_rist_witness(const GammaSpec& spec, std::size_t d,
                                std::optional<std::vector<Permutation>> conjugators) {
  SuiteReport r = start(spec, "rist_witness", {{"depth", d}});
  const auto& frame = spec.frame;
  const Point u1 = frame->ray_step(0), x1 = frame->spinal_step(0);
  const PermutationGroup& s0 = spec.label_group(0);
  auto admissible = [&](const Permutation& s) {
    return s.degree() == s0.degree() && s0.contains(s) && s[x1] == x1 && s[u1] != u1;
  };
  std::vector<Permutation> ss;
  if (conjugators) {
    for (const auto& s : *conjugators) {
      if (admissible(s))
        ss.push_back(s);
      else
        r.add("precondition: s fixes x1 and moves u1", false,
              {{"s", perm_json(s)}, {"x1", x1}, {"u1", u1}});
    }
  } else {
    for (const auto& s : s0.elements())
      if (admissible(s)) ss.push_back(s);
    r.add("admissible conjugators exist", !ss.empty(), {{"count", ss.size()}});
  }

  const auto& gens = spec.group().generators();
  const Vertex xv({x1});
  for (const auto& g : gens)
    for (const auto& h : gens)
      for (const auto& s : ss) {
        const Element sr = Element::rooted(frame, 0, s);
        const Element lhs =
            spec.spinal_element(g).commutator(spec.spinal_element(h).conjugate(sr));
        const Permutation label = frame->spinal_label(0, commutator(g, h));
        const Element rhs = insert(xv, Element::rooted(frame, 1, label));
        const bool to_depth = lhs.equal_to_depth(rhs, d);
        const bool exact = lhs == rhs;
        const bool root = lhs.root_label().is_identity();
        bool others = true;
        for (Point y = 0; y < frame->degree(0); ++y)
          if (y != x1) others = others && lhs.section(y).is_identity();
        const bool at_u1 = lhs.section(u1).is_identity();
        r.add("[s_g, s_h^s] = ins_x1([g, h]) for g=" + format_cycles(g) + " h=" + format_cycles(h) +
                  " s=" + format_cycles(s),
              to_depth && exact && root && others && at_u1,
              {{"g", perm_json(g)},
               {"h", perm_json(h)},
               {"s", perm_json(s)},
               {"label", perm_json(label)},
               {"equal_to_depth", to_depth},
               {"exact", exact},
               {"trivial_root", root},
               {"trivial_at_u1", at_u1},
               {"trivial_off_x1", others}});
      }
  return r;
}

SuiteReport verify_layered_witness(const GammaSpec& spec, std::size_t n_max, std::size_t d) {
  if (n_max + 1 > d) throw Error("layered witness needs n_max <= depth - 1");
  SuiteReport r = start(spec, "layered_witness", {{"n_max", n_max}, {"depth", d}});
  for (std::size_t i = 0; i < spec.spinal_gens.size(); ++i) {
    const Element& h = spec.spinal_gens[i];
    for (std::size_t n = 0; n <= n_max; ++n) {
      const Vertex un = ray_vertex(spec.ray, n);
      const Element e = insert(un, h.section(un).inverse()) * h;
      const Classification c = classify(e);
      const auto fin = e.as_finitary();
      const bool ok = c.all_finitary() && c.finitary_depth() <= n + 1 && fin &&
                      fin_depth(*fin) == c.finitary_depth() &&
                      e.equal_to_depth(Element::finitary(spec.frame, 0, *fin), d);
      r.add("ins_u" + std::to_string(n) + "(h|^-1) h is finitary for h=s_" +
                format_cycles(spec.group().generators()[i]),
            ok,
            {{"generator", perm_json(spec.group().generators()[i])},
             {"n", n},
             {"k", c.k},
             {"depth", c.finitary_depth()},
             {"finitary", fin ? fin_json(*fin) : json("not finitary")}});
    }
  }
  return r;
}

SuiteReport verify_fin_in_gamma(const GammaSpec& spec, std::size_t d) {
  SuiteReport r = start(spec, "fin_in_gamma", {{"depth", d}});
  const auto gens = gamma_generators(spec);
  for (std::size_t n = 1; n <= d; ++n) {
    const Order points = layer_size(spec.frame->valency(), n);
    if (points > 4096) throw Error("layer " + std::to_string(n) + " is too large for a quotient");
    const PermutationGroup q = layer_quotient(gens, n);
    Order wreath = 1;
    for (std::size_t j = 0; j < n; ++j) {
      const Order& o = spec.label_group(j).order();
      const Order count = layer_size(spec.frame->valency(), j);
      for (Order c = 0; c < count; ++c) wreath *= o;
    }
    bool contains_fin = true;
    for (const auto& f : fin_generators(spec, n)) contains_fin = contains_fin && q.contains(layer_action(f, n));
    r.add("Gamma mod St(" + std::to_string(n) + ") is the full iterated wreath product",
          q.order() == wreath && contains_fin,
          {{"level", n},
           {"points", order_string(points)},
           {"order", order_string(q.order())},
           {"wreath_order", order_string(wreath)},
           {"contains_fin_generators", contains_fin}});
  }
  return r;
}

namespace {

// A generator of a outside b, or any element when all generators lie in b.
std::optional<Permutation> outside(const PermutationGroup& a, const PermutationGroup& b) {
  for (const auto& g : a.generators())
    if (!b.contains(g)) return g;
  for (const auto& g : a.elements())
    if (!b.contains(g)) return g;
  return std::nullopt;
}

}  // namespace

SuiteReport verify_injectivity(const GammaSpec& spec, std::size_t d) {
  SuiteReport r = start(spec, "injectivity", {{"depth", d}});
  const auto maxes = non_normal_maximal(spec.group());
  json list = json::array();
  for (const auto& m : maxes) list.push_back(group_json(m));
  r.add("non-normal maximal subgroups enumerated", !maxes.empty(),
        {{"count", maxes.size()}, {"subgroups", list}});
  std::vector<std::string> matrix(maxes.size(), std::string(maxes.size(), '.'));
  for (std::size_t i = 0; i < maxes.size(); ++i)
    for (std::size_t j = 0; j < maxes.size(); ++j) {
      if (i == j) continue;
      const auto m = outside(maxes[i], maxes[j]);
      if (!m) {
        matrix[i][j] = '!';
        r.add("M" + std::to_string(i) + " is not contained in M" + std::to_string(j), false,
              {{"i", i}, {"j", j}});
        continue;
      }
      const Element sm = spec.spinal_element(*m);
      const auto res = member_delta(spec, maxes[j], sm);
      bool ok = res.verdict == DeltaMembership::Verdict::no && res.refutation &&
                !maxes[j].contains(res.refutation->component);
      json cert{{"i", i}, {"j", j}, {"m", perm_json(*m)}};
      if (res.refutation) {
        const auto& f = *res.refutation;
        const std::size_t k = res.classification.k;
        const Element claimed = spec.spinal_element(f.component, k) * Element::finitary(spec.frame, k, f.remainder);
        ok = ok && sm.section(f.vertex).equal_to_depth(claimed, d);
        cert["vertex"] = f.vertex.to_string();
        cert["component"] = perm_json(f.component);
      }
      matrix[i][j] = res.verdict == DeltaMembership::Verdict::no    ? 'N'
                     : res.verdict == DeltaMembership::Verdict::yes ? 'Y'
                                                                    : '?';
      r.add("s_m is outside Delta(M" + std::to_string(j) + ") for m in M" + std::to_string(i), ok, cert);
    }
  r.params["matrix"] = matrix;
  return r;
}

SuiteReport verify_maximality_walkthrough(const GammaSpec& spec, const PermutationGroup& mgroup,
                                          const Element& g, std::size_t d) {
  SuiteReport r = start(spec, "maximality_walkthrough",
                        {{"depth", d},
                         {"M", group_json(mgroup)},
                         {"g", g.to_string()},
                         {"scope", "constructive steps only; maximality over all subgroups is not checked"}});
  const auto& frame = spec.frame;
  const PermutationGroup& G = spec.group();
  using V = DeltaMembership::Verdict;

  // (1) a section outside M, moved to the spine.
  const auto res = member_delta(spec, mgroup, g);
  if (res.verdict != V::no || !res.refutation) {
    r.add("step 1: g has a section with component outside M", false,
          {{"verdict", res.verdict == V::yes ? "yes" : "unknown"}, {"note", res.note}});
    return r;
  }
  const std::size_t k = std::max<std::size_t>(res.classification.k, 1);
  const auto ck = classify_at(g, k);
  std::optional<SectionForm> bad;
  if (ck)
    for (const auto& f : ck->forms)
      if (!mgroup.contains(f.component)) {
        bad = f;
        break;
      }
  if (!bad) {
    r.add("step 1: g has a section with component outside M", false, {{"k", k}});
    return r;
  }
  const Vertex uk = ray_vertex(spec.ray, k);
  const Permutation b = bad->component;
  const Fin conj = bad->vertex == uk ? nullptr : spec_transporter(spec, bad->vertex, uk);
  Element gt = conj ? g.conjugate(Element::finitary(frame, 0, conj)) : g;
  const Vertex moved = gt.act(uk);
  const Fin fix = moved == uk ? nullptr : spec_transporter(spec, moved, uk);
  if (fix) gt = gt * Element::finitary(frame, 0, fix);
  const auto c2 = classify_at(gt, k);
  std::optional<SectionForm> at_uk;
  if (c2)
    for (const auto& f : c2->forms)
      if (f.vertex == uk) at_uk = f;
  const bool step1 = at_uk && at_uk->component == b && !mgroup.contains(b) && gt.act(uk) == uk &&
                     fin_in_spec(spec, conj) && fin_in_spec(spec, fix);
  r.add("step 1: g has a section with component outside M, moved to u_k", step1,
        {{"k", k},
         {"vertex", bad->vertex.to_string()},
         {"component", perm_json(b)},
         {"u_k", uk.to_string()},
         {"conjugator", fin_json(conj)},
         {"fixer", fin_json(fix)}});
  if (!step1) return r;
  const Fin f = at_uk->remainder;

  // (2) M is self-normalizing, and some m in M leaves M under b.
  const PermutationGroup norm = normalizer(G, mgroup);
  std::optional<Permutation> m;
  for (const auto& x : mgroup.elements())
    if (!mgroup.contains(conjugate(x, b))) {
      m = x;
      break;
    }
  r.add("step 2: Norm_G(M) = M and m^b leaves M", norm.order() == mgroup.order() && m.has_value(),
        {{"normalizer_order", order_string(norm.order())},
         {"M_order", order_string(mgroup.order())},
         {"m", m ? perm_json(*m) : json(nullptr)},
         {"m^b", m ? perm_json(conjugate(*m, b)) : json(nullptr)}});
  if (!m) return r;
  const Permutation mb = conjugate(*m, b);

  // (3) conjugating the spine insertion by g.
  const Element sm = spec.spinal_element(*m);
  const Element smk = sm.section(uk);
  const Element lhs = insert(uk, smk).conjugate(gt);
  const Element p = sm.conjugate(gt);
  const Element pk = p.section(uk);
  const Element rhs = insert(uk, pk);
  const bool d3 = lhs.equal_to_depth(rhs, d);
  const bool e3 = lhs == rhs;
  r.add("step 3: ins_uk(s_m|uk)^g = ins_uk((s_m^g)|uk)", d3 && e3,
        {{"equal_to_depth", d3}, {"exact", e3}});

  // (4) the section carries m^b, and ins_uk((s_m^g)|uk) lies in Lambda modulo
  // Fin. For spinal g the difference to s_m^g is finitary; in general only the
  // insertion route of step 3 is available, since Fin is not normal in Gamma.
  const Classification cp = classify(pk);
  std::vector<Permutation> comps;
  for (const auto& x : cp.forms)
    if (!x.component.is_identity()) comps.push_back(x.component);
  const bool a4 = comps.size() == 1 && comps[0] == mb;
  const Element diff = rhs.inverse() * p;
  const bool b4 = classify(diff).all_finitary() && diff.as_finitary().has_value();
  const auto L = (sm.inverse() * insert(uk, smk)).as_finitary();
  const bool via_insertion = e3 && L && fin_in_spec(spec, *L);
  const Element literal = insert(uk, pk.inverse()) * sm;
  const bool literal_fin = literal.as_finitary().has_value();
  r.add("step 4: (s_m^g)|uk has component m^b and its spine insertion lies in Lambda modulo Fin",
        a4 && (b4 || via_insertion),
        {{"components", perms_json(comps)},
         {"m^b", perm_json(mb)},
         {"difference_finitary", b4},
         {"insertion_route", via_insertion},
         {"literal_reading_finitary", literal_fin}});

  // (5) M and m^b generate G, and every generator of Gamma is a word in Lambda.
  std::vector<Permutation> kg = mgroup.generators();
  kg.push_back(mb);
  const PermutationGroup K(kg, G.degree());
  const Element smb = spec.spinal_element(mb);
  const auto E = (insert(uk, spec.spinal_element(mb, k)).inverse() * smb).as_finitary();
  const Fin fk = fin_insert(*frame, 0, uk, f);
  const Fin fk_inv = fin_insert(*frame, 0, uk, fin_inverse(f));
  bool ok5 = K.order() == G.order() && L && E && fin_in_spec(spec, fk) && fin_in_spec(spec, *L) &&
             fin_in_spec(spec, *E);
  json words = json::object();
  if (ok5) {
    const Element expr = Element::finitary(frame, 0, fk) * gt.inverse() * sm * Element::finitary(frame, 0, *L) *
                         gt * Element::finitary(frame, 0, fk_inv) * Element::finitary(frame, 0, *E);
    const bool expr_ok = expr == smb;
    ok5 = ok5 && expr_ok;
    words["s_m^b"] = {{"word", "F g^-1 s_m L g F^-1 E"},
                      {"F", fin_json(fk)},
                      {"L", fin_json(*L)},
                      {"E", fin_json(*E)},
                      {"g", "c^-1 g c t"},
                      {"verified", expr_ok}};
    for (std::size_t i = 0; i < spec.rooted_gens.size(); ++i) {
      const bool in = fin_in_spec(spec, fin_rooted(spec.rooted_gens[i].root_label()));
      ok5 = ok5 && in;
      words["r" + std::to_string(i + 1)] = {{"word", "finitary"}, {"verified", in}};
    }
    for (std::size_t i = 0; i < G.generators().size(); ++i) {
      const auto w = generator_word(K, G.generators()[i]);
      Element prod = spec.identity();
      json tokens = json::array();
      for (std::size_t j : w) {
        if (j + 1 == kg.size()) {
          prod = prod * expr;
          tokens.push_back("s_m^b");
        } else {
          prod = prod * spec.spinal_element(kg[j]);
          tokens.push_back("s_" + format_cycles(kg[j]));
        }
      }
      const bool eq = prod == spec.spinal_gens[i];
      ok5 = ok5 && eq;
      words["sG" + std::to_string(i + 1)] = {{"word", tokens}, {"verified", eq}};
    }
  }
  r.add("step 5: <M, m^b> = G and every generator of Gamma lies in Lambda", ok5,
        {{"order", order_string(K.order())}, {"words", words}});
  return r;
}

SuiteReport verify_maximality(const GammaSpec& spec, std::size_t d) {
  SuiteReport r = start(spec, "maximality", {{"depth", d}});
  const auto maxes = non_normal_maximal(spec.group());
  const auto elements = spec.group().elements();
  std::size_t runs = 0;
  for (std::size_t i = 0; i < maxes.size(); ++i)
    for (const auto& w : elements) {
      if (maxes[i].contains(w)) continue;
      ++runs;
      const auto sub = verify_maximality_walkthrough(spec, maxes[i], spec.spinal_element(w), d);
      json failed = json::array();
      for (const auto& c : sub.checks)
        if (!c.passed) failed.push_back({{"step", c.description}, {"certificate", c.certificate}});
      json cert{{"M", i}, {"w", perm_json(w)}, {"steps", sub.checks.size()}};
      if (!failed.empty()) cert["failed"] = failed;
      for (const auto& c : sub.checks)
        if (c.description.rfind("step 2", 0) == 0) {
          cert["m"] = c.certificate["m"];
          cert["m^b"] = c.certificate["m^b"];
        }
      r.add("walkthrough for M" + std::to_string(i) + " and s_" + format_cycles(w),
            sub.passed() && sub.checks.size() == 5, cert);
    }
  r.params["maximal_subgroups"] = maxes.size();
  r.params["runs"] = runs;
  return r;
}

std::vector<std::string> suite_names() {
  return {"spherical", "rist_witness", "layered_witness", "fin_in_gamma", "injectivity", "maximality"};
}

SuiteReport run_suite(const GammaSpec& spec, const std::string& name, const Depths& depths) {
  if (name == "spherical") return verify_spherical(spec, depths.portrait);
  if (name == "rist_witness") return verify_rist_witness(spec, depths.portrait);
  if (name == "layered_witness") return verify_layered_witness(spec, depths.layered, depths.portrait);
  if (name == "fin_in_gamma") return verify_fin_in_gamma(spec, depths.quotient);
  if (name == "injectivity") return verify_injectivity(spec, depths.portrait);
  if (name == "maximality") return verify_maximality(spec, depths.portrait);
  throw InputError("unknown suite '" + name + "'");
}

std::vector<SuiteReport> run_all(const GammaSpec& spec, const Depths& depths) {
  std::vector<SuiteReport> out;
  for (const auto& n : suite_names()) out.push_back(run_suite(spec, n, depths));
  return out;
}

}  // namespace spinal
