#include "spinal/construction.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <unordered_map>

#include "spinal/error.hpp"

namespace spinal {

namespace {

template <class B, class A, class F>
EventuallyPeriodic<B> map_seq(const EventuallyPeriodic<A>& s, F f) {
  std::vector<B> pre, per;
  for (const auto& a : s.prefix()) pre.push_back(f(a));
  for (const auto& a : s.period()) per.push_back(f(a));
  return EventuallyPeriodic<B>(std::move(pre), std::move(per));
}

struct CatalogEntry {
  const char* name;
  std::size_t degree;
  std::vector<const char*> gens;
  bool natural;  // the defining action is faithful, transitive and non-regular
};

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> c{
      {"A5", 5, {"(0 1 2)", "(0 1 2 3 4)"}, true},
      {"A6", 6, {"(0 1 2)", "(1 2 3 4 5)"}, true},
      {"A7", 7, {"(0 1 2)", "(0 1 2 3 4 5 6)"}, true},
      {"PSL(2,7)", 7, {"(0 1 2 3 4 5 6)", "(1 2)(3 6)"}, true},
      {"C2", 2, {"(0 1)"}, false},
  };
  return c;
}

std::set<Permutation> kernel_set(const Component& c) {
  auto k = c.pi.kernel();
  return {k.begin(), k.end()};
}

}  // namespace

LevelGroupPtr make_level_group(std::string name, PermutationGroup g,
                               std::optional<TauAction> tau) {
  if (!tau) tau = tau_action(g);
  if (!(tau->source == g)) throw Error("action of " + name + " is for a different group");
  if (!check_tau_action(*tau).ok())
    throw Error("action of " + name + " is not faithful, transitive and non-regular");
  auto lg = std::make_shared<LevelGroup>(LevelGroup{
      std::move(name), g, *tau, tau->image_group(),
      std::make_shared<const Homomorphism>(g, tau->images, tau->point_count)});
  return lg;
}

std::vector<std::string> catalog_names() {
  std::vector<std::string> out;
  for (const auto& e : catalog()) out.emplace_back(e.name);
  return out;
}

std::optional<PermutationGroup> catalog_group(const std::string& name) {
  for (const auto& e : catalog()) {
    if (name != e.name) continue;
    std::vector<Permutation> gens;
    for (const char* s : e.gens) gens.push_back(parse_cycles(s, e.degree));
    return PermutationGroup(gens, e.degree);
  }
  return std::nullopt;
}

LevelGroupPtr catalog_level_group(const std::string& name) {
  auto g = catalog_group(name);
  if (!g) throw InputError("unknown catalog group '" + name + "'");
  for (const auto& e : catalog())
    if (name == e.name && e.natural) return make_level_group(name, *g, natural_action(*g));
  return make_level_group(name, *g);
}

ComponentPtr make_component(const PermutationGroup& g, LevelGroupPtr target,
                            std::vector<Permutation> generator_images) {
  for (const auto& im : generator_images)
    if (im.degree() != target->group.degree() || !target->group.contains(im))
      throw Error("component image " + format_cycles(im) + " is not in " + target->name);
  Homomorphism pi(g, generator_images, target->group.degree());
  std::vector<Permutation> labels;
  for (const auto& im : generator_images) labels.push_back((*target->hom)(im));
  auto rho = std::make_shared<const Homomorphism>(g, labels, target->tau.point_count);
  return std::make_shared<const Component>(Component{std::move(target), std::move(pi), rho});
}

RepCheck check_rep(const ResidualRep& rep) {
  RepCheck out;
  const auto& comps = rep.components;
  if (comps.period().empty()) throw Error("empty component list");
  const std::size_t total = comps.prefix().size() + comps.period().size();
  for (std::size_t i = 0; i < total; ++i) {
    const Component& c = *comps.term(i);
    RepCheck::Level l{i + 1, c.pi.image().order(), c.target->group.order()};
    if (l.image_order != l.target_order && out.subdirect) {
      out.subdirect = false;
      out.violation = "component " + std::to_string(i + 1) + " is not onto " + c.target->name +
                      " (image order " + order_string(l.image_order) + " of " +
                      order_string(l.target_order) + ")";
    }
    out.levels.push_back(std::move(l));
  }
  std::set<Permutation> inter = kernel_set(*comps.period().front());
  for (const auto& c : comps.period()) {
    std::set<Permutation> k = kernel_set(*c), next;
    std::set_intersection(inter.begin(), inter.end(), k.begin(), k.end(),
                          std::inserter(next, next.begin()));
    inter = std::move(next);
  }
  out.tail_kernel_order = inter.size();
  if (inter.size() != 1) {
    out.infinitary = false;
    if (out.violation.empty())
      out.violation = "kernels over one period intersect in " + std::to_string(inter.size()) +
                      " elements";
  }
  return out;
}

ResidualRep make_diagonal_rep(const LevelGroupPtr& g) {
  if (g->group.is_trivial()) throw Error(g->name + " is trivial");
  if (!is_perfect(g->group)) throw Error(g->name + " is not perfect");
  auto c = make_component(g->group, g, g->group.generators());
  return ResidualRep{g->group, EventuallyPeriodic<ComponentPtr>::constant(c)};
}

ResidualRep reindex_infinitary(const ResidualRep& rep) {
  if (rep.components.period().empty()) throw Error("empty component list");
  std::vector<ComponentPtr> all = rep.components.prefix();
  all.insert(all.end(), rep.components.period().begin(), rep.components.period().end());
  ResidualRep out{rep.group, EventuallyPeriodic<ComponentPtr>({}, std::move(all))};
  if (!check_rep(out).infinitary)
    throw Error("representation is not faithful, so no reindexing is infinitary");
  return out;
}

Element GammaSpec::spinal_element(const Permutation& g, std::size_t level) const {
  return Element::spinal(frame, level, g);
}

GammaSpec build_gamma(const ResidualRep& rep, const Ray& u, const SpinalSequence& x,
                      const LevelGroupPtr& s0, BuildOptions options) {
  if (rep.components.period().empty()) throw Error("empty component list");
  if (options.validate) {
    if (s0->group.is_trivial() || !is_perfect(s0->group))
      throw Error("S0 must be non-trivial and perfect");
    if (rep.group.is_trivial() || !is_perfect(rep.group))
      throw Error("G must be non-trivial and perfect");
    const RepCheck rc = check_rep(rep);
    if (!rc.ok()) throw Error("residual representation rejected: " + rc.violation);
  }
  GammaSpec spec;
  spec.rep = rep;
  spec.s0 = s0;
  spec.ray = u;
  spec.spinal = x;
  auto targets = map_seq<LevelGroupPtr>(rep.components, [](const ComponentPtr& c) { return c->target; });
  std::vector<LevelGroupPtr> pre{s0};
  pre.insert(pre.end(), targets.prefix().begin(), targets.prefix().end());
  spec.levels = EventuallyPeriodic<LevelGroupPtr>(std::move(pre), targets.period()).canonical();

  const ValencySequence valency(map_seq<std::size_t>(
      spec.levels, [](const LevelGroupPtr& l) { return l->tau.point_count; }));
  if (options.validate) {
    auto actions = map_seq<std::shared_ptr<const TauAction>>(
        spec.levels,
        [](const LevelGroupPtr& l) { return std::shared_ptr<const TauAction>(l, &l->tau); });
    if (auto v = validate_spinal_data(valency, actions, u, x))
      throw Error("spinal data violates " + v->condition + " at level " + std::to_string(v->level));
  }
  auto rho = map_seq<std::shared_ptr<const Homomorphism>>(rep.components,
                                                          [](const ComponentPtr& c) { return c->rho; });
  spec.frame = std::make_shared<const TreeFrame>(valency, u, x, rho, rep.group.degree());
  for (const auto& s : s0->group.generators())
    spec.rooted_gens.push_back(Element::rooted(spec.frame, 0, (*s0->hom)(s)));
  for (const auto& g : rep.group.generators())
    spec.spinal_gens.push_back(Element::spinal(spec.frame, 0, g));
  return spec;
}

GammaSpec shift_spec(const GammaSpec& spec, std::size_t m) {
  if (m == 0) return spec;
  ResidualRep rep{spec.rep.group, spec.rep.components.shifted(m)};
  return build_gamma(rep, spec.ray.shifted(m), spec.spinal.shifted(m), spec.levels.term(m),
                     BuildOptions{false});
}

std::vector<Element> fin_generators(const GammaSpec& spec, std::size_t d) {
  std::vector<Element> out;
  for (std::size_t n = 0; n < d; ++n) {
    const LevelGroup& lg = *spec.levels.term(n);
    for (const auto& v : layer_vertices(spec.frame->valency(), n))
      for (const auto& s : lg.group.generators())
        out.push_back(insert(v, Element::rooted(spec.frame, n, (*lg.hom)(s))));
  }
  return out;
}

DeltaSpec delta(const GammaSpec& spec, const PermutationGroup& h) {
  if (!is_subgroup(h, spec.group())) throw Error("H is not a subgroup of G");
  DeltaSpec d{spec, h, {}};
  for (const auto& g : h.generators()) d.spinal_gens.push_back(spec.spinal_element(g));
  return d;
}

namespace {

// The image of the subgroup on the labels of the components from level k+1
// until one full period past the prefix.
PermutationGroup component_group(const GammaSpec& spec, const PermutationGroup& h, std::size_t k) {
  const auto& comps = spec.rep.components;
  const std::size_t stop = std::max(k, comps.prefix().size()) + comps.period().size();
  std::size_t degree = 0;
  for (std::size_t i = k; i < stop; ++i) degree += comps.term(i)->rho->target_degree();
  std::vector<Permutation> gens;
  for (const auto& g : h.generators()) {
    std::vector<Point> im;
    im.reserve(degree);
    std::size_t offset = 0;
    for (std::size_t i = k; i < stop; ++i) {
      const auto& r = *comps.term(i)->rho;
      const Permutation& p = r(g);
      for (Point q = 0; q < p.degree(); ++q) im.push_back(static_cast<Point>(offset + p[q]));
      offset += p.degree();
    }
    gens.emplace_back(std::move(im));
  }
  return PermutationGroup(gens, degree);
}

NuclearWindow window(const GammaSpec& spec, const PermutationGroup& h, std::size_t n,
                     std::size_t length) {
  NuclearWindow w;
  w.start = n;
  for (std::size_t k = n; k < n + length; ++k) {
    PermutationGroup g = component_group(spec, h, k);
    Order o = g.order();
    w.entries.push_back({k, std::move(g), std::move(o)});
  }
  return w;
}

}  // namespace

NuclearWindow nuclear_window(const GammaSpec& spec, std::size_t n, std::size_t length) {
  return window(spec, spec.group(), n, length);
}

NuclearWindow nuclear_window(const DeltaSpec& spec, std::size_t n, std::size_t length) {
  return window(spec.gamma, spec.subgroup, n, length);
}

ProperCheck is_proper_delta(const GammaSpec& spec, const PermutationGroup& h) {
  if (!is_subgroup(h, spec.group())) throw Error("H is not a subgroup of G");
  ProperCheck out;
  const std::size_t span = spec.rep.components.prefix().size() + spec.rep.components.period().size();
  for (std::size_t k = 0; k < span; ++k)
    out.level_orders.emplace_back(component_group(spec, h, k).order(),
                                  component_group(spec, spec.group(), k).order());
  out.proper = h.order() < spec.group().order();
  if (!out.proper) return out;
  for (const auto& g : spec.group().generators())
    if (!h.contains(g)) {
      out.witness = g;
      return out;
    }
  for (const auto& g : spec.group().elements())
    if (!h.contains(g)) {
      out.witness = g;
      break;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Classification

namespace {

bool spin_free(const Element& e) {
  return std::none_of(e.letters().begin(), e.letters().end(),
                      [](const Letter& l) { return std::holds_alternative<Spin>(l); });
}

Fin truncate(const Fin& f, std::size_t d) {
  if (!f || d == 0) return nullptr;
  std::vector<Fin> children;
  for (const auto& c : f->children) children.push_back(truncate(c, d - 1));
  return make_fin(f->label, std::move(children));
}

Fin top_labels(const Element& e, std::size_t d) {
  if (d == 0 || e.is_trivial_word()) return nullptr;
  if (spin_free(e)) return truncate(std::get<Fin>(e.letters().front()), d);
  const std::size_t deg = e.frame()->degree(e.level());
  std::vector<Fin> children(deg);
  if (d > 1)
    for (Point x = 0; x < deg; ++x) children[x] = top_labels(e.section(x), d - 1);
  return make_fin(e.root_label(), std::move(children));
}

// The component b with e = s_b f for some finitary f, if there is one.
std::optional<SectionForm> section_form(const Element& e, const Vertex& v) {
  const TreeFrame& fr = *e.frame();
  if (spin_free(e)) {
    Fin f = e.is_trivial_word() ? nullptr : std::get<Fin>(e.letters().front());
    return SectionForm{v, Permutation::identity(fr.component_degree()), f};
  }
  // Far enough down the spine only the spinal part survives.
  const std::size_t limit = 2 * e.letter_count() + e.finitary_depth() + 4;
  Element cur = e;
  std::optional<Permutation> b;
  for (std::size_t i = 0; i <= limit && !b; ++i) {
    if (cur.is_trivial_word()) {
      b = Permutation::identity(fr.component_degree());
    } else if (cur.letters().size() == 1 && std::holds_alternative<Spin>(cur.letters()[0]) &&
               std::get<Spin>(cur.letters()[0]).at.empty()) {
      b = std::get<Spin>(cur.letters()[0]).comp;
    } else {
      cur = cur.section(fr.ray_step(cur.level()));
    }
  }
  if (!b) return std::nullopt;
  auto rest = (Element::spinal(e.frame(), e.level(), *b).inverse() * e).as_finitary();
  if (!rest) return std::nullopt;
  return SectionForm{v, *b, *rest};
}

bool collect(const Element& e, const Vertex& v, std::size_t remaining,
             std::vector<SectionForm>& out) {
  if (e.is_trivial_word()) return true;
  if (remaining == 0) {
    auto f = section_form(e, v);
    if (!f) return false;
    if (!f->component.is_identity() || f->remainder) out.push_back(std::move(*f));
    return true;
  }
  for (Point x = 0; x < e.frame()->degree(e.level()); ++x)
    if (!collect(e.section(x), v.child(x), remaining - 1, out)) return false;
  return true;
}

}  // namespace

bool Classification::all_finitary() const {
  return std::all_of(forms.begin(), forms.end(),
                     [](const SectionForm& f) { return f.component.is_identity(); });
}

std::size_t Classification::finitary_depth() const {
  std::size_t d = fin_depth(top);
  for (const auto& f : forms)
    if (f.remainder) d = std::max(d, k + fin_depth(f.remainder));
  return d;
}

std::optional<Classification> classify_at(const Element& w, std::size_t k) {
  Classification c;
  c.k = k;
  if (!collect(w, Vertex(), k, c.forms)) return std::nullopt;
  c.top = top_labels(w, k);
  return c;
}

std::size_t contraction_bound(const Element& w) {
  std::size_t log = 0;
  while ((std::size_t{1} << log) < w.letter_count() + 1) ++log;
  return log + w.finitary_depth();
}

Classification classify(const Element& w) {
  const std::size_t bound = contraction_bound(w);
  for (std::size_t k = 0; k <= bound; ++k)
    if (auto c = classify_at(w, k)) return *c;
  throw Error("contraction failed");
}

Element reconstruct(const Element& like, const Classification& c) {
  const auto& frame = like.frame();
  const std::size_t level = like.level();
  Element out(frame, level);
  for (const auto& f : c.forms) {
    Element s = Element::spinal(frame, level + c.k, f.component) *
                Element::finitary(frame, level + c.k, f.remainder);
    out = out * insert(f.vertex, s);
  }
  return out * Element::finitary(frame, level, c.top);
}

// ---------------------------------------------------------------------------
// Delta membership

std::vector<std::size_t> generator_word(const PermutationGroup& g, const Permutation& x) {
  const Permutation id = Permutation::identity(g.degree());
  if (x == id) return {};
  if (!g.contains(x)) throw Error(format_cycles(x) + " is not in the group");
  std::unordered_map<Permutation, std::pair<Permutation, std::size_t>, PermutationHash> parent;
  std::vector<Permutation> queue{id};
  parent.emplace(id, std::make_pair(id, std::size_t(-1)));
  for (std::size_t k = 0; k < queue.size(); ++k) {
    for (std::size_t i = 0; i < g.generators().size(); ++i) {
      Permutation y = queue[k] * g.generators()[i];
      if (parent.count(y)) continue;
      parent.emplace(y, std::make_pair(queue[k], i));
      if (y == x) {
        std::vector<std::size_t> word;
        for (Permutation cur = y; !(cur == id);) {
          const auto& [prev, gi] = parent.at(cur);
          word.push_back(gi);
          cur = prev;
        }
        std::reverse(word.begin(), word.end());
        return word;
      }
      queue.push_back(std::move(y));
    }
  }
  throw Error("generator word search failed");
}

Fin spec_transporter(const GammaSpec& spec, const Vertex& from, const Vertex& to) {
  return transporter(*spec.frame, 0, from, to,
                     [&](std::size_t n) -> const PermutationGroup& { return spec.label_group(n); });
}

bool fin_in_spec(const GammaSpec& spec, const Fin& f, std::size_t level) {
  return fin_labels_in(f, level,
                       [&](std::size_t n) -> const PermutationGroup& { return spec.label_group(n); });
}

Element evaluate_witness(const GammaSpec& spec, const PermutationGroup& h,
                         const std::vector<DeltaMembership::Factor>& factors) {
  Element out = spec.identity();
  for (const auto& f : factors) {
    if (f.spinal < 0)
      out = out * Element::finitary(spec.frame, 0, f.fin);
    else
      out = out * spec.spinal_element(h.generators().at(static_cast<std::size_t>(f.spinal)));
  }
  return out;
}

DeltaMembership member_delta(const GammaSpec& spec, const PermutationGroup& h, const Element& w) {
  if (!is_subgroup(h, spec.group())) throw Error("H is not a subgroup of G");
  DeltaMembership out;
  out.classification = classify(w);
  const Classification& c = out.classification;
  for (const auto& f : c.forms)
    if (!h.contains(f.component)) {
      out.verdict = DeltaMembership::Verdict::no;
      out.refutation = f;
      return out;
    }

  // Every section is s_b f with b in H: conjugate ins_{u_k}(s_b) to v and use
  // that ins_{u_k}(s_b) differs from s_b by a finitary element.
  const Vertex uk = ray_vertex(spec.ray, c.k);
  std::vector<DeltaMembership::Factor> factors;
  auto push_fin = [&](const Fin& f) {
    if (!f) return;
    if (!factors.empty() && factors.back().spinal < 0)
      factors.back().fin = fin_multiply(factors.back().fin, f);
    else
      factors.push_back({f, -1});
    if (!factors.back().fin) factors.pop_back();
  };
  for (const auto& f : c.forms) {
    const Fin conj = f.vertex == uk ? nullptr : spec_transporter(spec, uk, f.vertex);
    push_fin(fin_inverse(conj));
    if (!f.component.is_identity()) {
      for (std::size_t i : generator_word(h, f.component))
        factors.push_back({nullptr, static_cast<int>(i)});
      const Element sb = spec.spinal_element(f.component);
      auto lift = (sb.inverse() * insert(uk, spec.spinal_element(f.component, c.k))).as_finitary();
      if (!lift) {
        out.note = "spinal insertion is not finitary modulo its spinal part";
        return out;
      }
      push_fin(*lift);
    }
    push_fin(conj);
    push_fin(fin_insert(*spec.frame, 0, f.vertex, f.remainder));
  }
  push_fin(c.top);
  for (const auto& f : factors)
    if (f.spinal < 0 && !fin_in_spec(spec, f.fin)) {
      out.note = "finitary factor has labels outside the level groups";
      return out;
    }
  if (!(evaluate_witness(spec, h, factors) == w)) {
    out.note = "witness does not reproduce the element";
    return out;
  }
  out.verdict = DeltaMembership::Verdict::yes;
  out.witness = std::move(factors);
  return out;
}

Element parse_word(const GammaSpec& spec, const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  Element out = spec.identity();
  while (in >> tok) {
    bool inv = false;
    if (tok.size() > 3 && tok.compare(tok.size() - 3, 3, "^-1") == 0) {
      inv = true;
      tok.resize(tok.size() - 3);
    }
    const std::vector<Element>* pool = nullptr;
    std::size_t skip = 0;
    if (tok.rfind("sG", 0) == 0) {
      pool = &spec.spinal_gens;
      skip = 2;
    } else if (tok.rfind("r", 0) == 0) {
      pool = &spec.rooted_gens;
      skip = 1;
    }
    const std::string num = pool ? tok.substr(skip) : "";
    if (!pool || num.empty() || num.size() > 6 ||
        !std::all_of(num.begin(), num.end(), [](unsigned char ch) { return std::isdigit(ch); }))
      throw InputError("malformed generator '" + tok + "'");
    const std::size_t k = std::stoul(num);
    if (k == 0 || k > pool->size())
      throw InputError("generator '" + tok + "' out of range");
    const Element& g = (*pool)[k - 1];
    out = out * (inv ? g.inverse() : g);
  }
  return out;
}

}  // namespace spinal
