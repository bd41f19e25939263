#include "doctest.h"

#include <map>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "spinal/construction.hpp"
#include "spinal/error.hpp"

using namespace spinal;
using fixture::cyc;

namespace {

LevelGroupPtr a5_level() { return catalog_level_group("A5"); }

GammaSpec a5_spec() {
  return build_gamma(make_diagonal_rep(a5_level()), Ray::constant(0), SpinalSequence::constant(1),
                     a5_level());
}

PermutationGroup a4() { return bsgs({cyc("(0 1 2)"), cyc("(0 1)(2 3)")}, 5); }

Permutation id5() { return Permutation::identity(5); }

// A5 x A5 on ten points with the two projections.
struct Product {
  PermutationGroup g;
  ComponentPtr first, second;
};

Product a5_squared() {
  const std::size_t n = 10;
  std::vector<Permutation> gens{parse_cycles("(0 1 2)", n), parse_cycles("(0 1 2 3 4)", n),
                                parse_cycles("(5 6 7)", n), parse_cycles("(5 6 7 8 9)", n)};
  PermutationGroup g(gens, n);
  auto t = a5_level();
  return {g, make_component(g, t, {cyc("(0 1 2)"), cyc("(0 1 2 3 4)"), id5(), id5()}),
          make_component(g, t, {id5(), id5(), cyc("(0 1 2)"), cyc("(0 1 2 3 4)")})};
}

// Elements of G killed by every component of one period, by enumeration.
std::size_t brute_tail_kernel(const ResidualRep& rep) {
  std::size_t count = 0;
  for (const auto& g : rep.group.elements()) {
    bool dead = true;
    for (const auto& c : rep.components.period()) dead = dead && c->pi(g).is_identity();
    count += dead;
  }
  return count;
}

// Action of e on the layer-n vertices, numbered lexicographically.
Permutation layer_perm(const Element& e, std::size_t n) {
  auto verts = layer_vertices(e.frame()->valency(), n);
  std::map<Vertex, Point> index;
  for (std::size_t i = 0; i < verts.size(); ++i) index[verts[i]] = static_cast<Point>(i);
  std::vector<Point> im;
  for (const auto& v : verts) im.push_back(index.at(e.act(v)));
  return Permutation(im);
}

PermutationGroup layer_group(const std::vector<Element>& gens, std::size_t n) {
  std::vector<Permutation> p;
  for (const auto& g : gens) p.push_back(layer_perm(g, n));
  return bsgs(p, p.front().degree());
}

}  // namespace

TEST_CASE("catalog and level groups") {
  CHECK(catalog_names().size() == 5);
  for (const char* name : {"A5", "A6", "A7", "PSL(2,7)"}) {
    auto lg = catalog_level_group(name);
    CHECK(check_tau_action(lg->tau).ok());
    CHECK(lg->image.order() == lg->group.order());
  }
  CHECK(catalog_level_group("PSL(2,7)")->group.order() == 168);
  CHECK_THROWS_AS(catalog_level_group("C2"), Error);
  CHECK_THROWS_AS(catalog_level_group("B7"), InputError);
  CHECK_FALSE(catalog_group("nope"));
}

TEST_CASE("diagonal representation") {
  auto rep = make_diagonal_rep(a5_level());
  CHECK(rep.components.prefix().empty());
  CHECK(rep.components.period().size() == 1);
  auto rc = check_rep(rep);
  CHECK(rc.ok());
  CHECK(rc.tail_kernel_order == 1);
  CHECK(rc.levels.size() == 1);
  CHECK(rc.levels[0].image_order == 60);
  for (const auto& g : rep.group.elements()) CHECK(rep.components.term(3)->pi(g) == g);

  auto s3 = make_level_group("S3", bsgs({parse_cycles("(0 1)", 3), parse_cycles("(0 1 2)", 3)}),
                             natural_action(bsgs({parse_cycles("(0 1)", 3), parse_cycles("(0 1 2)", 3)})));
  CHECK_THROWS_WITH_AS(make_diagonal_rep(s3), "S3 is not perfect", Error);
}

TEST_CASE("seeded representations") {
  SUBCASE("non-subdirect component is rejected") {
    auto a6 = catalog_level_group("A6");
    auto c = make_component(fixture::a5(), a6,
                            {parse_cycles("(0 1 2)", 6), parse_cycles("(0 1 2 3 4)", 6)});
    ResidualRep rep{fixture::a5(), EventuallyPeriodic<ComponentPtr>::constant(c)};
    auto rc = check_rep(rep);
    CHECK_FALSE(rc.subdirect);
    CHECK_FALSE(rc.ok());
    CHECK(rc.levels[0].image_order == 60);
    CHECK(rc.levels[0].target_order == 360);
    CHECK_THROWS_AS(build_gamma(rep, Ray::constant(0), SpinalSequence::constant(1), a5_level()),
                    Error);
  }
  SUBCASE("images outside the target") {
    CHECK_THROWS_AS(make_component(fixture::a5(), a5_level(), {cyc("(0 1)"), cyc("(0 1 2 3 4)")}),
                    Error);
  }
  SUBCASE("non-homomorphism") {
    CHECK_THROWS_AS(make_component(fixture::a5(), a5_level(), {cyc("(0 1 2)"), id5()}), Error);
  }
  SUBCASE("reindexing a tail that forgets a factor") {
    auto p = a5_squared();
    ResidualRep rep{p.g, EventuallyPeriodic<ComponentPtr>({p.first}, {p.second})};
    auto before = check_rep(rep);
    CHECK(before.subdirect);
    CHECK_FALSE(before.infinitary);
    CHECK(before.tail_kernel_order == brute_tail_kernel(rep));
    CHECK(before.tail_kernel_order == 60);

    auto fixed = reindex_infinitary(rep);
    auto after = check_rep(fixed);
    CHECK(after.ok());
    CHECK(after.tail_kernel_order == brute_tail_kernel(fixed));
    CHECK(after.tail_kernel_order == 1);
    CHECK(fixed.components.prefix().empty());
    CHECK(fixed.components.period().size() == 2);

    auto spec = build_gamma(fixed, Ray::constant(0), SpinalSequence::constant(1), a5_level());
    CHECK(spec.generator_count() == 6);
  }
  SUBCASE("reindexing is idempotent on the diagonal") {
    auto rep = make_diagonal_rep(a5_level());
    auto again = reindex_infinitary(rep);
    CHECK(again.components.period().size() == 1);
    CHECK(check_rep(again).ok());
  }
  SUBCASE("reindexing a non-faithful representation fails") {
    auto p = a5_squared();
    ResidualRep rep{p.g, EventuallyPeriodic<ComponentPtr>::constant(p.second)};
    CHECK_THROWS_AS(reindex_infinitary(rep), Error);
  }
}

TEST_CASE("build_gamma") {
  auto spec = a5_spec();
  CHECK(spec.generator_count() == 4);
  CHECK(spec.rooted_gens.size() == 2);
  CHECK(spec.spinal_gens.size() == 2);
  CHECK(spec.rooted_gens[0].root_label() == cyc("(0 1 2)"));
  CHECK(spec.rooted_gens[1].root_label() == cyc("(0 1 2 3 4)"));
  CHECK(spec.spinal_gens[1] == spec.spinal_element(cyc("(0 1 2 3 4)")));
  CHECK(spec.frame->degree(7) == 5);

  auto rep = make_diagonal_rep(a5_level());
  CHECK_THROWS_WITH_AS(build_gamma(rep, Ray::constant(0), SpinalSequence::constant(0), a5_level()),
                       doctest::Contains("spinal data violates"), Error);
  auto s3g = bsgs({parse_cycles("(0 1)", 3), parse_cycles("(0 1 2)", 3)});
  auto s3 = make_level_group("S3", s3g, natural_action(s3g));
  CHECK_THROWS_WITH_AS(build_gamma(rep, Ray::constant(0), SpinalSequence::constant(1), s3),
                       doctest::Contains("S0 must be"), Error);
}

TEST_CASE("shift_spec") {
  auto spec = a5_spec();
  for (std::size_t m : {0, 1, 5}) {
    auto sh = shift_spec(spec, m);
    CHECK(sh.generator_count() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& a = i < 2 ? spec.rooted_gens[i] : spec.spinal_gens[i - 2];
      const auto& b = i < 2 ? sh.rooted_gens[i] : sh.spinal_gens[i - 2];
      CHECK(layer_perm(a, 3) == layer_perm(b, 3));
    }
  }
  // A prefix of length one disappears after one shift.
  auto p = a5_squared();
  ResidualRep rep{p.g, EventuallyPeriodic<ComponentPtr>({p.first}, {p.first, p.second})};
  auto spec2 = build_gamma(rep, Ray::constant(0), SpinalSequence::constant(1), a5_level());
  auto sh = shift_spec(spec2, 1);
  CHECK(sh.rep.components.prefix().empty());
  CHECK(sh.rep.components.period().size() == 2);
  CHECK(sh.frame->periodicity().start == 0);
  // Sections of s_g along the ray are the shifted spinal elements.
  for (const auto& g : p.g.generators())
    CHECK(spec2.spinal_element(g).section(Point{0}).portrait(3).label ==
          sh.spinal_element(g).portrait(3).label);
}

TEST_CASE("fin_generators") {
  auto spec = a5_spec();
  CHECK(fin_generators(spec, 1).size() == 2);
  auto f2 = fin_generators(spec, 2);
  CHECK(f2.size() == 12);
  for (const auto& f : f2) CHECK(f.as_finitary());
  CHECK(layer_group(f2, 2).order() == Order(46656000000ULL));
  CHECK(layer_group(fin_generators(spec, 1), 1).order() == 60);
}

TEST_CASE("delta") {
  auto spec = a5_spec();
  auto d = delta(spec, a4());
  REQUIRE(d.spinal_gens.size() == 2);
  CHECK(d.spinal_gens[0] == spec.spinal_element(cyc("(0 1 2)")));
  CHECK(d.spinal_gens[1] == spec.spinal_element(cyc("(0 1)(2 3)")));
  CHECK(delta(spec, PermutationGroup(5)).spinal_gens.empty());
  CHECK_THROWS_AS(delta(spec, bsgs({cyc("(0 1)")})), Error);

  // Delta(G) and Gamma agree on the first layers.
  for (std::size_t n = 1; n <= 3; ++n) {
    auto gens = fin_generators(spec, n);
    auto full = delta(spec, spec.group());
    gens.insert(gens.end(), full.spinal_gens.begin(), full.spinal_gens.end());
    std::vector<Element> gamma = spec.rooted_gens;
    gamma.insert(gamma.end(), spec.spinal_gens.begin(), spec.spinal_gens.end());
    CHECK(layer_group(gens, n).order() == layer_group(gamma, n).order());
  }
}

TEST_CASE("nuclear windows") {
  auto spec = a5_spec();
  auto w = nuclear_window(spec, 0, 3);
  REQUIRE(w.entries.size() == 3);
  for (const auto& e : w.entries) CHECK(e.order == 60);
  auto wd = nuclear_window(delta(spec, a4()), 0, 3);
  for (const auto& e : wd.entries) CHECK(e.order == 12);

  // A product rep: component groups against closure of the label images.
  auto p = a5_squared();
  ResidualRep rep{p.g, EventuallyPeriodic<ComponentPtr>({p.first}, {p.first, p.second})};
  auto spec2 = build_gamma(rep, Ray::constant(0), SpinalSequence::constant(1), a5_level());
  auto w2 = nuclear_window(spec2, 0, 4);
  auto sh = nuclear_window(shift_spec(spec2, 1), 0, 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(w2.entries[i + 1].order == sh.entries[i].order);
  for (const auto& e : w2.entries) {
    CHECK(e.order == 3600);
    CHECK(oracle::closure(e.group.generators(), e.group.degree()).size() == 3600);
  }
  auto h = bsgs({parse_cycles("(0 1 2)", 10), parse_cycles("(5 6 7)", 10)});
  auto wh = nuclear_window(delta(spec2, h), 0, 2);
  for (const auto& e : wh.entries) CHECK(e.order == 9);
}

TEST_CASE("is_proper_delta") {
  auto spec = a5_spec();
  auto pc = is_proper_delta(spec, a4());
  CHECK(pc.proper);
  REQUIRE(pc.witness);
  CHECK_FALSE(a4().contains(*pc.witness));
  CHECK((*pc.witness)[4] != 4);
  CHECK_FALSE(is_proper_delta(spec, spec.group()).proper);
  CHECK(is_proper_delta(spec, PermutationGroup(5)).proper);
  for (const auto& h : subgroups_2gen(spec.group())) {
    auto c = is_proper_delta(spec, h);
    CHECK(c.proper == (h.order() < 60));
    for (const auto& [a, b] : c.level_orders) {
      CHECK(a == h.order());
      CHECK(b == 60);
    }
  }
}

TEST_CASE("classify examples") {
  auto spec = a5_spec();
  const auto& f = spec.frame;
  const Permutation g = cyc("(0 1 2 3 4)");
  auto c0 = classify(spec.spinal_element(g));
  CHECK(c0.k == 0);
  REQUIRE(c0.forms.size() == 1);
  CHECK(c0.forms[0].component == g);
  CHECK(c0.forms[0].vertex == Vertex());
  CHECK_FALSE(c0.forms[0].remainder);
  CHECK_FALSE(c0.top);

  for (const auto& a : fixture::a5().elements()) {
    if (a[0] == 0) continue;
    auto w = spec.spinal_element(g).conjugate(Element::rooted(f, 0, a));
    auto c = classify(w);
    CHECK(c.k == 1);
    REQUIRE(c.forms.size() == 2);
    bool found = false;
    for (const auto& form : c.forms) {
      if (form.vertex == Vertex({a[0]})) {
        found = true;
        CHECK(form.component == g);
        CHECK_FALSE(form.remainder);
      } else {
        CHECK(form.component.is_identity());
        CHECK(form.vertex == Vertex({a[1]}));
      }
    }
    CHECK(found);
    CHECK(reconstruct(w, c) == w);
  }

  // Finitary words are classified at their depth bound with trivial components.
  auto fin = Element::rooted(f, 0, cyc("(0 1 2)")) *
             insert(Vertex({3}), Element::rooted(f, 1, cyc("(1 2 3)")));
  auto cf = classify(fin);
  CHECK(cf.all_finitary());
  CHECK(reconstruct(fin, cf) == fin);
  CHECK(classify(spec.identity()).forms.empty());
}

TEST_CASE("classification reconstructs random words") {
  auto spec = a5_spec();
  std::mt19937 rng(20261016);
  for (int t = 0; t < 120; ++t) {
    auto w = fixture::random_word(spec.frame, 1 + rng() % 12, rng);
    auto c = classify(w);
    CHECK(c.k <= contraction_bound(w));
    auto back = reconstruct(w, c);
    CHECK(back == w);
    CHECK(back.equal_to_depth(w, c.k + 4));
    // Components match the spinal part seen deep along each vertex's ray.
    for (const auto& form : c.forms) {
      auto s = w.section(form.vertex);
      const std::size_t deep = 1 + fin_depth(form.remainder);
      Vertex down;
      for (std::size_t i = 0; i < deep; ++i) down = down.child(spec.frame->ray_step(c.k + i));
      CHECK(s.section(down) == spec.spinal_element(form.component, c.k + deep));
    }
    // Minimality.
    if (c.k > 0) CHECK_FALSE(classify_at(w, c.k - 1));
  }
}

TEST_CASE("conjugation stability of the nucleus") {
  auto spec = a5_spec();
  std::mt19937 rng(7);
  auto elems = fixture::a5().elements();
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 1 + rng() % 2;
    // A random finitary element of depth n with labels in A5.
    Element a = spec.identity();
    for (const auto& v : layer_vertices(spec.frame->valency(), n - 1))
      a = a * insert(v, Element::rooted(spec.frame, n - 1, elems[rng() % 60]));
    a = a * Element::rooted(spec.frame, 0, elems[rng() % 60]);
    const auto& b = elems[rng() % 60];
    auto w = spec.spinal_element(b).conjugate(a);
    auto c = classify_at(w, n);
    REQUIRE(c);
    std::size_t spinal = 0;
    for (const auto& form : c->forms) {
      if (form.component.is_identity()) continue;
      ++spinal;
      CHECK(form.component == b);
    }
    CHECK(spinal == (b.is_identity() ? 0 : 1));
  }
}

TEST_CASE("spinal product law") {
  auto spec = a5_spec();
  auto elems = fixture::a5().elements();
  std::mt19937 rng(11);
  for (int t = 0; t < 30; ++t) {
    const auto& g = elems[rng() % 60];
    const auto& h = elems[rng() % 60];
    auto prod = spec.spinal_element(g) * spec.spinal_element(h);
    CHECK(prod == spec.spinal_element(g * h));
    CHECK(classify(prod).forms.size() == ((g * h).is_identity() ? 0 : 1));
  }
}

TEST_CASE("halving in one contraction round") {
  auto spec = a5_spec();
  auto elems = fixture::a5().elements();
  std::mt19937 rng(3);
  for (int t = 0; t < 60; ++t) {
    const std::size_t m = 1 + rng() % 12;
    Element w = spec.identity();
    Point last = 99;
    for (std::size_t i = 0; i < m; ++i) {
      Permutation a;
      do a = elems[rng() % 60];
      while (a[0] == last);
      last = a[0];
      auto b = elems[1 + rng() % 59];
      w = w * spec.spinal_element(b).conjugate(Element::rooted(spec.frame, 0, a));
    }
    for (Point x = 0; x < 5; ++x) CHECK(w.section(x).spinal_letter_count() <= (m + 2) / 2);
  }
}

TEST_CASE("member_delta") {
  auto spec = a5_spec();
  const auto h = a4();
  using V = DeltaMembership::Verdict;

  auto yes = member_delta(spec, h, spec.spinal_element(cyc("(0 1 2)")));
  CHECK(yes.verdict == V::yes);
  CHECK(evaluate_witness(spec, h, yes.witness) == spec.spinal_element(cyc("(0 1 2)")));

  auto no = member_delta(spec, h, spec.spinal_element(cyc("(0 4)(1 2)")));
  CHECK(no.verdict == V::no);
  REQUIRE(no.refutation);
  CHECK(no.refutation->component == cyc("(0 4)(1 2)"));
  CHECK_FALSE(h.contains(no.refutation->component));

  auto fin = Element::rooted(spec.frame, 0, cyc("(0 1 2 3 4)")) *
             insert(Vertex({2}), Element::rooted(spec.frame, 1, cyc("(0 4 3)")));
  CHECK(member_delta(spec, h, fin).verdict == V::yes);
  CHECK(member_delta(spec, PermutationGroup(5), fin).verdict == V::yes);
  CHECK(member_delta(spec, PermutationGroup(5), spec.spinal_gens[0]).verdict == V::no);

  // Conjugates of H-spinal elements by finitary elements stay inside.
  auto conj = spec.spinal_element(cyc("(0 1)(2 3)")).conjugate(fin) * fin;
  auto r = member_delta(spec, h, conj);
  CHECK(r.verdict == V::yes);
  CHECK(evaluate_witness(spec, h, r.witness) == conj);

  // Random words: verdicts are deterministic, witnesses and refutations check out.
  std::mt19937 rng(5);
  int yes_count = 0, no_count = 0;
  for (int t = 0; t < 60; ++t) {
    auto w = fixture::random_word(spec.frame, 1 + rng() % 8, rng);
    auto a = member_delta(spec, h, w);
    auto b = member_delta(spec, h, w);
    CHECK(a.verdict == b.verdict);
    CHECK(a.verdict != V::unknown);
    if (a.verdict == V::yes) {
      ++yes_count;
      CHECK(evaluate_witness(spec, h, a.witness) == w);
      for (const auto& f : a.witness)
        if (f.spinal < 0) CHECK(fin_in_spec(spec, f.fin));
    } else if (a.verdict == V::no) {
      ++no_count;
      REQUIRE(a.refutation);
      CHECK_FALSE(h.contains(a.refutation->component));
      auto s = w.section(a.refutation->vertex);
      CHECK(s == spec.spinal_element(a.refutation->component, a.classification.k) *
                     Element::finitary(spec.frame, a.classification.k, a.refutation->remainder));
    }
  }
  CHECK(yes_count > 0);
  CHECK(no_count > 0);
}

TEST_CASE("generator words and parsing") {
  auto g = fixture::a5();
  for (const auto& x : g.elements()) {
    Permutation p = Permutation::identity(5);
    for (std::size_t i : generator_word(g, x)) p = p * g.generators()[i];
    CHECK(p == x);
  }
  CHECK_THROWS_AS(generator_word(g, cyc("(0 1)")), Error);

  auto spec = a5_spec();
  CHECK(parse_word(spec, "") == spec.identity());
  CHECK(parse_word(spec, "r1 sG2^-1") == spec.rooted_gens[0] * spec.spinal_gens[1].inverse());
  CHECK_THROWS_AS(parse_word(spec, "r3"), InputError);
  CHECK_THROWS_AS(parse_word(spec, "x1"), InputError);
  CHECK_THROWS_AS(parse_word(spec, "sG"), InputError);
  CHECK_THROWS_AS(parse_word(spec, "r0"), InputError);

  auto t = spec_transporter(spec, Vertex({0, 0}), Vertex({3, 2}));
  auto e = Element::finitary(spec.frame, 0, t);
  CHECK(e.act(Vertex({0, 0})) == Vertex({3, 2}));
  CHECK(e.section(Vertex({0, 0})).is_identity());
  CHECK(fin_in_spec(spec, t));
}
