#include "doctest.h"

#include <random>

#include "fixtures.hpp"
#include "spinal/error.hpp"
#include "spinal/tree.hpp"

using namespace spinal;
using fixture::cyc;

namespace {

EventuallyPeriodic<std::size_t> seq(std::vector<std::size_t> pre, std::vector<std::size_t> per) {
  return {std::move(pre), std::move(per)};
}

std::shared_ptr<const TauAction> natural_a5() {
  return std::make_shared<const TauAction>(natural_action(fixture::a5()));
}

}  // namespace

TEST_CASE("eventually periodic sequences") {
  const auto s = seq({7, 8}, {1, 2, 3});
  CHECK(s.term(0) == 7);
  CHECK(s.term(2) == 1);
  CHECK(s.term(6) == 2);
  CHECK_THROWS_AS(seq({1}, {}), Error);
  std::mt19937 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> pre(rng() % 4), per(1 + rng() % 4);
    for (auto& x : pre) x = rng() % 3;
    for (auto& x : per) x = rng() % 3;
    const EventuallyPeriodic<std::size_t> e(pre, per);
    for (std::size_t m = 0; m < 12; ++m) {
      const auto sh = e.shifted(m);
      for (std::size_t n = 0; n < 20; ++n) CHECK(sh.term(n) == e.term(n + m));
    }
    const auto c = e.canonical();
    CHECK(c == e);
    CHECK(c.prefix().size() <= pre.size());
    CHECK(c.period().size() <= per.size());
  }
  CHECK(seq({3}, {3, 3}).canonical().prefix().empty());
  CHECK(seq({3}, {3, 3}).canonical().period().size() == 1);
}

TEST_CASE("layers, rays and spinal neighbours") {
  const ValencySequence five(EventuallyPeriodic<std::size_t>::constant(5));
  CHECK(layer_size(five, 0) == 1);
  CHECK(layer_size(five, 3) == 125);
  CHECK(layer_size(ValencySequence(seq({5}, {6})), 2) == 30);
  CHECK_THROWS_AS(ValencySequence(seq({1}, {5})), Error);

  const auto u = Ray::constant(0);
  const auto x = SpinalSequence::constant(1);
  CHECK(ray_vertex(u, 2).to_string() == "0.0");
  CHECK(spinal_neighbor(u, x, 0).to_string() == "1");
  CHECK(spinal_neighbor(u, x, 2).to_string() == "0.0.1");
  CHECK(ray_vertex(u, 0).to_string().empty());
}

TEST_CASE("vertex text format") {
  CHECK(parse_vertex("").is_root());
  CHECK(parse_vertex("1.0.12").path == std::vector<Point>{1, 0, 12});
  CHECK(parse_vertex("1.0.12").to_string() == "1.0.12");
  CHECK_THROWS_AS(parse_vertex("1..2"), InputError);
  CHECK_THROWS_AS(parse_vertex("a"), InputError);
  CHECK_THROWS_AS(parse_vertex("1."), InputError);
  const ValencySequence five(EventuallyPeriodic<std::size_t>::constant(5));
  CHECK_NOTHROW(check_vertex(five, parse_vertex("4.4")));
  CHECK_THROWS_AS(check_vertex(five, parse_vertex("4.5")), InputError);
}

TEST_CASE("spinal data validation") {
  const ValencySequence five(EventuallyPeriodic<std::size_t>::constant(5));
  const auto acts = EventuallyPeriodic<std::shared_ptr<const TauAction>>::constant(natural_a5());
  // stabilizers of 0 and 1 in natural A5: compare orders and membership
  const auto img = natural_a5()->image_group();
  const auto st0 = point_stabilizer(img, 0), st1 = point_stabilizer(img, 1);
  CHECK(st0.order() == 12);
  CHECK(st0.contains(cyc("(1 2 3)")));
  CHECK_FALSE(st0.contains(cyc("(0 2 3)")));
  CHECK(st1.contains(cyc("(0 2 3)")));

  CHECK_FALSE(validate_spinal_data(five, acts, Ray::constant(0), SpinalSequence::constant(1)));
  const auto bad = validate_spinal_data(five, acts, Ray::constant(0), SpinalSequence::constant(0));
  REQUIRE(bad);
  CHECK(bad->level == 0);
  CHECK(bad->condition == "u_n x_{n+1} != u_{n+1}");
  // a violation only in the period is still found
  const auto late = validate_spinal_data(five, acts, Ray::constant(0), SpinalSequence({1, 1}, {2, 0}));
  REQUIRE(late);
  CHECK(late->level == 3);

  // regular action: stabilizers are trivial, hence equal
  const auto c3 = bsgs({cyc("(0 1 2)", 3)});
  const auto reg = std::make_shared<const TauAction>(TauAction{c3, 3, {cyc("(0 1 2)", 3)}});
  const ValencySequence three(EventuallyPeriodic<std::size_t>::constant(3));
  const auto r = validate_spinal_data(three, EventuallyPeriodic<std::shared_ptr<const TauAction>>::constant(reg),
                                      Ray::constant(0), SpinalSequence::constant(1));
  REQUIRE(r);
  CHECK(r->condition.find("stabilizers") != std::string::npos);

  CHECK_THROWS_AS(validate_spinal_data(five, acts, Ray::constant(0), SpinalSequence::constant(7)), Error);
}
