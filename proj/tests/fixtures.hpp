#pragma once

#include <memory>
#include <random>

#include "spinal/permgroup.hpp"
#include "spinal/treeaut.hpp"

namespace fixture {

using namespace spinal;

inline Permutation cyc(const char* s, std::size_t n = 5) { return parse_cycles(s, n); }

inline PermutationGroup a5() { return bsgs({cyc("(0 1 2)"), cyc("(0 1 2 3 4)")}); }

// The tree of the A5 diagonal scenario: 5 children everywhere, ray 000...,
// spinal sequence 111..., and rho_n the natural action for every n.
inline std::shared_ptr<const TreeFrame> a5_frame() {
  auto rho = std::make_shared<const Homomorphism>(Homomorphism::identity(a5()));
  return std::make_shared<TreeFrame>(ValencySequence(EventuallyPeriodic<std::size_t>::constant(5)),
                                     Ray::constant(0), SpinalSequence::constant(1),
                                     EventuallyPeriodic<std::shared_ptr<const Homomorphism>>::constant(rho),
                                     5);
}

// Random words over the rooted and spinal images of the A5 generators.
inline Element random_word(const std::shared_ptr<const TreeFrame>& frame, std::size_t length,
                           std::mt19937& rng) {
  const std::vector<Permutation> gens{cyc("(0 1 2)"), cyc("(0 1 2 3 4)")};
  Element w(frame, 0);
  for (std::size_t i = 0; i < length; ++i) {
    const auto pick = rng() % 4;
    Element g = pick < 2 ? Element::rooted(frame, 0, gens[pick])
                         : Element::spinal(frame, 0, gens[pick - 2]);
    w = w * (rng() % 2 ? g : g.inverse());
  }
  return w;
}

}  // namespace fixture
