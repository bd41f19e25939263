#include <algorithm>
#include <set>

#include "spinal/error.hpp"
#include "spinal/permgroup.hpp"

namespace spinal {

namespace {

using ElementSet = boost::dynamic_bitset<>;

std::vector<std::uint32_t> members(const ElementSet& s) {
  std::vector<std::uint32_t> out;
  out.reserve(s.count());
  for (auto i = s.find_first(); i != ElementSet::npos; i = s.find_next(i))
    out.push_back(static_cast<std::uint32_t>(i));
  return out;
}

// Multiplication through a full Cayley table for small groups.
class Multiplier {
 public:
  explicit Multiplier(const ElementIndex& idx) : idx_(idx), n_(idx.size()) {
    if (n_ > 4096) return;
    table_.resize(n_ * n_);
    for (std::uint32_t a = 0; a < n_; ++a)
      for (std::uint32_t b = 0; b < n_; ++b) table_[a * n_ + b] = idx.multiply(a, b);
  }
  std::uint32_t operator()(std::uint32_t a, std::uint32_t b) const {
    return table_.empty() ? idx_.multiply(a, b) : table_[a * n_ + b];
  }
  std::size_t size() const { return n_; }

 private:
  const ElementIndex& idx_;
  std::size_t n_;
  std::vector<std::uint32_t> table_;
};

ElementSet closure(const Multiplier& mul, std::uint32_t identity,
                   std::initializer_list<std::uint32_t> gens) {
  ElementSet s(mul.size());
  std::vector<std::uint32_t> found{identity};
  s.set(identity);
  for (std::size_t k = 0; k < found.size(); ++k)
    for (std::uint32_t g : gens) {
      const std::uint32_t j = mul(found[k], g);
      if (!s.test(j)) {
        s.set(j);
        found.push_back(j);
      }
    }
  return s;
}

// Representatives of the conjugacy classes of elements, smallest index first.
std::vector<std::uint32_t> class_representatives(const ElementIndex& idx,
                                                 const PermutationGroup& g) {
  std::vector<bool> seen(idx.size(), false);
  std::vector<std::uint32_t> reps;
  for (std::uint32_t i = 0; i < idx.size(); ++i) {
    if (seen[i]) continue;
    reps.push_back(i);
    std::vector<std::uint32_t> cls{i};
    seen[i] = true;
    for (std::size_t k = 0; k < cls.size(); ++k)
      for (const auto& s : g.generators()) {
        const std::uint32_t j = idx.index_of(conjugate(idx[cls[k]], s));
        if (!seen[j]) {
          seen[j] = true;
          cls.push_back(j);
        }
      }
  }
  return reps;
}

}  // namespace

SubgroupLattice::SubgroupLattice(const PermutationGroup& g, std::size_t bound)
    : group_(g), index_(g, bound) {
  const std::uint32_t id = index_.index_of(Permutation::identity(g.degree()));
  const auto& elems = index_.elements();

  // Every <x, y> is conjugate to <a, y'> with a a class representative, so
  // scanning those pairs and closing under conjugation reaches them all.
  const Multiplier mul(index_);
  std::set<ElementSet> found;
  std::vector<ElementSet> seeds;
  for (std::uint32_t a : class_representatives(index_, g)) {
    for (std::uint32_t b = 0; b < elems.size(); ++b) {
      ElementSet s = closure(mul, id, {a, b});
      if (found.insert(s).second) seeds.push_back(std::move(s));
    }
  }
  std::set<ElementSet> all;
  for (const auto& seed : seeds) {
    if (!all.insert(seed).second) continue;
    // conjugacy orbit under the generators
    std::vector<ElementSet> orbit{seed};
    for (std::size_t k = 0; k < orbit.size(); ++k) {
      const auto mem = members(orbit[k]);
      for (const auto& c : g.generators()) {
        const Permutation ci = c.inverse();
        ElementSet conj(index_.size());
        for (std::uint32_t x : mem) conj.set(index_.index_of(ci * elems[x] * c));
        if (all.insert(conj).second) orbit.push_back(std::move(conj));
      }
    }
  }

  std::vector<std::pair<std::vector<std::uint32_t>, ElementSet>> keyed;
  keyed.reserve(all.size());
  for (const auto& s : all) keyed.emplace_back(members(s), s);
  std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) {
    if (x.first.size() != y.first.size()) return x.first.size() < y.first.size();
    return x.first < y.first;
  });
  for (auto& [mem, s] : keyed) {
    std::vector<Permutation> sorted;
    sorted.reserve(mem.size());
    for (std::uint32_t x : mem) sorted.push_back(elems[x]);
    subgroups_.emplace_back(canonical_generators(sorted), g.degree());
    sets_.push_back(std::move(s));
  }
}

std::vector<std::size_t> SubgroupLattice::maximal() const {
  const std::size_t n = index_.size();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    const std::size_t oi = sets_[i].count();
    if (oi == n) continue;
    bool is_max = true;
    for (std::size_t j = 0; j < sets_.size() && is_max; ++j) {
      const std::size_t oj = sets_[j].count();
      if (oj <= oi || oj == n || oj % oi != 0) continue;
      if (sets_[i].is_subset_of(sets_[j])) is_max = false;
    }
    if (is_max) out.push_back(i);
  }
  return out;
}

bool SubgroupLattice::is_normal(std::size_t i) const {
  const auto& s = sets_[i];
  for (auto x = s.find_first(); x != ElementSet::npos; x = s.find_next(x))
    for (const auto& g : group_.generators())
      if (!s.test(index_.index_of(conjugate(index_[x], g)))) return false;
  return true;
}

std::vector<std::size_t> SubgroupLattice::non_normal_maximal() const {
  std::vector<std::size_t> out;
  for (std::size_t i : maximal())
    if (!is_normal(i)) out.push_back(i);
  return out;
}

std::vector<PermutationGroup> subgroups_2gen(const PermutationGroup& g, std::size_t bound) {
  return SubgroupLattice(g, bound).subgroups();
}

std::vector<PermutationGroup> maximal_subgroups(const PermutationGroup& g, std::size_t bound) {
  SubgroupLattice lat(g, bound);
  std::vector<PermutationGroup> out;
  for (std::size_t i : lat.maximal()) out.push_back(lat.subgroups()[i]);
  return out;
}

std::vector<PermutationGroup> non_normal_maximal(const PermutationGroup& g, std::size_t bound) {
  SubgroupLattice lat(g, bound);
  std::vector<PermutationGroup> out;
  for (std::size_t i : lat.non_normal_maximal()) out.push_back(lat.subgroups()[i]);
  return out;
}

PermutationGroup normalizer(const PermutationGroup& g, const PermutationGroup& h,
                            std::size_t bound) {
  if (!is_subgroup(h, g)) throw Error("subgroup is not contained in the group");
  std::vector<Permutation> keep;
  for (const auto& x : g.elements(bound)) {
    bool stable = true;
    for (const auto& y : h.generators())
      if (!h.contains(conjugate(y, x))) {
        stable = false;
        break;
      }
    if (stable) keep.push_back(x);
  }
  return PermutationGroup(canonical_generators(keep), g.degree());
}

TauAction tau_action(const PermutationGroup& g, std::size_t bound) {
  SubgroupLattice lat(g, bound);
  const std::size_t n = lat.index().size();
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const std::size_t o = lat.elements_of(i).count();
    if (o > 1 && o < n) candidates.push_back(i);
  }
  // minimal index first; the lattice order breaks ties
  std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    return lat.elements_of(a).count() > lat.elements_of(b).count();
  });
  for (std::size_t i : candidates) {
    const auto& h = lat.subgroups()[i];
    if (!core(g, h).is_trivial()) continue;
    CosetAction ca = coset_action(g, h, bound);
    return TauAction{g, ca.point_count, std::move(ca.images)};
  }
  throw Error("tau search exhausted");
}

}  // namespace spinal
