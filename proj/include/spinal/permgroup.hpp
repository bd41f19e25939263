#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "spinal/perm.hpp"

namespace spinal {

using Order = boost::multiprecision::cpp_int;

// Enumeration-based operations refuse groups larger than this by default.
inline constexpr std::size_t kEnumerationBound = 10000;

/// A permutation group stored with a base and strong generating set
/// (deterministic Schreier-Sims). Immutable after construction.
class PermutationGroup {
 public:
  explicit PermutationGroup(std::size_t degree = 1);
  PermutationGroup(std::vector<Permutation> generators, std::size_t degree);

  std::size_t degree() const { return degree_; }
  const std::vector<Permutation>& generators() const { return generators_; }
  const Order& order() const { return order_; }
  bool is_trivial() const { return levels_.empty(); }

  std::vector<Point> base() const;
  std::vector<Permutation> strong_generators() const;
  std::size_t base_length() const { return levels_.size(); }
  const std::vector<Point>& basic_orbit(std::size_t level) const {
    return levels_.at(level).orbit;
  }

  bool contains(const Permutation& p) const;

  struct SiftResult {
    Permutation residue;
    std::size_t level;  // first level where sifting stopped (base_length() if all)
  };
  SiftResult sift(const Permutation& p, std::size_t from_level = 0) const;

  // Re-checks the stabilizer-chain property: every strong generator of a
  // level fixes the earlier base points, transversals map the base point
  // correctly, and every Schreier generator sifts to the identity.
  bool verify_chain() const;

  /// All elements, in ascending lexicographic order of their image lists.
  std::vector<Permutation> elements(std::size_t bound = kEnumerationBound) const;

  friend bool operator==(const PermutationGroup& a, const PermutationGroup& b);

 private:
  struct Level {
    Point base_point = 0;
    std::vector<Permutation> gens;
    std::vector<std::int32_t> slot;  // point -> transversal index, -1 if outside orbit
    std::vector<Permutation> transversal;
    std::vector<Point> orbit;
  };

  void add_generator(std::size_t level, const Permutation& g);

  std::size_t degree_;
  std::vector<Permutation> generators_;
  std::vector<Level> levels_;
  Order order_ = 1;
};

PermutationGroup bsgs(const std::vector<Permutation>& generators,
                      std::optional<std::size_t> degree = std::nullopt);
bool contains(const PermutationGroup& g, const Permutation& p);

std::vector<Point> orbit(const PermutationGroup& g, Point i);
bool is_transitive(const PermutationGroup& g);
bool is_regular(const PermutationGroup& g);

PermutationGroup normal_closure(const PermutationGroup& g,
                                const std::vector<Permutation>& elements);
PermutationGroup derived_subgroup(const PermutationGroup& g);
bool is_perfect(const PermutationGroup& g);

bool is_subgroup(const PermutationGroup& h, const PermutationGroup& g);
bool is_normal(const PermutationGroup& g, const PermutationGroup& h);

// Largest normal subgroup of g contained in h.
PermutationGroup core(const PermutationGroup& g, const PermutationGroup& h);
PermutationGroup point_stabilizer(const PermutationGroup& g, Point p);

/// A sorted element list of a finite group with an index lookup.
class ElementIndex {
 public:
  explicit ElementIndex(const PermutationGroup& g, std::size_t bound = kEnumerationBound);

  std::size_t size() const { return elements_.size(); }
  const Permutation& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<Permutation>& elements() const { return elements_; }
  std::optional<std::uint32_t> find(const Permutation& p) const;
  std::uint32_t index_of(const Permutation& p) const;
  std::uint32_t multiply(std::uint32_t a, std::uint32_t b) const;

 private:
  std::vector<Permutation> elements_;
  std::unordered_map<Permutation, std::uint32_t, PermutationHash> lookup_;
};

/// A homomorphism given by generator images, tabulated over the whole
/// (finite) source group. Construction fails if the images do not extend.
class Homomorphism {
 public:
  Homomorphism(PermutationGroup source, std::vector<Permutation> generator_images,
               std::size_t target_degree, std::size_t bound = kEnumerationBound);

  static Homomorphism identity(const PermutationGroup& g,
                               std::size_t bound = kEnumerationBound);

  const PermutationGroup& source() const { return source_; }
  const std::vector<Permutation>& generator_images() const { return images_; }
  std::size_t target_degree() const { return target_degree_; }

  const Permutation& operator()(const Permutation& g) const;
  PermutationGroup image() const;
  std::vector<Permutation> kernel() const;

 private:
  PermutationGroup source_;
  std::vector<Permutation> images_;
  std::size_t target_degree_;
  std::unordered_map<Permutation, Permutation, PermutationHash> table_;
};

struct CosetAction {
  std::size_t point_count = 0;
  std::vector<Permutation> representatives;  // coset i is H * representatives[i]
  std::vector<Permutation> images;           // action of each generator of G
};

// Right-coset action of g on the cosets of h; cosets ordered by their minimal
// representative in ascending element order.
CosetAction coset_action(const PermutationGroup& g, const PermutationGroup& h,
                         std::size_t index_bound = kEnumerationBound);

/// A faithful, transitive, non-regular action of a finite group.
struct TauAction {
  PermutationGroup source;
  std::size_t point_count = 0;
  std::vector<Permutation> images;  // images of source.generators()

  Permutation apply(const Permutation& g) const;
  PermutationGroup image_group() const;
};

TauAction natural_action(const PermutationGroup& g);
TauAction tau_action(const PermutationGroup& g, std::size_t bound = kEnumerationBound);

struct TauCheck {
  bool transitive = false;
  bool faithful = false;
  bool non_regular = false;
  bool ok() const { return transitive && faithful && non_regular; }
};
TauCheck check_tau_action(const TauAction& t);

/// Subgroups generated by at most two elements, up to deduplication,
/// in canonical order (ascending order, then ascending element indices).
class SubgroupLattice {
 public:
  explicit SubgroupLattice(const PermutationGroup& g, std::size_t bound = kEnumerationBound);

  const PermutationGroup& group() const { return group_; }
  const ElementIndex& index() const { return index_; }
  std::size_t size() const { return sets_.size(); }
  const std::vector<PermutationGroup>& subgroups() const { return subgroups_; }
  const boost::dynamic_bitset<>& elements_of(std::size_t i) const { return sets_[i]; }

  std::vector<std::size_t> maximal() const;
  std::vector<std::size_t> non_normal_maximal() const;
  bool is_normal(std::size_t i) const;

 private:
  PermutationGroup group_;
  ElementIndex index_;
  std::vector<boost::dynamic_bitset<>> sets_;
  std::vector<PermutationGroup> subgroups_;
};

std::vector<PermutationGroup> subgroups_2gen(const PermutationGroup& g,
                                             std::size_t bound = kEnumerationBound);
std::vector<PermutationGroup> maximal_subgroups(const PermutationGroup& g,
                                                std::size_t bound = kEnumerationBound);
std::vector<PermutationGroup> non_normal_maximal(const PermutationGroup& g,
                                                 std::size_t bound = kEnumerationBound);
PermutationGroup normalizer(const PermutationGroup& g, const PermutationGroup& h,
                            std::size_t bound = kEnumerationBound);

// Generators chosen greedily from the ascending element list of a subgroup.
std::vector<Permutation> canonical_generators(const std::vector<Permutation>& sorted_elements);

std::string order_string(const Order& o);

}  // namespace spinal
