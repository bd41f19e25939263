#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spinal/perm.hpp"
#include "spinal/permgroup.hpp"
#include "spinal/tree.hpp"

namespace spinal {

// A finitary automorphism as a labelled tree of finite depth. nullptr is the
// identity; nodes are normalized so structurally different trees are
// different automorphisms.
struct FinNode;
using Fin = std::shared_ptr<const FinNode>;

struct FinNode {
  Permutation label;
  std::vector<Fin> children;  // empty when every child section is trivial
  std::size_t hash = 0;
  std::size_t depth = 0;
};

Fin make_fin(Permutation label, std::vector<Fin> children);
Fin fin_rooted(const Permutation& p);
Fin fin_multiply(const Fin& a, const Fin& b);
Fin fin_inverse(const Fin& a);
Fin fin_child(const Fin& a, Point x);
Point fin_act(const Fin& a, Point x);
bool fin_equal(const Fin& a, const Fin& b);
std::size_t fin_depth(const Fin& a);

// A spinal letter: the insertion at `at` of s_comp, where s_comp lives at the
// level of `at` below the element it belongs to.
struct Spin {
  std::vector<Point> at;
  Permutation comp;
  friend bool operator==(const Spin&, const Spin&) = default;
};

using Letter = std::variant<Fin, Spin>;

/// The tree data shared by all elements: alphabets, the ray and spinal
/// sequence, and the labels rho_{n+1}(g) that s_g places at the x-child of u_n.
class TreeFrame {
 public:
  TreeFrame(ValencySequence valency, Ray ray, SpinalSequence spinal,
            EventuallyPeriodic<std::shared_ptr<const Homomorphism>> rho,
            std::size_t component_degree);

  const ValencySequence& valency() const { return valency_; }
  const Ray& ray() const { return ray_; }
  const SpinalSequence& spinal() const { return spinal_; }
  const EventuallyPeriodic<std::shared_ptr<const Homomorphism>>& rho() const { return rho_; }

  std::size_t degree(std::size_t level) const { return valency_.degree(level); }
  Point ray_step(std::size_t level) const { return ray_.term(level); }
  Point spinal_step(std::size_t level) const { return spinal_.term(level); }
  std::size_t component_degree() const { return component_degree_; }
  const Permutation& spinal_label(std::size_t level, const Permutation& g) const;

  // Levels with identical subtrees map to the same canonical level.
  std::size_t canonical_level(std::size_t level) const { return per_.canonical(level); }
  const Periodicity& periodicity() const { return per_; }

  std::shared_ptr<const TreeFrame> shifted(std::size_t m) const;

  void clear_caches() const;

 private:
  friend class Element;
  struct Caches;

  ValencySequence valency_;
  Ray ray_;
  SpinalSequence spinal_;
  EventuallyPeriodic<std::shared_ptr<const Homomorphism>> rho_;
  std::size_t component_degree_;
  Periodicity per_;
  std::shared_ptr<Caches> caches_;
};

/// Portrait truncated at a depth: labels of all vertices of length < depth.
/// Nodes at the truncation depth carry no label.
struct Portrait {
  std::optional<Permutation> label;
  std::vector<Portrait> children;
};

/// An automorphism of the subtree below level `level`, stored as a normalized
/// word of letters and evaluated lazily through the section law.
class Element {
 public:
  Element(std::shared_ptr<const TreeFrame> frame, std::size_t level);

  static Element finitary(std::shared_ptr<const TreeFrame> frame, std::size_t level, Fin f);
  static Element rooted(std::shared_ptr<const TreeFrame> frame, std::size_t level,
                        const Permutation& p);
  static Element spinal(std::shared_ptr<const TreeFrame> frame, std::size_t level,
                        const Permutation& g);
  static Element from_letters(std::shared_ptr<const TreeFrame> frame, std::size_t level,
                              const std::vector<Letter>& letters);

  const std::shared_ptr<const TreeFrame>& frame() const { return frame_; }
  std::size_t level() const { return level_; }
  const std::vector<Letter>& letters() const { return data_->word; }
  bool is_trivial_word() const { return data_->word.empty(); }

  Element operator*(const Element& rhs) const;
  Element inverse() const;
  Element conjugate(const Element& by) const;  // by^-1 * this * by
  Element commutator(const Element& h) const;  // this^-1 h^-1 this h

  Permutation root_label() const;
  Element section(Point x) const;
  Element section(const Vertex& v) const;
  Point act_child(Point x) const;
  Vertex act(const Vertex& v) const;

  Portrait portrait(std::size_t depth) const;
  bool equal_to_depth(const Element& other, std::size_t depth) const;

  // Exact decisions: the word problem is solved by exploring the finitely
  // many distinct sections.
  bool is_identity() const;
  bool operator==(const Element& other) const;
  std::optional<Fin> as_finitary() const;

  std::size_t letter_count() const { return data_->word.size(); }
  std::size_t spinal_letter_count() const;
  // Largest depth of a finitary letter or insertion path in the word.
  std::size_t finitary_depth() const;

  std::string to_string() const;

  void clear_cache() const;

 private:
  struct Data {
    std::vector<Letter> word;
    std::size_t hash = 0;
    mutable std::mutex mutex;
    mutable std::vector<std::shared_ptr<const Element>> children;  // memoized sections
  };
  Element(std::shared_ptr<const TreeFrame> frame, std::size_t level,
          std::shared_ptr<const Data> data);
  static Element make(std::shared_ptr<const TreeFrame> frame, std::size_t level,
                      std::vector<Letter> word);
  Element compute_section(Point x) const;
  void check_same_tree(const Element& other) const;

  friend Element insert(const Vertex& v, const Element& a);

  std::shared_ptr<const TreeFrame> frame_;
  std::size_t level_;
  std::shared_ptr<const Data> data_;
};

// The element acting as a below v and trivially elsewhere on v's layer.
Element insert(const Vertex& v, const Element& a);

// Builds the finitary element that moves `from` to `to` (both of the same
// length) and has trivial section at `from`; labels at level n are drawn from
// the given groups, which must be transitive.
Fin transporter(const TreeFrame& frame, std::size_t level, const Vertex& from, const Vertex& to,
                const std::function<const PermutationGroup&(std::size_t)>& groups);

// Inserts a finitary element at a vertex.
Fin fin_insert(const TreeFrame& frame, std::size_t level, const Vertex& v, const Fin& f);

// Every label of f lies in the group for its level.
bool fin_labels_in(const Fin& f, std::size_t level,
                   const std::function<const PermutationGroup&(std::size_t)>& groups);

std::string format_fin(const Fin& f);

}  // namespace spinal
