#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spinal/permgroup.hpp"
#include "spinal/tree.hpp"
#include "spinal/treeaut.hpp"

namespace spinal {

/// A finite group together with its chosen faithful transitive non-regular
/// action (the alphabet it labels).
struct LevelGroup {
  std::string name;
  PermutationGroup group;
  TauAction tau;
  PermutationGroup image;                    // tau(group) on tau.point_count points
  std::shared_ptr<const Homomorphism> hom;  // group -> image
};
using LevelGroupPtr = std::shared_ptr<const LevelGroup>;

// Uses the given action, or runs the tau finder when none is given.
LevelGroupPtr make_level_group(std::string name, PermutationGroup g,
                               std::optional<TauAction> tau = std::nullopt);

// Catalog groups: A5, A6, A7, PSL(2,7) with their natural actions, and C2.
std::vector<std::string> catalog_names();
std::optional<PermutationGroup> catalog_group(const std::string& name);
// The catalog group with its natural action; throws for groups without one.
LevelGroupPtr catalog_level_group(const std::string& name);

/// pi_n: G -> S_n and the composite rho_n = tau_n o pi_n.
struct Component {
  LevelGroupPtr target;
  Homomorphism pi;
  std::shared_ptr<const Homomorphism> rho;
};
using ComponentPtr = std::shared_ptr<const Component>;

ComponentPtr make_component(const PermutationGroup& g, LevelGroupPtr target,
                            std::vector<Permutation> generator_images);

/// G with components pi_1, pi_2, ...; components.term(i) is pi_{i+1}.
struct ResidualRep {
  PermutationGroup group;
  EventuallyPeriodic<ComponentPtr> components;
};

struct RepCheck {
  struct Level {
    std::size_t level;
    Order image_order;
    Order target_order;
  };
  std::vector<Level> levels;  // one entry per distinct component, prefix then period
  Order tail_kernel_order;    // intersection of the kernels over one period
  bool subdirect = true;
  bool infinitary = true;
  std::string violation;
  bool ok() const { return subdirect && infinitary; }
};

RepCheck check_rep(const ResidualRep& rep);

ResidualRep make_diagonal_rep(const LevelGroupPtr& g);
// Moves every component into the period, so the tail sees all of them.
ResidualRep reindex_infinitary(const ResidualRep& rep);

/// The generator package of Gamma = <S_0 u G> and the data it lives on.
struct GammaSpec {
  ResidualRep rep;
  LevelGroupPtr s0;
  Ray ray;
  SpinalSequence spinal;
  EventuallyPeriodic<LevelGroupPtr> levels;  // S_n for n >= 0
  std::shared_ptr<const TreeFrame> frame;
  std::vector<Element> rooted_gens;  // tau_0 of the generators of S_0
  std::vector<Element> spinal_gens;  // s_g for the generators g of G

  const PermutationGroup& group() const { return rep.group; }
  const PermutationGroup& label_group(std::size_t level) const { return levels.term(level)->image; }
  Element identity() const { return Element(frame, 0); }
  Element spinal_element(const Permutation& g, std::size_t level = 0) const;
  std::size_t generator_count() const { return rooted_gens.size() + spinal_gens.size(); }
};

struct BuildOptions {
  bool validate = true;
};

GammaSpec build_gamma(const ResidualRep& rep, const Ray& u, const SpinalSequence& x,
                      const LevelGroupPtr& s0, BuildOptions options = {});
GammaSpec shift_spec(const GammaSpec& spec, std::size_t m);

// insert(v, rooted tau_|v|(s)) for every vertex v with |v| < d and every
// generator s of S_|v|, vertices in lexicographic order.
std::vector<Element> fin_generators(const GammaSpec& spec, std::size_t d);

/// Delta(H) = <Fin u s_H>.
struct DeltaSpec {
  GammaSpec gamma;
  PermutationGroup subgroup;
  std::vector<Element> spinal_gens;  // s_h for the generators h of H
};

DeltaSpec delta(const GammaSpec& spec, const PermutationGroup& h);

struct NuclearWindow {
  struct Entry {
    std::size_t level;
    PermutationGroup group;  // image of the component group on one period of labels
    Order order;
  };
  std::size_t start = 0;
  std::vector<Entry> entries;
};

NuclearWindow nuclear_window(const GammaSpec& spec, std::size_t n, std::size_t length);
NuclearWindow nuclear_window(const DeltaSpec& spec, std::size_t n, std::size_t length);

struct ProperCheck {
  bool proper = false;
  std::optional<Permutation> witness;  // an element of G outside H
  std::vector<std::pair<Order, Order>> level_orders;  // (|H.sigma^n|, |G.sigma^n|) over one period
};

ProperCheck is_proper_delta(const GammaSpec& spec, const PermutationGroup& h);

/// A layer-k section written as s_b * f with f finitary.
struct SectionForm {
  Vertex vertex;
  Permutation component;  // b, trivial when the section is finitary
  Fin remainder;          // f
};

struct Classification {
  std::size_t k = 0;
  std::vector<SectionForm> forms;  // nontrivial sections only, by vertex
  Fin top;                         // the labels above layer k

  bool all_finitary() const;
  std::size_t finitary_depth() const;  // depth of the element when all_finitary()
};

// The classification at layer k if every section there has the form s_b * f.
std::optional<Classification> classify_at(const Element& w, std::size_t k);
std::size_t contraction_bound(const Element& w);
// Smallest k that works; throws "contraction failed" beyond contraction_bound.
Classification classify(const Element& w);
// w == prod_v insert(v, s_b f) * top.
Element reconstruct(const Element& like, const Classification& c);

struct DeltaMembership {
  enum class Verdict { yes, no, unknown };
  Verdict verdict = Verdict::unknown;
  Classification classification;
  // No: a section whose component lies outside H.
  std::optional<SectionForm> refutation;
  // Yes: the element as a product of finitary factors and generators of H.
  struct Factor {
    Fin fin;                // used when spinal < 0
    int spinal = -1;        // index into the generators of H
  };
  std::vector<Factor> witness;
  std::string note;
};

DeltaMembership member_delta(const GammaSpec& spec, const PermutationGroup& h, const Element& w);
Element evaluate_witness(const GammaSpec& spec, const PermutationGroup& h,
                         const std::vector<DeltaMembership::Factor>& factors);

// A word in the generators of g (indices into g.generators()) equal to x.
std::vector<std::size_t> generator_word(const PermutationGroup& g, const Permutation& x);

// Finitary element with labels from the spec's level groups, moving `from`
// to `to` with trivial section at `from`.
Fin spec_transporter(const GammaSpec& spec, const Vertex& from, const Vertex& to);
bool fin_in_spec(const GammaSpec& spec, const Fin& f, std::size_t level = 0);

// Parses words such as "r1 sG2^-1" over the spec's generators.
Element parse_word(const GammaSpec& spec, const std::string& text);

}  // namespace spinal
