#include "spinal/permgroup.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "spinal/error.hpp"

namespace spinal {

PermutationGroup::PermutationGroup(std::size_t degree) : degree_(degree) {
  if (degree == 0) throw Error("group degree must be at least 1");
}

PermutationGroup::PermutationGroup(std::vector<Permutation> generators, std::size_t degree)
    : degree_(degree), generators_(std::move(generators)) {
  if (degree == 0) throw Error("group degree must be at least 1");
  for (const auto& g : generators_) {
    if (g.degree() != degree_)
      throw Error("generator " + g.to_string() + " has degree " + std::to_string(g.degree()) +
                  ", expected " + std::to_string(degree_));
  }
  for (const auto& g : generators_) {
    if (g.is_identity()) continue;
    if (sift(g).residue.is_identity()) continue;
    add_generator(0, g);
  }
  order_ = 1;
  for (const auto& l : levels_) order_ *= l.orbit.size();
}

void PermutationGroup::add_generator(std::size_t i, const Permutation& g) {
  if (i == levels_.size()) {
    Level l;
    l.base_point = g.first_moved();
    l.slot.assign(degree_, -1);
    l.slot[l.base_point] = 0;
    l.transversal.push_back(Permutation::identity(degree_));
    l.orbit.push_back(l.base_point);
    levels_.push_back(std::move(l));
  }
  levels_[i].gens.push_back(g);

  // Schreier generators still to be tested, as (orbit position, generator index).
  std::deque<std::pair<std::size_t, std::size_t>> todo;
  const std::size_t newest = levels_[i].gens.size() - 1;
  for (std::size_t pos = 0; pos < levels_[i].orbit.size(); ++pos) todo.emplace_back(pos, newest);

  while (!todo.empty()) {
    auto [pos, gi] = todo.front();
    todo.pop_front();
    Level& l = levels_[i];
    const Point p = l.orbit[pos];
    const Permutation& s = l.gens[gi];
    const Point q = s[p];
    const Permutation& up = l.transversal[static_cast<std::size_t>(l.slot[p])];
    if (l.slot[q] < 0) {
      l.slot[q] = static_cast<std::int32_t>(l.transversal.size());
      l.transversal.push_back(up * s);
      l.orbit.push_back(q);
      const std::size_t qpos = l.orbit.size() - 1;
      for (std::size_t k = 0; k < l.gens.size(); ++k) todo.emplace_back(qpos, k);
      continue;
    }
    Permutation h = up * s * l.transversal[static_cast<std::size_t>(l.slot[q])].inverse();
    if (h.is_identity()) continue;
    SiftResult r = sift(h, i + 1);
    if (!r.residue.is_identity()) add_generator(i + 1, r.residue);
  }
}

PermutationGroup::SiftResult PermutationGroup::sift(const Permutation& p,
                                                    std::size_t from_level) const {
  if (p.degree() != degree_)
    throw Error("degree mismatch: element of degree " + std::to_string(p.degree()) +
                " tested against group of degree " + std::to_string(degree_));
  Permutation g = p;
  std::size_t i = from_level;
  for (; i < levels_.size(); ++i) {
    const Level& l = levels_[i];
    const Point img = g[l.base_point];
    if (l.slot[img] < 0) break;
    g *= l.transversal[static_cast<std::size_t>(l.slot[img])].inverse();
  }
  return {std::move(g), i};
}

bool PermutationGroup::contains(const Permutation& p) const {
  return sift(p).residue.is_identity();
}

std::vector<Point> PermutationGroup::base() const {
  std::vector<Point> b;
  for (const auto& l : levels_) b.push_back(l.base_point);
  return b;
}

std::vector<Permutation> PermutationGroup::strong_generators() const {
  std::vector<Permutation> out;
  for (const auto& l : levels_)
    for (const auto& g : l.gens)
      if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
  return out;
}

bool PermutationGroup::verify_chain() const {
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const Level& l = levels_[i];
    for (const auto& g : l.gens) {
      for (std::size_t j = 0; j < i; ++j)
        if (g[levels_[j].base_point] != levels_[j].base_point) return false;
      if (!sift(g, i).residue.is_identity()) return false;
    }
    for (Point p : l.orbit) {
      const auto& u = l.transversal[static_cast<std::size_t>(l.slot[p])];
      if (u[l.base_point] != p) return false;
      for (const auto& s : l.gens) {
        const Point q = s[p];
        if (l.slot[q] < 0) return false;
        Permutation h = u * s * l.transversal[static_cast<std::size_t>(l.slot[q])].inverse();
        if (!sift(h, i + 1).residue.is_identity()) return false;
      }
    }
  }
  return true;
}

std::vector<Permutation> PermutationGroup::elements(std::size_t bound) const {
  if (order_ > bound)
    throw Error("group order " + order_string(order_) + " exceeds enumeration bound " +
                std::to_string(bound));
  std::vector<Permutation> out{Permutation::identity(degree_)};
  // G^(i) = G^(i+1) * U_i, built from the deepest level upward
  for (std::size_t i = levels_.size(); i-- > 0;) {
    std::vector<Permutation> next;
    next.reserve(out.size() * levels_[i].transversal.size());
    for (const auto& x : out)
      for (const auto& u : levels_[i].transversal) next.push_back(x * u);
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool operator==(const PermutationGroup& a, const PermutationGroup& b) {
  if (a.degree_ != b.degree_ || a.order_ != b.order_) return false;
  for (const auto& g : a.generators_)
    if (!b.contains(g)) return false;
  return true;
}

PermutationGroup bsgs(const std::vector<Permutation>& generators,
                      std::optional<std::size_t> degree) {
  if (!degree) {
    if (generators.empty()) throw Error("empty generator list needs an explicit degree");
    degree = generators.front().degree();
  }
  return PermutationGroup(generators, *degree);
}

bool contains(const PermutationGroup& g, const Permutation& p) { return g.contains(p); }

std::vector<Point> orbit(const PermutationGroup& g, Point i) {
  if (i >= g.degree()) throw Error("point out of range");
  std::vector<bool> seen(g.degree(), false);
  std::vector<Point> out{i};
  seen[i] = true;
  for (std::size_t k = 0; k < out.size(); ++k)
    for (const auto& s : g.generators()) {
      Point q = s[out[k]];
      if (!seen[q]) {
        seen[q] = true;
        out.push_back(q);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_transitive(const PermutationGroup& g) { return orbit(g, 0).size() == g.degree(); }

bool is_regular(const PermutationGroup& g) {
  return is_transitive(g) && g.order() == g.degree();
}

PermutationGroup normal_closure(const PermutationGroup& g,
                                const std::vector<Permutation>& elements) {
  std::vector<Permutation> gens;
  for (const auto& e : elements)
    if (!e.is_identity()) gens.push_back(e);
  PermutationGroup n(gens, g.degree());
  bool grown = true;
  while (grown) {
    grown = false;
    const auto current = n.generators();
    for (const auto& x : current) {
      for (const auto& s : g.generators()) {
        Permutation c = conjugate(x, s);
        if (!n.contains(c)) {
          gens.push_back(c);
          n = PermutationGroup(gens, g.degree());
          grown = true;
        }
      }
    }
  }
  return n;
}

PermutationGroup derived_subgroup(const PermutationGroup& g) {
  std::vector<Permutation> comms;
  const auto& gens = g.generators();
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) comms.push_back(commutator(gens[i], gens[j]));
  return normal_closure(g, comms);
}

bool is_perfect(const PermutationGroup& g) { return derived_subgroup(g).order() == g.order(); }

bool is_subgroup(const PermutationGroup& h, const PermutationGroup& g) {
  if (h.degree() != g.degree()) return false;
  for (const auto& x : h.generators())
    if (!g.contains(x)) return false;
  return true;
}

bool is_normal(const PermutationGroup& g, const PermutationGroup& h) {
  for (const auto& x : h.generators())
    for (const auto& s : g.generators())
      if (!h.contains(conjugate(x, s))) return false;
  return true;
}

namespace {

// Minimal representatives of the right cosets H r, in ascending order.
std::vector<Permutation> right_coset_representatives(const PermutationGroup& g,
                                                     const PermutationGroup& h,
                                                     std::size_t index_bound) {
  if (!is_subgroup(h, g)) throw Error("subgroup is not contained in the group");
  const Order index = g.order() / h.order();
  if (index > index_bound)
    throw Error("index overflow: index " + order_string(index) + " exceeds bound " +
                std::to_string(index_bound));
  const auto elems = g.elements();
  const auto helems = h.elements();
  std::unordered_map<Permutation, bool, PermutationHash> assigned;
  std::vector<Permutation> reps;
  for (const auto& e : elems) {
    if (assigned.count(e)) continue;
    reps.push_back(e);
    for (const auto& x : helems) assigned.emplace(x * e, true);
  }
  return reps;
}

}  // namespace

PermutationGroup core(const PermutationGroup& g, const PermutationGroup& h) {
  const auto reps = right_coset_representatives(g, h, kEnumerationBound);
  // x lies in the core iff x is in every conjugate H^r, i.e. r x r^-1 in H
  std::vector<Permutation> kept;
  for (const auto& x : h.elements()) {
    bool in_all = true;
    for (const auto& r : reps) {
      if (!h.contains(r * x * r.inverse())) {
        in_all = false;
        break;
      }
    }
    if (in_all) kept.push_back(x);
  }
  return PermutationGroup(canonical_generators(kept), g.degree());
}

PermutationGroup point_stabilizer(const PermutationGroup& g, Point p) {
  std::vector<Permutation> fixing;
  for (const auto& x : g.elements())
    if (x[p] == p) fixing.push_back(x);
  return PermutationGroup(canonical_generators(fixing), g.degree());
}

ElementIndex::ElementIndex(const PermutationGroup& g, std::size_t bound)
    : elements_(g.elements(bound)) {
  lookup_.reserve(elements_.size() * 2);
  for (std::uint32_t i = 0; i < elements_.size(); ++i) lookup_.emplace(elements_[i], i);
}

std::optional<std::uint32_t> ElementIndex::find(const Permutation& p) const {
  auto it = lookup_.find(p);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t ElementIndex::index_of(const Permutation& p) const {
  auto r = find(p);
  if (!r) throw Error("element " + p.to_string() + " is not in the group");
  return *r;
}

std::uint32_t ElementIndex::multiply(std::uint32_t a, std::uint32_t b) const {
  return index_of(elements_[a] * elements_[b]);
}

Homomorphism::Homomorphism(PermutationGroup source, std::vector<Permutation> generator_images,
                           std::size_t target_degree, std::size_t bound)
    : source_(std::move(source)), images_(std::move(generator_images)),
      target_degree_(target_degree) {
  if (images_.size() != source_.generators().size())
    throw Error("homomorphism needs one image per source generator (" +
                std::to_string(source_.generators().size()) + "), got " +
                std::to_string(images_.size()));
  for (const auto& im : images_)
    if (im.degree() != target_degree_) throw Error("image degree mismatch in homomorphism");
  if (source_.order() > bound)
    throw Error("source group order exceeds enumeration bound");
  const auto one = Permutation::identity(source_.degree());
  table_.emplace(one, Permutation::identity(target_degree_));
  std::vector<Permutation> queue{one};
  for (std::size_t k = 0; k < queue.size(); ++k) {
    const Permutation e = queue[k];
    const Permutation fe = table_.at(e);
    for (std::size_t s = 0; s < images_.size(); ++s) {
      Permutation next = e * source_.generators()[s];
      Permutation fnext = fe * images_[s];
      auto [it, inserted] = table_.emplace(next, fnext);
      if (inserted) {
        queue.push_back(std::move(next));
      } else if (it->second != fnext) {
        throw Error("generator images do not define a homomorphism");
      }
    }
  }
}

Homomorphism Homomorphism::identity(const PermutationGroup& g, std::size_t bound) {
  return Homomorphism(g, g.generators(), g.degree(), bound);
}

const Permutation& Homomorphism::operator()(const Permutation& g) const {
  auto it = table_.find(g);
  if (it == table_.end()) throw Error("element " + g.to_string() + " is not in the source group");
  return it->second;
}

PermutationGroup Homomorphism::image() const { return PermutationGroup(images_, target_degree_); }

std::vector<Permutation> Homomorphism::kernel() const {
  std::vector<Permutation> k;
  for (const auto& [x, fx] : table_)
    if (fx.is_identity()) k.push_back(x);
  std::sort(k.begin(), k.end());
  return k;
}

CosetAction coset_action(const PermutationGroup& g, const PermutationGroup& h,
                         std::size_t index_bound) {
  CosetAction out;
  out.representatives = right_coset_representatives(g, h, index_bound);
  out.point_count = out.representatives.size();
  const auto helems = h.elements();
  std::unordered_map<Permutation, Point, PermutationHash> coset_of;
  for (Point i = 0; i < out.representatives.size(); ++i)
    for (const auto& x : helems) coset_of.emplace(x * out.representatives[i], i);
  for (const auto& s : g.generators()) {
    std::vector<Point> im(out.point_count);
    for (Point i = 0; i < out.point_count; ++i) im[i] = coset_of.at(out.representatives[i] * s);
    out.images.emplace_back(std::move(im));
  }
  return out;
}

Permutation TauAction::apply(const Permutation& g) const {
  // Tabulates on every call; bulk callers build a Homomorphism once instead.
  Homomorphism h(source, images, point_count);
  return h(g);
}

PermutationGroup TauAction::image_group() const { return PermutationGroup(images, point_count); }

TauAction natural_action(const PermutationGroup& g) {
  return TauAction{g, g.degree(), g.generators()};
}

TauCheck check_tau_action(const TauAction& t) {
  TauCheck c;
  PermutationGroup img = t.image_group();
  c.transitive = is_transitive(img);
  Homomorphism h(t.source, t.images, t.point_count);
  c.faithful = h.kernel().size() == 1;
  c.non_regular = c.transitive && img.order() != img.degree();
  return c;
}

std::vector<Permutation> canonical_generators(const std::vector<Permutation>& sorted_elements) {
  std::vector<Permutation> gens;
  if (sorted_elements.empty()) return gens;
  const std::size_t degree = sorted_elements.front().degree();
  PermutationGroup current(degree);
  for (const auto& x : sorted_elements) {
    if (current.order() == sorted_elements.size()) break;
    if (current.contains(x)) continue;
    gens.push_back(x);
    current = PermutationGroup(gens, degree);
  }
  return gens;
}

std::string order_string(const Order& o) { return o.str(); }

}  // namespace spinal
