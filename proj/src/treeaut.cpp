#include "spinal/treeaut.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "spinal/error.hpp"

namespace spinal {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

// ---------------------------------------------------------------------------
// Finitary trees

Fin make_fin(Permutation label, std::vector<Fin> children) {
  if (std::all_of(children.begin(), children.end(), [](const Fin& c) { return !c; }))
    children.clear();
  if (children.empty() && label.is_identity()) return nullptr;
  if (!children.empty() && children.size() != label.degree())
    throw Error("finitary node has " + std::to_string(children.size()) + " children, expected " +
                std::to_string(label.degree()));
  auto node = std::make_shared<FinNode>();
  std::size_t h = label.hash();
  std::size_t depth = 1;
  for (std::size_t i = 0; i < children.size(); ++i) {
    h = mix(h, children[i] ? children[i]->hash : i + 1);
    if (children[i]) depth = std::max(depth, children[i]->depth + 1);
  }
  node->label = std::move(label);
  node->children = std::move(children);
  node->hash = h;
  node->depth = depth;
  return node;
}

Fin fin_rooted(const Permutation& p) { return make_fin(p, {}); }

Fin fin_child(const Fin& a, Point x) {
  if (!a || a->children.empty()) return nullptr;
  return a->children[x];
}

Point fin_act(const Fin& a, Point x) { return a ? a->label[x] : x; }

Fin fin_multiply(const Fin& a, const Fin& b) {
  if (!a) return b;
  if (!b) return a;
  if (a->label.degree() != b->label.degree()) throw Error("finitary degree mismatch");
  std::vector<Fin> children;
  if (!a->children.empty() || !b->children.empty()) {
    children.resize(a->label.degree());
    for (Point x = 0; x < children.size(); ++x)
      children[x] = fin_multiply(fin_child(a, x), fin_child(b, a->label[x]));
  }
  return make_fin(a->label * b->label, std::move(children));
}

Fin fin_inverse(const Fin& a) {
  if (!a) return nullptr;
  std::vector<Fin> children;
  if (!a->children.empty()) {
    children.resize(a->label.degree());
    for (Point x = 0; x < children.size(); ++x)
      children[a->label[x]] = fin_inverse(a->children[x]);
  }
  return make_fin(a->label.inverse(), std::move(children));
}

bool fin_equal(const Fin& a, const Fin& b) {
  if (a == b) return true;
  if (!a || !b || a->hash != b->hash || a->depth != b->depth) return false;
  if (!(a->label == b->label) || a->children.size() != b->children.size()) return false;
  for (std::size_t i = 0; i < a->children.size(); ++i)
    if (!fin_equal(a->children[i], b->children[i])) return false;
  return true;
}

std::size_t fin_depth(const Fin& a) { return a ? a->depth : 0; }

std::string format_fin(const Fin& f) {
  if (!f) return "()";
  std::string out = format_cycles(f->label);
  if (f->children.empty()) return out;
  out += "[";
  bool first = true;
  for (std::size_t i = 0; i < f->children.size(); ++i) {
    if (!f->children[i]) continue;
    if (!first) out += ",";
    first = false;
    out += std::to_string(i) + ":" + format_fin(f->children[i]);
  }
  return out + "]";
}

Fin fin_insert(const TreeFrame& frame, std::size_t level, const Vertex& v, const Fin& f) {
  Fin node = f;
  if (!node) return nullptr;
  for (std::size_t i = v.length(); i-- > 0;) {
    const std::size_t deg = frame.degree(level + i);
    std::vector<Fin> children(deg);
    children.at(v.path[i]) = node;
    node = make_fin(Permutation::identity(deg), std::move(children));
  }
  return node;
}

bool fin_labels_in(const Fin& f, std::size_t level,
                   const std::function<const PermutationGroup&(std::size_t)>& groups) {
  if (!f) return true;
  if (!groups(level).contains(f->label)) return false;
  for (const auto& c : f->children)
    if (!fin_labels_in(c, level + 1, groups)) return false;
  return true;
}

namespace {

// An element of g mapping a to b, found by breadth-first search on the orbit.
Permutation transporting(const PermutationGroup& g, Point a, Point b) {
  std::vector<std::optional<Permutation>> reach(g.degree());
  reach[a] = Permutation::identity(g.degree());
  std::vector<Point> queue{a};
  for (std::size_t k = 0; k < queue.size(); ++k) {
    const Point p = queue[k];
    if (p == b) return *reach[p];
    for (const auto& s : g.generators()) {
      const Point q = s[p];
      if (!reach[q]) {
        reach[q] = *reach[p] * s;
        queue.push_back(q);
      }
    }
  }
  throw Error("no label moves " + std::to_string(a) + " to " + std::to_string(b));
}

}  // namespace

Fin transporter(const TreeFrame& frame, std::size_t level, const Vertex& from, const Vertex& to,
                const std::function<const PermutationGroup&(std::size_t)>& groups) {
  if (from.length() != to.length()) throw Error("transporter between different layers");
  Fin node = nullptr;
  for (std::size_t i = from.length(); i-- > 0;) {
    const std::size_t deg = frame.degree(level + i);
    std::vector<Fin> children(deg);
    children.at(from.path[i]) = node;
    node = make_fin(transporting(groups(level + i), from.path[i], to.path[i]),
                    std::move(children));
  }
  return node;
}

// ---------------------------------------------------------------------------
// Frame

namespace {

std::size_t letter_hash(const Letter& l) {
  if (const Fin* f = std::get_if<Fin>(&l)) return *f ? (*f)->hash : 0;
  const Spin& s = std::get<Spin>(l);
  std::size_t h = mix(0x5bd1e995, s.comp.hash());
  for (Point p : s.at) h = mix(h, p);
  return h;
}

bool letter_equal(const Letter& a, const Letter& b) {
  if (a.index() != b.index()) return false;
  if (const Fin* f = std::get_if<Fin>(&a)) return fin_equal(*f, std::get<Fin>(b));
  return std::get<Spin>(a) == std::get<Spin>(b);
}

std::size_t word_hash(const std::vector<Letter>& w) {
  std::size_t h = w.size();
  for (const auto& l : w) h = mix(h, letter_hash(l));
  return h;
}

struct Key {
  std::size_t level;
  std::size_t hash;
  std::vector<Letter> word;
  bool operator==(const Key& o) const {
    if (level != o.level || hash != o.hash || word.size() != o.word.size()) return false;
    for (std::size_t i = 0; i < word.size(); ++i)
      if (!letter_equal(word[i], o.word[i])) return false;
    return true;
  }
};

struct KeyHash {
  std::size_t operator()(const Key& k) const { return mix(k.hash, k.level); }
};

}  // namespace

struct TreeFrame::Caches {
  std::mutex mutex;
  std::unordered_map<Key, bool, KeyHash> identity;
  std::unordered_map<Key, std::optional<Fin>, KeyHash> finitary;
};

TreeFrame::TreeFrame(ValencySequence valency, Ray ray, SpinalSequence spinal,
                     EventuallyPeriodic<std::shared_ptr<const Homomorphism>> rho,
                     std::size_t component_degree)
    : valency_(std::move(valency)),
      ray_(std::move(ray)),
      spinal_(std::move(spinal)),
      rho_(std::move(rho)),
      component_degree_(component_degree),
      caches_(std::make_shared<Caches>()) {
  per_.include(valency_.sequence());
  per_.include(ray_);
  per_.include(spinal_);
  per_.include(rho_);
  for (std::size_t n = 0; n < per_.horizon(); ++n) {
    if (ray_.term(n) >= degree(n) || spinal_.term(n) >= degree(n))
      throw Error("index out of alphabet range at level " + std::to_string(n));
    const auto& r = rho_.term(n);
    if (!r) throw Error("missing component label map at level " + std::to_string(n + 1));
    if (r->target_degree() != degree(n + 1) || r->source().degree() != component_degree_)
      throw Error("component label map at level " + std::to_string(n + 1) +
                  " has the wrong degree");
  }
}

const Permutation& TreeFrame::spinal_label(std::size_t level, const Permutation& g) const {
  return (*rho_.term(level))(g);
}

std::shared_ptr<const TreeFrame> TreeFrame::shifted(std::size_t m) const {
  return std::make_shared<TreeFrame>(valency_.shifted(m), ray_.shifted(m), spinal_.shifted(m),
                                     rho_.shifted(m), component_degree_);
}

void TreeFrame::clear_caches() const {
  std::lock_guard lock(caches_->mutex);
  caches_->identity.clear();
  caches_->finitary.clear();
}

// ---------------------------------------------------------------------------
// Elements

namespace {

bool trivial_letter(const Letter& l) {
  if (const Fin* f = std::get_if<Fin>(&l)) return !*f;
  return std::get<Spin>(l).comp.is_identity();
}

// Merges two adjacent letters if they are of a kind that combines.
std::optional<Letter> merge(const Letter& a, const Letter& b) {
  if (a.index() != b.index()) return std::nullopt;
  if (const Fin* f = std::get_if<Fin>(&a)) return Letter(fin_multiply(*f, std::get<Fin>(b)));
  const Spin& s = std::get<Spin>(a);
  const Spin& t = std::get<Spin>(b);
  if (s.at != t.at) return std::nullopt;
  return Letter(Spin{s.at, s.comp * t.comp});
}

Key key_of(const TreeFrame& frame, const Element& e) {
  return Key{frame.canonical_level(e.level()), word_hash(e.letters()), e.letters()};
}

bool has_spin(const Element& e) {
  return std::any_of(e.letters().begin(), e.letters().end(),
                     [](const Letter& l) { return std::holds_alternative<Spin>(l); });
}

}  // namespace

Element::Element(std::shared_ptr<const TreeFrame> frame, std::size_t level)
    : Element(make(std::move(frame), level, {})) {}

Element::Element(std::shared_ptr<const TreeFrame> frame, std::size_t level,
                 std::shared_ptr<const Data> data)
    : frame_(std::move(frame)), level_(level), data_(std::move(data)) {}

Element Element::make(std::shared_ptr<const TreeFrame> frame, std::size_t level,
                      std::vector<Letter> word) {
  std::vector<Letter> out;
  out.reserve(word.size());
  for (auto& l : word) {
    if (trivial_letter(l)) continue;
    out.push_back(std::move(l));
    while (out.size() >= 2) {
      auto m = merge(out[out.size() - 2], out.back());
      if (!m) break;
      out.pop_back();
      out.pop_back();
      if (!trivial_letter(*m)) {
        out.push_back(std::move(*m));
        break;
      }
    }
  }
  auto data = std::make_shared<Data>();
  data->hash = word_hash(out);
  data->word = std::move(out);
  data->children.resize(frame->degree(level));
  return Element(std::move(frame), level, std::move(data));
}

Element Element::finitary(std::shared_ptr<const TreeFrame> frame, std::size_t level, Fin f) {
  if (f && f->label.degree() != frame->degree(level))
    throw Error("finitary label degree does not match level " + std::to_string(level));
  return make(std::move(frame), level, {Letter(std::move(f))});
}

Element Element::rooted(std::shared_ptr<const TreeFrame> frame, std::size_t level,
                        const Permutation& p) {
  return finitary(std::move(frame), level, fin_rooted(p));
}

Element Element::spinal(std::shared_ptr<const TreeFrame> frame, std::size_t level,
                        const Permutation& g) {
  if (g.degree() != frame->component_degree())
    throw Error("spinal component has degree " + std::to_string(g.degree()) + ", expected " +
                std::to_string(frame->component_degree()));
  return make(std::move(frame), level, {Letter(Spin{{}, g})});
}

Element Element::from_letters(std::shared_ptr<const TreeFrame> frame, std::size_t level,
                              const std::vector<Letter>& letters) {
  for (const auto& l : letters) {
    if (const Fin* f = std::get_if<Fin>(&l)) {
      if (*f && (*f)->label.degree() != frame->degree(level))
        throw Error("finitary label degree does not match level " + std::to_string(level));
    } else if (std::get<Spin>(l).comp.degree() != frame->component_degree()) {
      throw Error("spinal component has the wrong degree");
    }
  }
  return make(std::move(frame), level, letters);
}

void Element::check_same_tree(const Element& other) const {
  if (frame_ != other.frame_) throw Error("elements belong to different trees");
  if (level_ != other.level_)
    throw Error("level mismatch: " + std::to_string(level_) + " vs " +
                std::to_string(other.level_));
}

Element Element::operator*(const Element& rhs) const {
  check_same_tree(rhs);
  if (rhs.data_->word.empty()) return *this;
  if (data_->word.empty()) return rhs;
  std::vector<Letter> w = data_->word;
  w.insert(w.end(), rhs.data_->word.begin(), rhs.data_->word.end());
  return make(frame_, level_, std::move(w));
}

Element Element::inverse() const {
  std::vector<Letter> w;
  w.reserve(data_->word.size());
  for (auto it = data_->word.rbegin(); it != data_->word.rend(); ++it) {
    if (const Fin* f = std::get_if<Fin>(&*it))
      w.emplace_back(fin_inverse(*f));
    else
      w.emplace_back(Spin{std::get<Spin>(*it).at, std::get<Spin>(*it).comp.inverse()});
  }
  return make(frame_, level_, std::move(w));
}

Element Element::conjugate(const Element& by) const { return by.inverse() * *this * by; }

Element Element::commutator(const Element& h) const {
  return inverse() * h.inverse() * *this * h;
}

Permutation Element::root_label() const {
  Permutation p = Permutation::identity(frame_->degree(level_));
  for (const auto& l : data_->word)
    if (const Fin* f = std::get_if<Fin>(&l)) p *= (*f)->label;
  return p;
}

Point Element::act_child(Point x) const {
  for (const auto& l : data_->word)
    if (const Fin* f = std::get_if<Fin>(&l)) x = (*f)->label[x];
  return x;
}

Element Element::compute_section(Point x) const {
  const TreeFrame& fr = *frame_;
  std::vector<Letter> out;
  Point p = x;
  for (const auto& l : data_->word) {
    if (const Fin* f = std::get_if<Fin>(&l)) {
      if (Fin c = fin_child(*f, p)) out.emplace_back(std::move(c));
      p = (*f)->label[p];
      continue;
    }
    const Spin& s = std::get<Spin>(l);
    if (!s.at.empty()) {
      if (s.at.front() == p) out.emplace_back(Spin{{s.at.begin() + 1, s.at.end()}, s.comp});
    } else if (p == fr.ray_step(level_)) {
      out.emplace_back(s);
    } else if (p == fr.spinal_step(level_)) {
      out.emplace_back(fin_rooted(fr.spinal_label(level_, s.comp)));
    }
  }
  return make(frame_, level_ + 1, std::move(out));
}

Element Element::section(Point x) const {
  if (x >= frame_->degree(level_))
    throw InputError("child " + std::to_string(x) + " out of range at level " +
                     std::to_string(level_));
  {
    std::lock_guard lock(data_->mutex);
    if (const auto& c = data_->children[x]) return *c;
  }
  Element s = compute_section(x);
  std::lock_guard lock(data_->mutex);
  if (!data_->children[x]) data_->children[x] = std::make_shared<const Element>(s);
  return *data_->children[x];
}

Element Element::section(const Vertex& v) const {
  check_vertex(frame_->valency(), v, level_);
  Element e = *this;
  for (Point x : v.path) e = e.section(x);
  return e;
}

Vertex Element::act(const Vertex& v) const {
  check_vertex(frame_->valency(), v, level_);
  Vertex out;
  Element e = *this;
  for (std::size_t i = 0; i < v.length(); ++i) {
    out.path.push_back(e.act_child(v.path[i]));
    if (i + 1 < v.length()) e = e.section(v.path[i]);
  }
  return out;
}

Portrait Element::portrait(std::size_t depth) const {
  Portrait p;
  if (depth == 0) return p;
  p.label = root_label();
  const std::size_t deg = frame_->degree(level_);
  p.children.reserve(deg);
  for (Point x = 0; x < deg; ++x) p.children.push_back(section(x).portrait(depth - 1));
  return p;
}

bool Element::equal_to_depth(const Element& other, std::size_t depth) const {
  check_same_tree(other);
  // a and b agree on the first d layers iff a^-1 b fixes them
  std::vector<std::pair<Element, std::size_t>> todo{{inverse() * other, depth}};
  while (!todo.empty()) {
    auto [e, d] = std::move(todo.back());
    todo.pop_back();
    if (d == 0 || e.is_trivial_word()) continue;
    if (!e.root_label().is_identity()) return false;
    for (Point x = 0; x < e.frame_->degree(e.level_); ++x) todo.emplace_back(e.section(x), d - 1);
  }
  return true;
}

bool Element::is_identity() const {
  if (data_->word.empty()) return true;
  if (!has_spin(*this)) return false;  // a normalized nonempty finitary word
  TreeFrame::Caches& cache = *frame_->caches_;
  const Key top = key_of(*frame_, *this);
  {
    std::lock_guard lock(cache.mutex);
    if (auto it = cache.identity.find(top); it != cache.identity.end()) return it->second;
  }
  // The element is trivial iff every section reachable from it has a trivial
  // root label; there are finitely many distinct sections.
  std::unordered_set<Key, KeyHash> seen{top};
  std::vector<Element> todo{*this};
  bool trivial = true;
  while (!todo.empty() && trivial) {
    Element e = std::move(todo.back());
    todo.pop_back();
    if (!e.root_label().is_identity()) {
      trivial = false;
      break;
    }
    for (Point x = 0; x < frame_->degree(e.level_); ++x) {
      Element s = e.section(x);
      if (s.is_trivial_word()) continue;
      if (!has_spin(s)) {
        trivial = false;
        break;
      }
      Key k = key_of(*frame_, s);
      if (seen.insert(k).second) todo.push_back(std::move(s));
    }
  }
  std::lock_guard lock(cache.mutex);
  if (trivial) {
    for (auto& k : seen) cache.identity.emplace(k, true);
  } else {
    cache.identity.emplace(top, false);
  }
  return trivial;
}

bool Element::operator==(const Element& other) const {
  check_same_tree(other);
  return (inverse() * other).is_identity();
}

namespace {

struct FinitarySearch {
  const TreeFrame& frame;
  std::unordered_map<Key, Fin, KeyHash> done;
  std::unordered_set<Key, KeyHash> on_stack;
  std::unordered_set<Key, KeyHash> assumed;
  bool failed = false;

  // Portrait of e, assuming states on the stack are trivial; a state that
  // recurs below itself and turns out nontrivial is not finitary.
  Fin run(const Element& e) {
    if (e.is_trivial_word()) return nullptr;
    if (!has_spin(e)) return std::get<Fin>(e.letters().front());
    Key k = key_of(frame, e);
    if (auto it = done.find(k); it != done.end()) return it->second;
    if (on_stack.count(k)) {
      assumed.insert(k);
      return nullptr;
    }
    on_stack.insert(k);
    const std::size_t deg = frame.degree(e.level());
    std::vector<Fin> children(deg);
    for (Point x = 0; x < deg && !failed; ++x) children[x] = run(e.section(x));
    on_stack.erase(k);
    if (failed) return nullptr;
    Fin f = make_fin(e.root_label(), std::move(children));
    if (f && assumed.count(k)) {
      failed = true;
      return nullptr;
    }
    done.emplace(std::move(k), f);
    return f;
  }
};

}  // namespace

std::optional<Fin> Element::as_finitary() const {
  if (data_->word.empty()) return Fin{};
  if (!has_spin(*this)) return std::get<Fin>(data_->word.front());
  TreeFrame::Caches& cache = *frame_->caches_;
  const Key top = key_of(*frame_, *this);
  {
    std::lock_guard lock(cache.mutex);
    if (auto it = cache.finitary.find(top); it != cache.finitary.end()) return it->second;
  }
  FinitarySearch search{*frame_, {}, {}, {}};
  Fin f = search.run(*this);
  std::lock_guard lock(cache.mutex);
  if (search.failed) {
    cache.finitary.emplace(top, std::nullopt);
    return std::nullopt;
  }
  for (auto& [k, v] : search.done) cache.finitary.emplace(k, v);
  return f;
}

std::size_t Element::spinal_letter_count() const {
  return static_cast<std::size_t>(std::count_if(
      data_->word.begin(), data_->word.end(),
      [](const Letter& l) { return std::holds_alternative<Spin>(l); }));
}

std::size_t Element::finitary_depth() const {
  std::size_t d = 0;
  for (const auto& l : data_->word) {
    if (const Fin* f = std::get_if<Fin>(&l))
      d = std::max(d, fin_depth(*f));
    else
      d = std::max(d, std::get<Spin>(l).at.size());
  }
  return d;
}

std::string Element::to_string() const {
  if (data_->word.empty()) return "1";
  std::string out;
  for (const auto& l : data_->word) {
    if (!out.empty()) out += " ";
    if (const Fin* f = std::get_if<Fin>(&l)) {
      out += "f" + format_fin(*f);
    } else {
      const Spin& s = std::get<Spin>(l);
      out += "s" + format_cycles(s.comp);
      if (!s.at.empty()) out += "@" + Vertex(s.at).to_string();
    }
  }
  return out;
}

void Element::clear_cache() const {
  std::lock_guard lock(data_->mutex);
  for (auto& c : data_->children) c.reset();
}

Element insert(const Vertex& v, const Element& a) {
  if (a.level() < v.length()) throw Error("insertion vertex is longer than the element's level");
  const std::size_t level = a.level() - v.length();
  check_vertex(a.frame()->valency(), v, level);
  std::vector<Letter> w;
  w.reserve(a.letters().size());
  for (const auto& l : a.letters()) {
    if (const Fin* f = std::get_if<Fin>(&l)) {
      w.emplace_back(fin_insert(*a.frame(), level, v, *f));
    } else {
      Spin s = std::get<Spin>(l);
      s.at.insert(s.at.begin(), v.path.begin(), v.path.end());
      w.emplace_back(std::move(s));
    }
  }
  return Element::make(a.frame(), level, std::move(w));
}

}  // namespace spinal
