#include "spinal/tree.hpp"

#include <charconv>

namespace spinal {

ValencySequence::ValencySequence(EventuallyPeriodic<std::size_t> seq) : seq_(std::move(seq)) {
  for (std::size_t n = 0; n < seq_.prefix().size() + seq_.period().size(); ++n)
    if (seq_.term(n) < 2) throw Error("valency sequence term " + std::to_string(n) + " is below 2");
}

Order layer_size(const ValencySequence& x, std::size_t n) {
  Order out = 1;
  for (std::size_t i = 0; i < n; ++i) out *= x.degree(i);
  return out;
}

Vertex Vertex::child(Point x) const {
  Vertex v = *this;
  v.path.push_back(x);
  return v;
}

Vertex Vertex::prefix(std::size_t n) const {
  if (n > path.size()) throw Error("prefix longer than vertex");
  return Vertex({path.begin(), path.begin() + static_cast<std::ptrdiff_t>(n)});
}

bool Vertex::has_prefix(const Vertex& v) const {
  return v.path.size() <= path.size() && std::equal(v.path.begin(), v.path.end(), path.begin());
}

std::string Vertex::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(path[i]);
  }
  return out;
}

Vertex parse_vertex(std::string_view text) {
  Vertex v;
  if (text.empty()) return v;
  std::size_t pos = 0;
  while (true) {
    const std::size_t dot = text.find('.', pos);
    const std::string_view part = text.substr(pos, dot == std::string_view::npos ? dot : dot - pos);
    Point x = 0;
    auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), x);
    if (part.empty() || ec != std::errc() || end != part.data() + part.size())
      throw InputError("malformed vertex '" + std::string(text) + "'");
    v.path.push_back(x);
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  return v;
}

void check_vertex(const ValencySequence& x, const Vertex& v, std::size_t level) {
  for (std::size_t i = 0; i < v.length(); ++i)
    if (v.path[i] >= x.degree(level + i))
      throw InputError("vertex " + v.to_string() + " leaves the tree at position " +
                       std::to_string(i + 1));
}

std::vector<Vertex> layer_vertices(const ValencySequence& x, std::size_t n, std::size_t level) {
  std::vector<Vertex> out{Vertex()};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Vertex> next;
    next.reserve(out.size() * x.degree(level + i));
    for (const auto& v : out)
      for (Point c = 0; c < x.degree(level + i); ++c) next.push_back(v.child(c));
    out = std::move(next);
  }
  return out;
}

Vertex ray_vertex(const Ray& u, std::size_t n) {
  Vertex v;
  for (std::size_t i = 0; i < n; ++i) v.path.push_back(u.term(i));
  return v;
}

Vertex spinal_neighbor(const Ray& u, const SpinalSequence& x, std::size_t n) {
  return ray_vertex(u, n).child(x.term(n));
}

std::optional<SpinalViolation> validate_spinal_data(
    const ValencySequence& valency,
    const EventuallyPeriodic<std::shared_ptr<const TauAction>>& actions, const Ray& u,
    const SpinalSequence& x) {
  Periodicity per;
  per.include(valency.sequence());
  per.include(actions);
  per.include(u);
  per.include(x);
  for (std::size_t n = 0; n < per.horizon(); ++n) {
    const std::size_t deg = valency.degree(n);
    if (u.term(n) >= deg || x.term(n) >= deg)
      throw Error("index out of alphabet range at level " + std::to_string(n));
    if (actions.term(n)->point_count != deg)
      throw Error("action at level " + std::to_string(n) + " does not match the valency");
    if (u.term(n) == x.term(n))
      return SpinalViolation{n, "u_n x_{n+1} != u_{n+1}"};
    const PermutationGroup img = actions.term(n)->image_group();
    if (point_stabilizer(img, x.term(n)) == point_stabilizer(img, u.term(n)))
      return SpinalViolation{n, "stabilizers of x_{n+1} and u_{n+1} differ"};
  }
  return std::nullopt;
}

}  // namespace spinal
