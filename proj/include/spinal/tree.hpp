#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spinal/error.hpp"
#include "spinal/perm.hpp"
#include "spinal/permgroup.hpp"

namespace spinal {

/// An infinite sequence given by a finite prefix followed by a repeating period.
template <class T>
class EventuallyPeriodic {
 public:
  EventuallyPeriodic() = default;
  EventuallyPeriodic(std::vector<T> prefix, std::vector<T> period)
      : prefix_(std::move(prefix)), period_(std::move(period)) {
    if (period_.empty()) throw Error("eventually periodic sequence needs a non-empty period");
  }
  static EventuallyPeriodic constant(T value) { return EventuallyPeriodic({}, {std::move(value)}); }

  const std::vector<T>& prefix() const { return prefix_; }
  const std::vector<T>& period() const { return period_; }

  const T& term(std::size_t n) const {
    if (n < prefix_.size()) return prefix_[n];
    return period_[(n - prefix_.size()) % period_.size()];
  }
  const T& operator[](std::size_t n) const { return term(n); }

  // The left shift by m: term(n) of the result is term(n + m) of this.
  EventuallyPeriodic shifted(std::size_t m) const {
    if (m <= prefix_.size())
      return EventuallyPeriodic({prefix_.begin() + static_cast<std::ptrdiff_t>(m), prefix_.end()},
                                period_);
    std::vector<T> rot(period_.size());
    const std::size_t r = (m - prefix_.size()) % period_.size();
    for (std::size_t i = 0; i < period_.size(); ++i) rot[i] = period_[(i + r) % period_.size()];
    return EventuallyPeriodic({}, std::move(rot));
  }

  // Shortest prefix and period describing the same sequence.
  EventuallyPeriodic canonical() const {
    std::vector<T> per = period_;
    for (std::size_t p = 1; p <= per.size(); ++p) {
      if (per.size() % p) continue;
      bool ok = true;
      for (std::size_t i = p; i < per.size() && ok; ++i) ok = per[i] == per[i - p];
      if (ok) {
        per.resize(p);
        break;
      }
    }
    std::vector<T> pre = prefix_;
    while (!pre.empty() && pre.back() == per.back()) {
      std::rotate(per.rbegin(), per.rbegin() + 1, per.rend());
      pre.pop_back();
    }
    return EventuallyPeriodic(std::move(pre), std::move(per));
  }

  friend bool operator==(const EventuallyPeriodic& a, const EventuallyPeriodic& b) {
    const std::size_t span = std::max(a.prefix_.size(), b.prefix_.size()) +
                             std::lcm(a.period_.size(), b.period_.size());
    for (std::size_t n = 0; n < span; ++n)
      if (!(a.term(n) == b.term(n))) return false;
    return true;
  }

 private:
  std::vector<T> prefix_;
  std::vector<T> period_;
};

// Number of leading terms after which a family of sequences repeats jointly,
// and the joint period.
struct Periodicity {
  std::size_t start = 0;
  std::size_t period = 1;
  void include(std::size_t prefix, std::size_t per) {
    start = std::max(start, prefix);
    period = std::lcm(period, per);
  }
  template <class T>
  void include(const EventuallyPeriodic<T>& s) {
    include(s.prefix().size(), s.period().size());
  }
  std::size_t horizon() const { return start + period; }
  std::size_t canonical(std::size_t n) const {
    return n < start ? n : start + (n - start) % period;
  }
};

/// term(n) is the number of children of a vertex of length n, i.e. |X_{n+1}|.
class ValencySequence {
 public:
  explicit ValencySequence(EventuallyPeriodic<std::size_t> seq);
  std::size_t degree(std::size_t level) const { return seq_.term(level); }
  const EventuallyPeriodic<std::size_t>& sequence() const { return seq_; }
  ValencySequence shifted(std::size_t m) const { return ValencySequence(seq_.shifted(m)); }

 private:
  EventuallyPeriodic<std::size_t> seq_;
};

Order layer_size(const ValencySequence& x, std::size_t n);

/// A vertex of the tree: the path of child indices from the root.
struct Vertex {
  std::vector<Point> path;

  Vertex() = default;
  explicit Vertex(std::vector<Point> p) : path(std::move(p)) {}

  std::size_t length() const { return path.size(); }
  bool is_root() const { return path.empty(); }
  Vertex child(Point x) const;
  Vertex prefix(std::size_t n) const;
  bool has_prefix(const Vertex& v) const;
  std::string to_string() const;

  friend bool operator==(const Vertex&, const Vertex&) = default;
  friend auto operator<=>(const Vertex& a, const Vertex& b) { return a.path <=> b.path; }
};

// Dotted child indices; the root is the empty string.
Vertex parse_vertex(std::string_view text);
void check_vertex(const ValencySequence& x, const Vertex& v, std::size_t level = 0);
// All vertices of length n below a vertex of length `level`, in lexicographic order.
std::vector<Vertex> layer_vertices(const ValencySequence& x, std::size_t n, std::size_t level = 0);

// Both the ray u and the spinal sequence x list one child index per level:
// term(n) is the step taken from a vertex of length n.
using Ray = EventuallyPeriodic<Point>;
using SpinalSequence = EventuallyPeriodic<Point>;

Vertex ray_vertex(const Ray& u, std::size_t n);
Vertex spinal_neighbor(const Ray& u, const SpinalSequence& x, std::size_t n);

struct SpinalViolation {
  std::size_t level;
  std::string condition;
};

// actions.term(n) is the action of S_n on the children of a vertex of length n.
std::optional<SpinalViolation> validate_spinal_data(
    const ValencySequence& valency,
    const EventuallyPeriodic<std::shared_ptr<const TauAction>>& actions, const Ray& u,
    const SpinalSequence& x);

}  // namespace spinal
