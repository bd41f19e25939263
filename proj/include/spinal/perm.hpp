#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spinal {

using Point = std::uint32_t;

/// A permutation of {0, ..., degree-1}, acting on the right: i.(pq) = (i.p).q.
class Permutation {
 public:
  Permutation() : images_{0} {}
  explicit Permutation(std::vector<Point> images);

  static Permutation identity(std::size_t degree);
  static Permutation from_cycles(const std::vector<std::vector<Point>>& cycles,
                                 std::size_t degree);

  std::size_t degree() const { return images_.size(); }
  std::span<const Point> images() const { return images_; }

  // Unchecked image of a point.
  Point operator[](Point i) const { return images_[i]; }
  // Checked image of a point.
  Point act(Point i) const;

  bool is_identity() const;
  Permutation inverse() const;
  Permutation operator*(const Permutation& rhs) const;
  Permutation& operator*=(const Permutation& rhs);

  // Smallest point moved by this permutation, or degree() if none.
  Point first_moved() const;
  std::size_t order() const;
  bool is_even() const;

  std::vector<std::vector<Point>> cycles() const;
  std::string to_string() const;

  std::size_t hash() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) {
    return a.images_ <=> b.images_;
  }

 private:
  std::vector<Point> images_;
};

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const { return p.hash(); }
};

Permutation compose(const Permutation& p, const Permutation& q);
Permutation invert(const Permutation& p);
Point act_point(const Permutation& p, Point i);

// h^-1 g h
Permutation conjugate(const Permutation& g, const Permutation& h);
// [g, h] = g^-1 h^-1 g h
Permutation commutator(const Permutation& g, const Permutation& h);

/// Parses disjoint-cycle notation such as "(0 1 2)(3 4)"; "()" is the identity.
Permutation parse_cycles(std::string_view text, std::size_t degree);
std::string format_cycles(const Permutation& p);

}  // namespace spinal
