#include "spinal/perm.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "spinal/error.hpp"

namespace spinal {

Permutation::Permutation(std::vector<Point> images) : images_(std::move(images)) {
  if (images_.empty()) throw Error("permutation degree must be at least 1");
  std::vector<bool> seen(images_.size(), false);
  for (Point p : images_) {
    if (p >= images_.size() || seen[p])
      throw Error("image list is not a bijection");
    seen[p] = true;
  }
}

Permutation Permutation::identity(std::size_t degree) {
  if (degree == 0) throw Error("permutation degree must be at least 1");
  std::vector<Point> im(degree);
  std::iota(im.begin(), im.end(), Point{0});
  Permutation p;
  p.images_ = std::move(im);
  return p;
}

Permutation Permutation::from_cycles(const std::vector<std::vector<Point>>& cycles,
                                     std::size_t degree) {
  Permutation p = identity(degree);
  std::vector<bool> used(degree, false);
  for (const auto& c : cycles) {
    for (Point x : c) {
      if (x >= degree)
        throw InputError("point " + std::to_string(x) + " out of range for degree " +
                         std::to_string(degree));
      if (used[x]) throw InputError("repeated point " + std::to_string(x));
      used[x] = true;
    }
    for (std::size_t i = 0; i < c.size(); ++i) p.images_[c[i]] = c[(i + 1) % c.size()];
  }
  return p;
}

Point Permutation::act(Point i) const {
  if (i >= images_.size())
    throw Error("point " + std::to_string(i) + " out of range for degree " +
                std::to_string(images_.size()));
  return images_[i];
}

bool Permutation::is_identity() const {
  for (Point i = 0; i < images_.size(); ++i)
    if (images_[i] != i) return false;
  return true;
}

Permutation Permutation::inverse() const {
  Permutation r;
  r.images_.resize(images_.size());
  for (Point i = 0; i < images_.size(); ++i) r.images_[images_[i]] = i;
  return r;
}

Permutation Permutation::operator*(const Permutation& rhs) const {
  Permutation r(*this);
  r *= rhs;
  return r;
}

Permutation& Permutation::operator*=(const Permutation& rhs) {
  if (rhs.degree() != degree())
    throw Error("degree mismatch: " + std::to_string(degree()) + " vs " +
                std::to_string(rhs.degree()));
  for (auto& x : images_) x = rhs.images_[x];
  return *this;
}

Point Permutation::first_moved() const {
  for (Point i = 0; i < images_.size(); ++i)
    if (images_[i] != i) return i;
  return static_cast<Point>(images_.size());
}

std::size_t Permutation::order() const {
  std::size_t o = 1;
  for (const auto& c : cycles()) o = std::lcm(o, c.size());
  return o;
}

bool Permutation::is_even() const {
  std::size_t transpositions = 0;
  for (const auto& c : cycles()) transpositions += c.size() - 1;
  return transpositions % 2 == 0;
}

std::vector<std::vector<Point>> Permutation::cycles() const {
  std::vector<std::vector<Point>> out;
  std::vector<bool> seen(images_.size(), false);
  for (Point i = 0; i < images_.size(); ++i) {
    if (seen[i] || images_[i] == i) continue;
    std::vector<Point> c;
    for (Point j = i; !seen[j]; j = images_[j]) {
      seen[j] = true;
      c.push_back(j);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::string Permutation::to_string() const { return format_cycles(*this); }

std::size_t Permutation::hash() const {
  // FNV-1a over the image list
  std::uint64_t h = 1469598103934665603ull;
  for (Point x : images_) {
    h ^= x;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

Permutation compose(const Permutation& p, const Permutation& q) { return p * q; }
Permutation invert(const Permutation& p) { return p.inverse(); }
Point act_point(const Permutation& p, Point i) { return p.act(i); }

Permutation conjugate(const Permutation& g, const Permutation& h) {
  return h.inverse() * g * h;
}

Permutation commutator(const Permutation& g, const Permutation& h) {
  return g.inverse() * h.inverse() * g * h;
}

Permutation parse_cycles(std::string_view text, std::size_t degree) {
  if (degree == 0) throw InputError("degree must be at least 1");
  std::vector<std::vector<Point>> cycles;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  if (i == text.size()) throw InputError("empty cycle text");
  while (i < text.size()) {
    if (text[i] != '(')
      throw InputError("malformed cycle text '" + std::string(text) + "'");
    ++i;
    std::vector<Point> cycle;
    for (;;) {
      skip_ws();
      if (i == text.size())
        throw InputError("unterminated cycle in '" + std::string(text) + "'");
      if (text[i] == ')') {
        ++i;
        break;
      }
      if (text[i] == ',') {
        ++i;
        continue;
      }
      if (!std::isdigit(static_cast<unsigned char>(text[i])))
        throw InputError("malformed cycle text '" + std::string(text) + "'");
      std::uint64_t v = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        v = v * 10 + static_cast<std::uint64_t>(text[i] - '0');
        if (v > 0xffffffffull) throw InputError("point value too large");
        ++i;
      }
      cycle.push_back(static_cast<Point>(v));
    }
    if (cycle.size() == 1) {
      // a 1-cycle still has to be a valid, unrepeated point
      cycles.push_back(cycle);
    } else if (!cycle.empty()) {
      cycles.push_back(std::move(cycle));
    }
    skip_ws();
  }
  return Permutation::from_cycles(cycles, degree);
}

std::string format_cycles(const Permutation& p) {
  auto cs = p.cycles();
  if (cs.empty()) return "()";
  std::ostringstream os;
  for (const auto& c : cs) {
    os << '(';
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << c[i];
    os << ')';
  }
  return os.str();
}

}  // namespace spinal
