#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace dtangle {

using Vertex = int;

// Fixed-universe vertex set. All sets that meet in one expression must share
// the same universe size (the vertex count of their digraph).
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::size_t universe) : bits_(universe) {}
  VertexSet(std::size_t universe, std::initializer_list<Vertex> vs)
      : bits_(universe) {
    for (Vertex v : vs) bits_.set(static_cast<std::size_t>(v));
  }
  VertexSet(std::size_t universe, const std::vector<Vertex>& vs)
      : bits_(universe) {
    for (Vertex v : vs) bits_.set(static_cast<std::size_t>(v));
  }

  static VertexSet full(std::size_t universe) {
    VertexSet s(universe);
    s.bits_.set();
    return s;
  }

  std::size_t universe() const { return bits_.size(); }
  std::size_t size() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }

  bool contains(Vertex v) const { return bits_.test(static_cast<std::size_t>(v)); }
  void insert(Vertex v) { bits_.set(static_cast<std::size_t>(v)); }
  void erase(Vertex v) { bits_.reset(static_cast<std::size_t>(v)); }
  void clear() { bits_.reset(); }

  bool is_subset_of(const VertexSet& o) const { return bits_.is_subset_of(o.bits_); }
  bool intersects(const VertexSet& o) const { return bits_.intersects(o.bits_); }

  // Smallest member, or -1 when empty.
  Vertex first() const {
    auto p = bits_.find_first();
    return p == Bits::npos ? -1 : static_cast<Vertex>(p);
  }
  // Next member after v, or -1.
  Vertex next(Vertex v) const {
    auto p = bits_.find_next(static_cast<std::size_t>(v));
    return p == Bits::npos ? -1 : static_cast<Vertex>(p);
  }

  std::vector<Vertex> to_vector() const {
    std::vector<Vertex> out;
    out.reserve(size());
    for (auto p = bits_.find_first(); p != Bits::npos; p = bits_.find_next(p))
      out.push_back(static_cast<Vertex>(p));
    return out;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (auto p = bits_.find_first(); p != Bits::npos; p = bits_.find_next(p))
      f(static_cast<Vertex>(p));
  }

  VertexSet& operator|=(const VertexSet& o) { bits_ |= o.bits_; return *this; }
  VertexSet& operator&=(const VertexSet& o) { bits_ &= o.bits_; return *this; }
  VertexSet& operator-=(const VertexSet& o) { bits_ -= o.bits_; return *this; }
  friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
  friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }
  VertexSet complement() const {
    VertexSet c;
    c.bits_ = ~bits_;
    return c;
  }

  friend bool operator==(const VertexSet& a, const VertexSet& b) { return a.bits_ == b.bits_; }
  friend bool operator!=(const VertexSet& a, const VertexSet& b) { return !(a == b); }

  // Canonical total order: compare sorted member sequences lexicographically.
  friend bool lex_less(const VertexSet& a, const VertexSet& b) {
    Vertex x = a.first(), y = b.first();
    while (x != -1 && y != -1) {
      if (x != y) return x < y;
      x = a.next(x);
      y = b.next(y);
    }
    return x == -1 && y != -1;
  }

  std::size_t hash() const {
    std::size_t h = bits_.size();
    for (auto p = bits_.find_first(); p != Bits::npos; p = bits_.find_next(p))
      h = h * 1000003u ^ (p + 0x9e3779b97f4a7c15ull);
    return h;
  }

 private:
  using Bits = boost::dynamic_bitset<std::uint64_t>;
  Bits bits_;
};

struct VertexSetHash {
  std::size_t operator()(const VertexSet& s) const { return s.hash(); }
};

struct VertexSetLexLess {
  bool operator()(const VertexSet& a, const VertexSet& b) const { return lex_less(a, b); }
};

}  // namespace dtangle
