#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dtangle/components.hpp"
#include "dtangle/digraph.hpp"

namespace dtangle {

enum class Dir { Out, In };
// A side of a directed separation: its out-side X+ or its in-side X-.
enum class Side { Out, In };

inline Side opposite(Side s) { return s == Side::Out ? Side::In : Side::Out; }

// X = (X+ -> X-): the two sides cover V and cross edges run only from
// X+ \ X- to X- \ X+.
struct DirectedSeparation {
  VertexSet out;
  VertexSet in;

  VertexSet separator() const { return out & in; }
  int order() const { return static_cast<int>((out & in).size()); }
  const VertexSet& side(Side s) const { return s == Side::Out ? out : in; }

  friend bool operator==(const DirectedSeparation& a, const DirectedSeparation& b) {
    return a.out == b.out && a.in == b.in;
  }
};

// Canonical order: by order, then separator, then out-side (lexicographic).
bool canonical_less(const DirectedSeparation& a, const DirectedSeparation& b);

struct SeparationHash {
  std::size_t operator()(const DirectedSeparation& s) const {
    return s.out.hash() * 31u + s.in.hash();
  }
};

// Out: members of a with an in-neighbour outside a. In: members of a with an
// out-neighbour outside a.
VertexSet boundary(const Digraph& g, const VertexSet& a, Dir dir);

// Out: X+(A) = (A, d+(A) u (V \ A)). In: X-(A) = (d-(A) u (V \ A), A).
DirectedSeparation induced_separation(const Digraph& g, const VertexSet& a, Dir dir);

struct SeparationViolation {
  enum class Kind { Uncovered, CrossEdge } kind;
  Vertex vertex = -1;  // uncovered vertex
  Edge edge{-1, -1};   // offending edge (tail in X- \ X+, head in X+ \ X-)
  std::string describe(const Digraph& g) const;
};

std::optional<SeparationViolation> validate_separation(const Digraph& g,
                                                       const DirectedSeparation& s);

// Orients an unordered cover {a, b} as a directed separation. Throws
// PreconditionError when cross edges run both ways. Without any cross edges
// the side holding the smallest id outside the separator becomes out.
DirectedSeparation make_separation(const Digraph& g, const VertexSet& a,
                                   const VertexSet& b);

struct QuadrantDecomposition {
  VertexSet top, left, right, bottom;
  VertexSet top_corner, left_corner, right_corner, bottom_corner;
};

QuadrantDecomposition quadrants(const DirectedSeparation& x,
                                const DirectedSeparation& y);

// top = (X+ n Y+, X- u Y-), bottom = (X+ u Y+, X- n Y-). Their orders sum to
// |sep(x)| + |sep(y)|.
struct Uncrossed {
  DirectedSeparation top;
  DirectedSeparation bottom;
};
Uncrossed uncross(const DirectedSeparation& x, const DirectedSeparation& y);

// Nested in the sense A' c A and B c B' for some labelling of both sides.
bool are_uncrossed(const DirectedSeparation& x, const DirectedSeparation& y);

struct EnumerationLimits {
  std::size_t max_separators = 250000;  // candidate separator sets
  int max_components = 26;              // components of G - X
  bool force = false;                   // ignore both guards
};

// Every valid directed separation of order <= max_order exactly once, in
// canonical separator order. Callback returns false to stop early.
void for_each_separation(const Digraph& g, int max_order,
                         const std::function<bool(const DirectedSeparation&)>& f,
                         const EnumerationLimits& limits = {});

std::vector<DirectedSeparation> enumerate_separations(
    const Digraph& g, int max_order, const EnumerationLimits& limits = {});

// Number of vertex sets of size <= k among n vertices, saturating at 1e18.
std::size_t separator_count(int n, int k);

// Calls f on every vertex subset of size <= k in increasing size then
// lexicographic order.
void for_each_subset_up_to(int n, int k,
                           const std::function<bool(const std::vector<Vertex>&)>& f);

std::string to_string(const Digraph& g, const VertexSet& s);
std::string to_string(const Digraph& g, const DirectedSeparation& s);

}  // namespace dtangle
