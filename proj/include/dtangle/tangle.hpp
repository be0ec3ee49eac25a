#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "dtangle/separation.hpp"

namespace dtangle {

// Decides the big side of a separation, or declines.
class Orienter {
 public:
  virtual ~Orienter() = default;
  virtual std::optional<Side> big_side(const DirectedSeparation& s) const = 0;
};

// A tangle of order k orients every separation of order < k. The orientation
// comes from one of three backings:
//   explicit  - a full map from separations to big sides (small graphs only);
//   cover     - the side holding the majority of a (well-linked) cover;
//   bramble   - the side holding a bramble element that avoids the separator.
class Tangle {
 public:
  enum class Origin { Explicit, Cover, Bramble };
  using Map = std::unordered_map<DirectedSeparation, Side, SeparationHash>;

  Tangle() = default;

  static Tangle from_cover(int k, VertexSet cover, std::string label = {});
  static Tangle from_bramble(int k, std::vector<VertexSet> elements,
                             std::string label = {});
  static Tangle from_map(int k, Map orientation, VertexSet cover,
                         std::string label = {});

  int order() const { return k_; }
  Origin origin() const { return origin_; }
  const VertexSet& cover() const { return cover_; }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  // Big side of s; nullopt when |sep(s)| >= k or the backing declines.
  std::optional<Side> orient(const DirectedSeparation& s) const;
  // As orient(), throwing PreconditionError when undecided.
  Side big_side(const DirectedSeparation& s) const;
  // The small side's vertex set.
  const VertexSet& small_part(const DirectedSeparation& s) const {
    return s.side(opposite(big_side(s)));
  }

  // Same backing, new order threshold (new_order <= order()).
  Tangle with_order(int new_order) const;
  // Explicit copy covering every separation of order < k of g.
  Tangle materialize(const Digraph& g, const EnumerationLimits& limits = {}) const;
  // Explicit copy with one orientation reversed (test mutations).
  Tangle flipped(const DirectedSeparation& s) const;

 private:
  int k_ = 0;
  Origin origin_ = Origin::Explicit;
  VertexSet cover_;
  std::string label_;
  std::shared_ptr<const Orienter> orienter_;
};

using TangleSet = std::vector<Tangle>;

struct TangleWitness {
  enum class Kind { Unoriented, CoveringTriple, NoBigComponent } kind;
  std::vector<DirectedSeparation> separations;  // 1 or 3 entries
  std::string describe(const Digraph& g) const;
};

class TangleAxiomError : public std::runtime_error {
 public:
  TangleAxiomError(std::string what, TangleWitness w)
      : std::runtime_error(std::move(what)), witness(std::move(w)) {}
  TangleWitness witness;
};

// Axiom 1 over every separation of order < k, axiom 2 over all triples of
// inclusion-maximal small sides (repetition allowed).
std::optional<TangleWitness> check_tangle_axioms(const Digraph& g, const Tangle& t,
                                                 const EnumerationLimits& limits = {});

// C(X): grows a maximal downwards closed small set S in D(G,X) one sink at a
// time and returns the unique sink of D - S. Throws TangleAxiomError when the
// orientation is inconsistent.
VertexSet unique_big_component(const Digraph& g, const Tangle& t, const VertexSet& x);

// T_{|l}: the separations of order <= l, i.e. a tangle of order l+1.
Tangle restrict_tangle(const Tangle& t, int l);

// Least separation (canonical order) of order <= max_order oriented
// differently by t1 and t2; only separations both tangles orient count.
std::optional<DirectedSeparation> find_distinguisher(const Digraph& g, const Tangle& t1,
                                                     const Tangle& t2, int max_order,
                                                     const EnumerationLimits& limits = {});

// True when t1 and t2 orient every separation of order <= l alike.
bool agree_up_to(const Digraph& g, const Tangle& t1, const Tangle& t2, int l,
                 const EnumerationLimits& limits = {});

struct Cone {
  std::vector<int> members;  // indices into the tangle set
  TangleSet strict;          // (l+1)-restrictions of the members, deduplicated
};

// cone(T_{|l}) within ts and its strict cone.
Cone cones(const Digraph& g, const TangleSet& ts, const Tangle& t, int l,
           const EnumerationLimits& limits = {});

// All tangles of order k (explicit), found by choosing C(X) for every
// |X| < k subject to C(X) c C(Y) for Y c X and checking the axioms.
TangleSet find_tangles(const Digraph& g, int k, std::size_t max_results = 64,
                       const EnumerationLimits& limits = {});

}  // namespace dtangle
