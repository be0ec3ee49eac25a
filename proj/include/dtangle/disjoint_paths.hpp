#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dtangle/error.hpp"
#include "dtangle/tangle.hpp"
#include "dtangle/walls.hpp"

namespace dtangle {

using TerminalPair = std::pair<Vertex, Vertex>;
using PairList = std::vector<TerminalPair>;

// Terminals must be pairwise distinct across pairs; s_i = t_i is allowed and
// asks for a one-vertex path. Throws PreconditionError otherwise.
void check_pairs(const Digraph& g, const PairList& pairs);

struct ExactLimits {
  int max_vertices = 64;            // for k >= 2, vertices in the search region
  std::size_t max_nodes = 5'000'000;  // search tree nodes
};

// Pairwise vertex-disjoint paths P_i: s_i -> t_i inside `allowed` (all of g
// when null), or nullopt after exhausting the search. Pairs are routed most
// constrained first; failed states (routed prefix, used vertices) are
// memoized. Throws SizeGuardError past the limits.
std::optional<std::vector<Path>> exact_disjoint_paths(const Digraph& g, const PairList& pairs,
                                                      const ExactLimits& limits = {},
                                                      const VertexSet* allowed = nullptr);

// Each path i is a directed path from s_i to t_i and no vertex lies on more
// than two paths. Returns the first violation.
std::optional<std::string> verify_half_integral(const Digraph& g, const PairList& pairs,
                                                const std::vector<Path>& paths);

// Pattern graph H(L, M, R). Up to isomorphism a disjoint union of directed
// paths with part labels is the multiset of its paths read as words over
// {L, M, R}; the canonical representative lists the words sorted.
enum class PatternType {
  LeftToRight,  // (L -> R)
  RightToLeft,  // (R -> L)
};

struct PatternGraph {
  PatternType type = PatternType::RightToLeft;
  int k = 0;
  int t = 0;
  std::vector<std::string> paths;

  int count(char part) const;
  int num_vertices() const;
  // Vertices are numbered path by path, in order along each path.
  std::vector<char> parts() const;
  std::vector<Edge> edges() const;
  std::string to_string() const;

  friend bool operator==(const PatternGraph&, const PatternGraph&) = default;
};

// The defining conditions: |M| <= t, k paths, every edge inside L or R is an
// isolated edge of H[L] or H[R], no path starts in the forbidden part, no
// edge in the forbidden direction. Returns the first one violated.
std::optional<std::string> pattern_violation(const PatternGraph& h);

// Largest |L| and |R| allowed for type x.
std::pair<int, int> pattern_bounds(PatternType x, int k, int t);

// Every isomorphism class satisfying the defining conditions and the part
// size bounds, sorted by vertex count then word list.
std::vector<PatternGraph> enumerate_pattern_graphs(PatternType x, int k, int t);

// Raised when a leaf instance is too large for the oracle and no wall
// certificate was supplied.
class NeedsCertificateError : public SizeGuardError {
 public:
  using SizeGuardError::SizeGuardError;
};

struct HalfIntegralOutcome {
  enum class Verdict { NoIntegral, Paths } verdict = Verdict::NoIntegral;
  std::vector<Path> paths;  // path i links s_i to t_i
  int congestion = 0;
  // Step that decided: disconnected, base-case, oracle, wall-linkage,
  // splice, dp.
  std::string decided_by;
};

struct HalfOrNoOptions {
  const Wall* wall = nullptr;          // certificate for the leaf case
  int tangle_order = 0;                // m; 0 selects k(6k^2 + 2k + 3)
  const TangleSet* tangles = nullptr;  // supplied tangles skip detection
  std::size_t budget = 100'000;        // boundary guesses per DP node
  ExactLimits exact;
  // When the instance fits the oracle, a congestion-2 answer is checked
  // against it and becomes no-integral if no integral linkage exists.
  bool confirm_with_oracle = true;
  int threads = 1;  // guess loops run in canonical order on one thread
};

// Leaf case: no two large walls are separated by a small separation.
// k <= 2 routes the pairs independently. With a wall certificate the
// instance goes through route_through_wall, and a shielding separation is
// crossed by pattern splicing. Otherwise the oracle decides when the graph
// fits its guard, else NeedsCertificateError.
HalfIntegralOutcome half_or_no_leaf(const Digraph& g, const PairList& pairs,
                                    const HalfOrNoOptions& options = {});

// Pattern splice across a separation sep = (B -> A) with every source in A:
// guesses a pattern of type (R -> L) and an embedding, solves G[A] side by
// the oracle and the G[B] side by half_or_no_leaf with fewer pairs.
HalfIntegralOutcome splice_across(const Digraph& g, const PairList& pairs,
                                  const DirectedSeparation& sep,
                                  const HalfOrNoOptions& options = {});

// Full pipeline: tangles of order >= 3m (supplied, or found exactly when the
// graph is large enough to carry one); with fewer than two the graph is a
// leaf, else a labelling and decomposition drive a bottom-up DP over guessed
// boundary pieces.
HalfIntegralOutcome half_or_no(const Digraph& g, const PairList& pairs,
                               const HalfOrNoOptions& options = {});

}  // namespace dtangle
