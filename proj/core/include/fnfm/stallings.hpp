#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "fnfm/word.hpp"

namespace fnfm {

/// A folded, base-pointed subgroup graph (core graph plus base vertex).
/// Vertex 0 is the base.  Reduced words in the subgroup correspond to
/// reduced base loops.
class SubgroupGraph {
 public:
  /// Folds the bouquet of the given generator words.
  static SubgroupGraph fold(Alphabet a, const std::vector<FreeWord>& generators);

  const Alphabet& alphabet() const { return alpha_; }
  int vertex_count() const { return static_cast<int>(adj_.size()); }
  long long edge_count() const { return edge_count_; }

  bool contains(const FreeWord& w) const;

  /// Number of letters of w readable from the base before the walk dies.
  long long trace_prefix(const FreeWord& w) const;

  /// rank = edges - vertices + 1.
  long long rank() const;

  /// Free basis from a spanning tree, in a deterministic order.
  std::vector<FreeWord> basis() const;

  /// Pointed pullback: the graph of the intersection subgroup.
  SubgroupGraph intersect(const SubgroupGraph& other) const;

 private:
  friend class GraphBuilder;
  SubgroupGraph() = default;
  Alphabet alpha_;
  std::vector<std::map<int, int>> adj_;  // vertex -> signed label -> target
  long long edge_count_ = 0;
};

/// When `generators` is a free basis of the whole group F(a), expresses each
/// standard generator a_i as a word in them.  The result words live over an
/// auxiliary alphabet of rank generators.size() (tag 'h'); substituting
/// generators[k-1] for its k-th letter yields a_i.  Returns nullopt when the
/// generators do not generate the whole group, and may also return nullopt
/// for redundant (non-basis) generating sets, where an element can carry two
/// distinct expressions.
std::optional<std::vector<FreeWord>> express_standard_basis(
    Alphabet a, const std::vector<FreeWord>& generators);

/// Finite automaton on residues: states Z_modulus, start and accept state 0,
/// reading the j-th generator (or its inverse) adds (or subtracts) weights[j-1].
struct WeightedAutomaton {
  Alphabet alpha;
  long long modulus = 1;
  std::vector<long long> residues;  // weights reduced mod modulus
  bool accepts(const FreeWord& w) const;
};

/// Throws on modulus < 1 (a zero modulus calls for plain counter membership,
/// not an automaton).
WeightedAutomaton build_weighted(Alphabet a, std::span<const long long> weights,
                                 long long modulus);

/// The accepted language of a weighted automaton is the subgroup of words
/// whose weighted letter sum vanishes mod the modulus; the automaton's state
/// graph is deterministic and complete, hence already folded, and serves
/// directly as the subgroup graph.
SubgroupGraph subgroup_of_weighted(const WeightedAutomaton& wa);

}  // namespace fnfm
