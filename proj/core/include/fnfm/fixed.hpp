#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fnfm/endo.hpp"
#include "fnfm/stallings.hpp"

namespace fnfm {

/// Isomorphism-class verdict for a fixed- or periodic-subgroup report.
/// Lattice marks the exponent-lattice shapes (free abelian, rank read off
/// the generator list); FinGen covers every other finitely generated
/// shape of rank at least two.  ConditionalOnOracle means the structural
/// description is exact but generators need a component basis that was
/// neither supplied nor derivable; the membership test is valid anyway.
enum class SubgroupVerdict {
  Trivial,
  InfiniteCyclic,
  Lattice,
  FinGen,
  NotFinGen,
  ConditionalOnOracle,
};

std::string verdict_name(SubgroupVerdict v);

/// User-supplied bases for the fixed (or periodic) subgroups of the
/// free-group component maps: words_a for the map acting on the first
/// factor, words_b for the second.  For crossing endomorphisms the
/// relevant component map is the composite acting on that factor.  Every
/// supplied word is verified against its component map before use; an
/// engaged empty list asserts that the component subgroup is trivial.
struct SubgroupBasisInput {
  std::optional<std::vector<FreeWord>> words_a;
  std::optional<std::vector<FreeWord>> words_b;
};

/// Description of the fixed subgroup of a product endomorphism.
struct FixReport {
  EndoType etype;
  SubgroupVerdict verdict;
  /// A free (or free abelian) generating set; empty for Trivial,
  /// NotFinGen and ConditionalOnOracle.
  std::vector<PairElement> generators;
  std::string structure_note;
  /// Exact membership in the fixed subgroup, valid for every verdict.
  std::function<bool(const PairElement&)> membership_test;
  /// For NotFinGen: the instance of the imbalance argument.
  std::optional<std::string> witness;
};

/// Computes Fix per the type-by-type structure theory.  Throws
/// OracleRequired when the verdict itself hinges on a missing component
/// basis (first-cyclic types); mixed types degrade to the
/// ConditionalOnOracle verdict instead.
FixReport fixed_subgroup(const ProductEndo& e,
                         const std::optional<SubgroupBasisInput>& oracle = {});

/// Whether the weighted letter sum of y vanishes.  This is the counter
/// realization of the balance-language pushdown: the stack only ever
/// holds one symbol's powers, so an integer counter accepting at zero
/// recognizes the same words.
bool type3_counter_membership(const FreeWord& y, std::span<const long long> weights);

/// Folded graph of <fixbasis> intersected with the subgroup of words
/// whose weighted letter sum vanishes mod `modulus` (which must be >= 1).
SubgroupGraph type3_H_graph(std::span<const long long> weights, long long modulus,
                            Alphabet alpha, const std::vector<FreeWord>& fixbasis);

}  // namespace fnfm
