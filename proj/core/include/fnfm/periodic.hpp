#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fnfm/fixed.hpp"

namespace fnfm {

/// Description of the periodic subgroup, the union of the fixed
/// subgroups of all iterates.
struct PerReport {
  EndoType etype;
  SubgroupVerdict verdict;
  std::vector<PairElement> generators;
  std::string structure_note;
  /// Upper bound for the period of any periodic point, when known.
  std::optional<long long> period_bound;
  /// Certified points grouped by exact period: the report's generators,
  /// plus the odd-period diagonal points for crossing endomorphisms.
  std::map<long long, std::vector<PairElement>> per_period_data;
  /// For NotFinGen: the instance of the imbalance argument.
  std::optional<std::string> witness;
};

/// Computes Per per the type-by-type structure theory.  Oracle words here
/// are bases for the periodic subgroups of the component maps (for
/// crossing endomorphisms, of the composites), each verified periodic on
/// load.  Mirrors the oracle policy of fixed_subgroup: first-cyclic types
/// throw OracleRequired, mixed types degrade to ConditionalOnOracle.
PerReport periodic_subgroup(const ProductEndo& e,
                            const std::optional<SubgroupBasisInput>& oracle = {});

/// Least k <= limit with h^k fixing y, if any.
std::optional<long long> bounded_period(const FreeHom& h, const FreeWord& y,
                                        long long limit);

/// For the first-cyclic shape with |scalar| != 1: the first-coordinate
/// exponent a making (u^a, w) periodic with the period of w.  `orbit` is
/// the component orbit w, w phi, ..., of length exactly that period (it
/// must close back to w).  nullopt when the divisibility criterion
/// fails; the answer is independent of traversing the orbit once or any
/// number of times.
std::optional<Int> type3_per_criterion(const Int& uP,
                                       std::span<const long long> weights,
                                       const std::vector<FreeWord>& orbit);

}  // namespace fnfm
