#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fnfm/endo.hpp"
#include "fnfm/word.hpp"

namespace fnfm {

enum class WhAnswer { Yes, No, Unknown };

/// Outcome of one Whitehead-problem query.  A Yes always carries a
/// certificate, re-checked before being returned: `endo` for product-level
/// questions, `component` for free-factor questions.  Unknown arises only
/// when a bounded search runs out of budget; `bound` records that budget.
/// `decided_by` names the obstruction, system or search that settled the
/// instance.
struct WhVerdict {
  WhAnswer answer = WhAnswer::Unknown;
  std::optional<ProductEndo> endo;
  std::optional<FreeHom> component;
  long long bound = 0;
  std::string decided_by;
};

/// Result of Whitehead minimization: the shortest word in the automorphic
/// orbit, together with the automorphisms applied to reach it.  Feeding
/// the input through `moves` in order reproduces `minimal`.
struct WhiteheadMin {
  FreeWord minimal;
  std::vector<FreeHom> moves;
};

/// The finite Whitehead move set for an alphabet: all signed generator
/// permutations plus the multiplier family (one designated letter is kept
/// fixed, every other generator is optionally multiplied by it on either
/// side).  The family contains the inner automorphisms, so conjugation is
/// available as a move.
std::vector<FreeHom> whitehead_moves(Alphabet a);

/// Greedy descent: apply moves that strictly shorten the word (counting a
/// move together with the cyclic reduction it enables) until none does.
WhiteheadMin minimize_whitehead(const FreeWord& w);

/// The least word, under the library ordering, of the minimal-length level
/// of w's automorphic orbit.  A complete orbit invariant: two words lie in
/// one orbit exactly when their canonical words coincide.
FreeWord whitehead_canonical(const FreeWord& w);

/// Is there an automorphism taking u to v?  Complete: minimizes both
/// sides, then searches the minimal-length level.  Yes certificates are
/// composed automorphisms with component(u) == v.
WhVerdict whp_auto_free(const FreeWord& u, const FreeWord& v);

/// Is there any homomorphism from u's group to v's group taking u to v?
/// No only through complete obstructions (abelianization image, power
/// index); Yes through a verified image tuple of total length <= bound;
/// otherwise Unknown(bound).
WhVerdict hom_exists_bounded(const FreeWord& u, const FreeWord& v,
                             long long bound);

/// Injective variant of hom_exists_bounded; certificates additionally
/// pass the injectivity check.
WhVerdict mono_exists_bounded(const FreeWord& u, const FreeWord& v,
                              long long bound);

/// Which Whitehead problem to decide for the product: automorphism,
/// monomorphism or endomorphism.
enum class WhVariant { Auto, Mono, Endo };

/// Decide whether some endomorphism of the named variant maps `source` to
/// `target` in F_n x F_m.  Variant Auto is complete (per-factor Whitehead
/// plus, for equal ranks, the crossing coset).  Variants Mono and Endo
/// run the shape cascade with bounded homomorphism searches where no
/// complete procedure is in scope, so they may return Unknown(bound).
WhVerdict whp_product(const PairElement& source, const PairElement& target,
                      WhVariant variant, long long bound);

}  // namespace fnfm
