#pragma once

#include <stdexcept>
#include <string>

namespace fnfm {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A generator pair fails the defining relations of the product:
/// the first-factor images of a_i and b_j (or the second-factor ones)
/// do not commute.
struct CommutationViolation : Error {
  int a_index;      // 1-based index of the a-generator
  int b_index;      // 1-based index of the b-generator
  int component;    // 1 = first factor, 2 = second factor
  CommutationViolation(int ai, int bj, int comp)
      : Error("images of a" + std::to_string(ai) + " and b" + std::to_string(bj) +
              " do not commute in factor " + std::to_string(comp)),
        a_index(ai), b_index(bj), component(comp) {}
};

/// A fixed- or periodic-point basis for a free-group component map is
/// needed but was neither supplied nor derivable.
struct OracleRequired : Error {
  std::string component;
  explicit OracleRequired(const std::string& comp)
      : Error("a subgroup basis for " + comp +
              " is required (supply one or use a derivable component map)"),
        component(comp) {}
};

struct NotAnAutomorphism : Error {
  NotAnAutomorphism() : Error("endomorphism is not an automorphism") {}
};

struct NotUniformlyContinuous : Error {
  NotUniformlyContinuous()
      : Error("endomorphism does not extend continuously to the boundary") {}
};

/// The supplied point fails to be fixed within the tested depth.
struct NotFixedAtDepth : Error {
  long long depth;
  explicit NotFixedAtDepth(long long d)
      : Error("point is not fixed at depth " + std::to_string(d)), depth(d) {}
};

/// An exact computation would exceed a hard resource cap (for example a
/// residue automaton with too many states, or a word power too long to
/// materialize).
struct ResourceLimit : Error {
  explicit ResourceLimit(const std::string& what) : Error(what) {}
};

/// A bounded period search ran out: the word claimed periodic did not
/// return to itself within the limit.
struct PeriodBoundExceeded : Error {
  long long limit;
  explicit PeriodBoundExceeded(long long l)
      : Error("no period found within " + std::to_string(l) + " iterations"),
        limit(l) {}
};

}  // namespace fnfm
