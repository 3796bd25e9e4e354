#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fnfm/errors.hpp"

namespace fnfm {

using Int = boost::multiprecision::cpp_int;

/// A free-group alphabet: `rank` generators, printed with `tag` as prefix
/// ("a1", "b2", ...).  The two factors of a product use tags 'a' and 'b';
/// other tags appear only in internal bookkeeping alphabets.
struct Alphabet {
  int rank = 0;
  char tag = 'a';
  friend bool operator==(const Alphabet&, const Alphabet&) = default;
  friend auto operator<=>(const Alphabet&, const Alphabet&) = default;
};

/// A reduced word in a free group.  Letters are nonzero signed indices:
/// +k is the k-th generator, -k its inverse (1 <= k <= rank).  Every
/// constructor reduces, so instances are reduced by invariant.
class FreeWord {
 public:
  FreeWord() = default;
  explicit FreeWord(Alphabet a) : alpha_(a) {}
  FreeWord(Alphabet a, std::vector<int> raw);

  const Alphabet& alphabet() const { return alpha_; }
  const std::vector<int>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  long long length() const { return static_cast<long long>(letters_.size()); }

  FreeWord inverse() const;
  FreeWord operator*(const FreeWord& rhs) const;
  FreeWord pow(long long k) const;
  FreeWord pow(const Int& k) const;

  /// Same letters over an alphabet of equal rank but different tag.
  FreeWord retag(Alphabet target) const;

  /// Space-separated tokens, "a2^-1" for inverses, "1" for the empty word.
  std::string str() const;

  friend bool operator==(const FreeWord&, const FreeWord&) = default;
  friend auto operator<=>(const FreeWord& lhs, const FreeWord& rhs) {
    if (auto c = lhs.alpha_ <=> rhs.alpha_; c != 0) return c;
    if (auto c = lhs.letters_.size() <=> rhs.letters_.size(); c != 0) return c;
    return lhs.letters_ <=> rhs.letters_;
  }

 private:
  Alphabet alpha_;
  std::vector<int> letters_;
};

/// Free reduction of a raw letter sequence.
FreeWord reduce(Alphabet a, const std::vector<int>& raw);

/// The primitive root: the unique primitive `root` and maximal `k >= 1`
/// with `w == root.pow(k)`.  Throws Error on the empty word.
std::pair<FreeWord, long long> primitive_root(const FreeWord& w);

/// The set { k : w is a k-th power }, closed under divisors and negation.
/// For the empty word every integer qualifies (`all_integers`).
struct PowerExponents {
  bool all_integers = false;
  std::vector<long long> values;  // sorted, empty iff all_integers
  bool contains(long long k) const;
};
PowerExponents power_exponents(const FreeWord& w);

/// Whether x and z commute (equivalently: one is trivial or both are
/// powers of a common word).
bool commutes(const FreeWord& x, const FreeWord& z);

/// Signed letter counts per generator (the abelianization).
std::vector<long long> exponent_vector(const FreeWord& w);

/// Dot product of the exponent vector with a weight vector.
Int weighted_sum(const FreeWord& w, std::span<const long long> weights);
Int weighted_sum(const FreeWord& w, std::span<const Int> weights);

/// The k with base^k == w, if there is one.
std::optional<long long> match_power(const FreeWord& base, const FreeWord& w);

/// A homomorphism between free groups, given by generator images.
struct FreeHom {
  Alphabet domain;
  Alphabet codomain;
  std::vector<FreeWord> images;  // images[i] = image of generator i+1

  static FreeHom identity(Alphabet a);
  /// Maps generator i of `from` to generator i of `to` (equal ranks).
  static FreeHom relabel(Alphabet from, Alphabet to);

  FreeWord operator()(const FreeWord& w) const;
  /// this followed by next.
  FreeHom then(const FreeHom& next) const;

  bool is_identity() const;
  bool is_trivial() const;
  /// Maps every generator to a single letter, bijectively on signed letters.
  bool is_letter_permutation() const;

  friend bool operator==(const FreeHom&, const FreeHom&) = default;
};

}  // namespace fnfm
