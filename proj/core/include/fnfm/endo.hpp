#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fnfm/stallings.hpp"
#include "fnfm/word.hpp"

namespace fnfm {

/// An element (x, y) of the product of the two free factors.
struct PairElement {
  FreeWord x;
  FreeWord y;
  friend bool operator==(const PairElement&, const PairElement&) = default;
};

/// Raw input: an endomorphism of F_n x F_m given by the images of the
/// standard generators a_1..a_n of the first factor and b_1..b_m of the
/// second.  First-component words conventionally use Alphabet{n,'a'} and
/// second-component words Alphabet{m,'b'}; the factor alphabets are read
/// off the words themselves (they must be consistent and distinct), so a
/// factor-swapped endomorphism keeps its native tags.
struct EndoSpec {
  int n = 0;
  int m = 0;
  std::vector<PairElement> a_images;
  std::vector<PairElement> b_images;
  friend bool operator==(const EndoSpec&, const EndoSpec&) = default;
};

/// Structural class of a product endomorphism.  Writing the images as
/// Phi(a_i) = (a_i X, a_i Y) and Phi(b_j) = (b_j Z, b_j W) for the four
/// corner maps X, Y, Z, W, the defining relations force each factor's
/// incoming pair of corner maps to be either cyclic (all images powers of
/// one primitive word) or one-sided, which yields exactly seven shapes:
///
///   I    (u^{P_i}, v^{Q_i})        and (u^{R_j}, v^{S_j})    both cyclic
///   II   (1, v^{Q_i})              and (b_j f, v^{S_j})      second cyclic
///   III  (u^{P_i}, 1)              and (u^{R_j}, b_j s)      first cyclic
///   IV   (1, 1)                    and (b_j f, b_j s)        b-driven
///   V    (1, v^{Q_i})              and (1, v^{S_j})          second only
///   VI   (a_i f, 1)                and (1, b_j s)            diagonal
///   VII  (1, a_i t)                and (b_j f, 1)            crossing
///
/// Shapes II, III, IV and V also occur mirrored; those classify as the
/// same type with `swapped` set, and the canonical data describes the
/// factor-swapped endomorphism.
enum class EndoType { I, II, III, IV, V, VI, VII };

std::string type_name(EndoType t);

/// Extracted canonical form.  Only the fields that the type's shape uses
/// are populated; "first"/"second" refer to the canonical orientation
/// (the swapped one when `ProductEndo::swapped()` is set).
struct ClassifiedData {
  std::optional<FreeWord> first_root;   ///< u: root of the first-factor images
  std::optional<FreeWord> second_root;  ///< v: root of the second-factor images
  std::vector<long long> a_to_first;    ///< P: exponents of u in a-images
  std::vector<long long> a_to_second;   ///< Q: exponents of v in a-images
  std::vector<long long> b_to_first;    ///< R: exponents of u in b-images
  std::vector<long long> b_to_second;   ///< S: exponents of v in b-images
  std::optional<FreeHom> into_first;    ///< second-factor gens into the first factor
  std::optional<FreeHom> on_first;      ///< endomorphism of the first factor
  std::optional<FreeHom> on_second;     ///< endomorphism of the second factor
  std::optional<FreeHom> into_second;   ///< first-factor gens into the second factor
};

struct MorphismFlags {
  bool injective = false;
  bool surjective = false;
  bool automorphism = false;
};

/// A validated, classified endomorphism of F_n x F_m (n, m >= 2).
class ProductEndo {
 public:
  /// Validates the defining relations (throws CommutationViolation) and
  /// classifies.  Also throws Error on malformed input (wrong ranks,
  /// wrong alphabets, n or m below 2).
  explicit ProductEndo(EndoSpec spec);

  int n() const { return spec_.n; }
  int m() const { return spec_.m; }
  Alphabet first_alphabet() const { return first_alpha_; }
  Alphabet second_alphabet() const { return second_alpha_; }

  EndoType type() const { return type_; }
  bool swapped() const { return swapped_; }
  const ClassifiedData& data() const { return data_; }
  const EndoSpec& spec() const { return spec_; }

  /// Corner maps of the endomorphism as given (not factor-swapped).
  const FreeHom& a_first() const { return a_first_; }    // F_n -> F_n
  const FreeHom& a_second() const { return a_second_; }  // F_n -> F_m
  const FreeHom& b_first() const { return b_first_; }    // F_m -> F_n
  const FreeHom& b_second() const { return b_second_; }  // F_m -> F_m

  /// Image of an arbitrary element, through the canonical form.
  PairElement apply(const PairElement& g) const;

  /// apply k times (k >= 0).
  PairElement iterate(PairElement g, long long k) const;

  /// The composition "this, then next" as a fresh classified endomorphism.
  ProductEndo then(const ProductEndo& next) const;

  /// The conjugate by the factor swap (x,y) -> (y,x): an endomorphism of
  /// F_m x F_n over alphabets tagged 'b' and 'a'.
  ProductEndo swap_factors() const;

  MorphismFlags flags() const;

  /// Inverse of an automorphism (throws NotAnAutomorphism otherwise).
  ProductEndo inverse() const;

 private:
  EndoSpec spec_;
  Alphabet first_alpha_, second_alpha_;
  FreeHom a_first_, a_second_, b_first_, b_second_;
  EndoType type_ = EndoType::VI;
  bool swapped_ = false;
  ClassifiedData data_;
};

/// Whether a free-group homomorphism is injective: by hopficity this is
/// exactly when the images generate a subgroup of full domain rank.
bool hom_injective(const FreeHom& h);

/// Whether the images generate the whole codomain.
bool hom_surjective(const FreeHom& h);

/// Inverse images of a bijective homomorphism (throws NotAnAutomorphism
/// when not bijective).
FreeHom hom_inverse(const FreeHom& h);

}  // namespace fnfm
