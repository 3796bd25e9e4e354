#include "fnfm/endo.hpp"

#include <array>
#include <tuple>

namespace fnfm {

std::string type_name(EndoType t) {
  switch (t) {
    case EndoType::I: return "I";
    case EndoType::II: return "II";
    case EndoType::III: return "III";
    case EndoType::IV: return "IV";
    case EndoType::V: return "V";
    case EndoType::VI: return "VI";
    case EndoType::VII: return "VII";
  }
  throw Error("unknown type");
}

namespace {

// Classification by the triviality pattern of the four corner maps,
// index = X-trivial*8 + Y-trivial*4 + Z-trivial*2 + W-trivial.  Ambiguous
// degenerate patterns (three or four trivial corners) are pinned to one
// canonical type; swapping exchanges the pattern as (x,y,z,w) -> (w,z,y,x).
struct Row {
  EndoType type;
  bool swapped;
};
constexpr std::array<Row, 16> kTable{{
    {EndoType::I, false},    // 0000
    {EndoType::II, true},    // 0001
    {EndoType::III, true},   // 0010
    {EndoType::IV, true},    // 0011
    {EndoType::III, false},  // 0100
    {EndoType::V, true},     // 0101
    {EndoType::VI, false},   // 0110
    {EndoType::VI, false},   // 0111  only X
    {EndoType::II, false},   // 1000
    {EndoType::VII, false},  // 1001
    {EndoType::V, false},    // 1010
    {EndoType::VII, false},  // 1011  only Y
    {EndoType::IV, false},   // 1100
    {EndoType::VII, false},  // 1101  only Z
    {EndoType::VI, false},   // 1110  only W
    {EndoType::VI, false},   // 1111  zero map
}};

EndoSpec swapped_spec(const EndoSpec& s) {
  EndoSpec out;
  out.n = s.m;
  out.m = s.n;
  for (const auto& img : s.b_images) out.a_images.push_back({img.y, img.x});
  for (const auto& img : s.a_images) out.b_images.push_back({img.y, img.x});
  return out;
}

// Common primitive root and its exponents across one factor's images.
// The defining relations make this total once both corner maps into the
// factor are nontrivial; the root is taken from the first nontrivial
// image, which fixes its sign.
std::tuple<FreeWord, std::vector<long long>, std::vector<long long>> extract_cyclic(
    const std::vector<FreeWord>& from_a, const std::vector<FreeWord>& from_b) {
  const FreeWord* first = nullptr;
  for (const auto& w : from_a)
    if (!w.empty() && !first) first = &w;
  for (const auto& w : from_b)
    if (!w.empty() && !first) first = &w;
  if (!first) throw Error("internal: cyclic factor with no nontrivial image");
  FreeWord root = primitive_root(*first).first;
  auto exps = [&root](const std::vector<FreeWord>& ws) {
    std::vector<long long> out;
    for (const auto& w : ws) {
      auto k = match_power(root, w);
      if (!k) throw Error("internal: classified image is not a power of the root");
      out.push_back(*k);
    }
    return out;
  };
  return {root, exps(from_a), exps(from_b)};
}

FreeWord cyclic_image(const FreeWord& root, const std::vector<long long>& on_x,
                      const std::vector<long long>& on_y, const FreeWord& x,
                      const FreeWord& y) {
  Int e = weighted_sum(x, on_x) + weighted_sum(y, on_y);
  return root.pow(e);
}

// The shape formulas, in the canonical orientation.  `first` is the
// canonical first-factor alphabet (the original second factor for a
// swapped endomorphism).
PairElement apply_canonical(EndoType t, const ClassifiedData& d, Alphabet first,
                            const PairElement& g) {
  switch (t) {
    case EndoType::I:
      return {cyclic_image(*d.first_root, d.a_to_first, d.b_to_first, g.x, g.y),
              cyclic_image(*d.second_root, d.a_to_second, d.b_to_second, g.x, g.y)};
    case EndoType::II:
      return {(*d.into_first)(g.y),
              cyclic_image(*d.second_root, d.a_to_second, d.b_to_second, g.x, g.y)};
    case EndoType::III:
      return {cyclic_image(*d.first_root, d.a_to_first, d.b_to_first, g.x, g.y),
              (*d.on_second)(g.y)};
    case EndoType::IV:
      return {(*d.into_first)(g.y), (*d.on_second)(g.y)};
    case EndoType::V:
      return {FreeWord(first),
              cyclic_image(*d.second_root, d.a_to_second, d.b_to_second, g.x, g.y)};
    case EndoType::VI:
      return {(*d.on_first)(g.x), (*d.on_second)(g.y)};
    case EndoType::VII:
      return {(*d.into_first)(g.y), (*d.into_second)(g.x)};
  }
  throw Error("unknown type");
}

}  // namespace

ProductEndo::ProductEndo(EndoSpec spec) : spec_(std::move(spec)) {
  if (spec_.n < 2 || spec_.m < 2) throw Error("both factor ranks must be at least 2");
  if (static_cast<int>(spec_.a_images.size()) != spec_.n ||
      static_cast<int>(spec_.b_images.size()) != spec_.m)
    throw Error("image count does not match the factor ranks");

  first_alpha_ = spec_.a_images[0].x.alphabet();
  second_alpha_ = spec_.a_images[0].y.alphabet();
  if (first_alpha_.rank != spec_.n || second_alpha_.rank != spec_.m ||
      first_alpha_ == second_alpha_)
    throw Error("image alphabets do not match the factor ranks");
  for (const auto& img : spec_.a_images)
    if (img.x.alphabet() != first_alpha_ || img.y.alphabet() != second_alpha_)
      throw Error("inconsistent image alphabets");
  for (const auto& img : spec_.b_images)
    if (img.x.alphabet() != first_alpha_ || img.y.alphabet() != second_alpha_)
      throw Error("inconsistent image alphabets");

  for (int i = 0; i < spec_.n; ++i)
    for (int j = 0; j < spec_.m; ++j) {
      if (!commutes(spec_.a_images[i].x, spec_.b_images[j].x))
        throw CommutationViolation(i + 1, j + 1, 1);
      if (!commutes(spec_.a_images[i].y, spec_.b_images[j].y))
        throw CommutationViolation(i + 1, j + 1, 2);
    }

  auto column = [](const std::vector<PairElement>& imgs, bool first) {
    std::vector<FreeWord> out;
    for (const auto& img : imgs) out.push_back(first ? img.x : img.y);
    return out;
  };
  a_first_ = FreeHom{first_alpha_, first_alpha_, column(spec_.a_images, true)};
  a_second_ = FreeHom{first_alpha_, second_alpha_, column(spec_.a_images, false)};
  b_first_ = FreeHom{second_alpha_, first_alpha_, column(spec_.b_images, true)};
  b_second_ = FreeHom{second_alpha_, second_alpha_, column(spec_.b_images, false)};

  int pattern = (a_first_.is_trivial() ? 8 : 0) + (a_second_.is_trivial() ? 4 : 0) +
                (b_first_.is_trivial() ? 2 : 0) + (b_second_.is_trivial() ? 1 : 0);
  type_ = kTable[pattern].type;
  swapped_ = kTable[pattern].swapped;

  if (swapped_) {
    ProductEndo mirror(swapped_spec(spec_));
    if (mirror.type_ != type_ || mirror.swapped_)
      throw Error("internal: mirror classification mismatch");
    data_ = mirror.data_;
    return;
  }

  switch (type_) {
    case EndoType::I: {
      auto [u, p, r] = extract_cyclic(a_first_.images, b_first_.images);
      auto [v, q, s] = extract_cyclic(a_second_.images, b_second_.images);
      data_.first_root = u;
      data_.a_to_first = p;
      data_.b_to_first = r;
      data_.second_root = v;
      data_.a_to_second = q;
      data_.b_to_second = s;
      break;
    }
    case EndoType::II: {
      auto [v, q, s] = extract_cyclic(a_second_.images, b_second_.images);
      data_.second_root = v;
      data_.a_to_second = q;
      data_.b_to_second = s;
      data_.into_first = b_first_;
      break;
    }
    case EndoType::III: {
      auto [u, p, r] = extract_cyclic(a_first_.images, b_first_.images);
      data_.first_root = u;
      data_.a_to_first = p;
      data_.b_to_first = r;
      data_.on_second = b_second_;
      break;
    }
    case EndoType::IV:
      data_.into_first = b_first_;
      data_.on_second = b_second_;
      break;
    case EndoType::V: {
      auto [v, q, s] = extract_cyclic(a_second_.images, b_second_.images);
      data_.second_root = v;
      data_.a_to_second = q;
      data_.b_to_second = s;
      break;
    }
    case EndoType::VI:
      data_.on_first = a_first_;
      data_.on_second = b_second_;
      break;
    case EndoType::VII:
      data_.into_second = a_second_;
      data_.into_first = b_first_;
      break;
  }
}

PairElement ProductEndo::apply(const PairElement& g) const {
  if (g.x.alphabet() != first_alpha_ || g.y.alphabet() != second_alpha_)
    throw Error("element alphabets do not match the endomorphism");
  if (swapped_) {
    // The canonical data describes the factor-swapped endomorphism, so
    // conjugate by the swap.
    PairElement img = apply_canonical(type_, data_, second_alpha_, {g.y, g.x});
    return {img.y, img.x};
  }
  return apply_canonical(type_, data_, first_alpha_, g);
}

PairElement ProductEndo::iterate(PairElement g, long long k) const {
  if (k < 0) throw Error("iterate expects a nonnegative count");
  for (long long i = 0; i < k; ++i) g = apply(g);
  return g;
}

ProductEndo ProductEndo::then(const ProductEndo& next) const {
  if (next.first_alpha_ != first_alpha_ || next.second_alpha_ != second_alpha_)
    throw Error("composition across different products");
  EndoSpec out;
  out.n = spec_.n;
  out.m = spec_.m;
  for (const auto& img : spec_.a_images) out.a_images.push_back(next.apply(img));
  for (const auto& img : spec_.b_images) out.b_images.push_back(next.apply(img));
  return ProductEndo(std::move(out));
}

ProductEndo ProductEndo::swap_factors() const { return ProductEndo(swapped_spec(spec_)); }

MorphismFlags ProductEndo::flags() const {
  MorphismFlags f;
  switch (type_) {
    case EndoType::VI:
      f.injective = hom_injective(a_first_) && hom_injective(b_second_);
      f.surjective = hom_surjective(a_first_) && hom_surjective(b_second_);
      break;
    case EndoType::VII:
      f.injective = hom_injective(a_second_) && hom_injective(b_first_);
      f.surjective = hom_surjective(a_second_) && hom_surjective(b_first_);
      break;
    default:
      // Types I to V send some pair of non-commuting generators to a
      // commuting pair and miss all but a cyclic slice of one factor:
      // never injective, never surjective.
      break;
  }
  f.automorphism = f.injective && f.surjective;
  return f;
}

ProductEndo ProductEndo::inverse() const {
  if (!flags().automorphism) throw NotAnAutomorphism();
  EndoSpec out;
  out.n = spec_.n;
  out.m = spec_.m;
  if (type_ == EndoType::VI) {
    FreeHom inv_first = hom_inverse(a_first_);
    FreeHom inv_second = hom_inverse(b_second_);
    for (int i = 0; i < spec_.n; ++i)
      out.a_images.push_back({inv_first.images[i], FreeWord(second_alpha_)});
    for (int j = 0; j < spec_.m; ++j)
      out.b_images.push_back({FreeWord(first_alpha_), inv_second.images[j]});
  } else {
    // Crossing automorphism (x,y) -> (f(y), t(x)): the inverse crosses
    // back, (x,y) -> (t^-1(y), f^-1(x)).
    FreeHom new_into_first = hom_inverse(a_second_);   // t^-1: F_m -> F_n
    FreeHom new_into_second = hom_inverse(b_first_);   // f^-1: F_n -> F_m
    for (int i = 0; i < spec_.n; ++i)
      out.a_images.push_back({FreeWord(first_alpha_), new_into_second.images[i]});
    for (int j = 0; j < spec_.m; ++j)
      out.b_images.push_back({new_into_first.images[j], FreeWord(second_alpha_)});
  }
  return ProductEndo(std::move(out));
}

bool hom_injective(const FreeHom& h) {
  return SubgroupGraph::fold(h.codomain, h.images).rank() == h.domain.rank;
}

bool hom_surjective(const FreeHom& h) {
  auto g = SubgroupGraph::fold(h.codomain, h.images);
  for (int l = 1; l <= h.codomain.rank; ++l)
    if (!g.contains(FreeWord(h.codomain, {l}))) return false;
  return true;
}

FreeHom hom_inverse(const FreeHom& h) {
  if (!hom_injective(h) || !hom_surjective(h)) throw NotAnAutomorphism();
  auto exprs = express_standard_basis(h.codomain, h.images);
  if (!exprs) throw Error("internal: bijective images failed to express the basis");
  FreeHom inv{h.codomain, h.domain, {}};
  for (auto& e : *exprs) inv.images.push_back(e.retag(h.domain));
  return inv;
}

}  // namespace fnfm
