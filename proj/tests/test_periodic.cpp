#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "fnfm/errors.hpp"
#include "fnfm/fixed.hpp"
#include "fnfm/periodic.hpp"
#include "support.hpp"

using namespace fnfm;
using testutil::all_words;
using testutil::W;

namespace {

const Alphabet A2{2, 'a'};
const Alphabet B2{2, 'b'};

// String shorthands below follow support.hpp: for the second factor,
// 'a' spells b1 and 'b' spells b2.
PairElement pe(const char* x, const char* y) { return {W(A2, x), W(B2, y)}; }

EndoSpec flip_spec(const EndoSpec& s) {
  EndoSpec t;
  t.n = s.m;
  t.m = s.n;
  for (const auto& g : s.b_images) t.a_images.push_back({g.y, g.x});
  for (const auto& g : s.a_images) t.b_images.push_back({g.y, g.x});
  return t;
}

std::vector<PairElement> brute_periodic(const ProductEndo& e, int lx, int ly,
                                        long long maxk) {
  std::vector<PairElement> out;
  for (const auto& x : all_words(e.first_alphabet(), lx))
    for (const auto& y : all_words(e.second_alphabet(), ly)) {
      PairElement g{x, y};
      PairElement cur = g;
      for (long long k = 1; k <= maxk; ++k) {
        cur = e.apply(cur);
        if (cur == g) {
          out.push_back(g);
          break;
        }
      }
    }
  return out;
}

bool same_pairs(std::vector<PairElement> lhs, std::vector<PairElement> rhs) {
  auto less = [](const PairElement& p, const PairElement& q) {
    if (auto c = p.x <=> q.x; c != 0) return c < 0;
    return (p.y <=> q.y) < 0;
  };
  std::sort(lhs.begin(), lhs.end(), less);
  std::sort(rhs.begin(), rhs.end(), less);
  return lhs == rhs;
}

// Every listed point must return at exactly its claimed period, every
// generator must be listed, and the claimed bound must cover all keys.
void check_per(const ProductEndo& e, const PerReport& rep) {
  for (const auto& [k, pts] : rep.per_period_data) {
    CHECK(k >= 1);
    if (rep.period_bound) CHECK(k <= *rep.period_bound);
    for (const auto& p : pts) {
      CHECK(e.iterate(p, k) == p);
      for (long long d = 1; d < k; ++d) CHECK(e.iterate(p, d) != p);
    }
  }
  for (const auto& g : rep.generators) {
    bool listed = false;
    for (const auto& [k, pts] : rep.per_period_data)
      for (const auto& p : pts)
        if (p == g) listed = true;
    CHECK(listed);
  }
  if (rep.verdict == SubgroupVerdict::Trivial) CHECK(rep.generators.empty());
  if (rep.verdict == SubgroupVerdict::InfiniteCyclic)
    CHECK(rep.generators.size() == 1);
  if (rep.verdict == SubgroupVerdict::NotFinGen) {
    CHECK(rep.generators.empty());
    CHECK(rep.witness.has_value());
  }
}

}  // namespace

TEST_CASE("type I periodic subgroup: order-two transition matrix") {
  // u = a1 a2, v = b1, transition matrix [[0,1],[1,0]]: every exponent
  // pair recurs with period two, while nothing is fixed.
  EndoSpec s;
  s.n = s.m = 2;
  s.a_images = {pe("ab", "a"), pe("BA", "")};
  s.b_images = {pe("ab", ""), pe("", "aaaaa")};
  ProductEndo e(s);
  REQUIRE(e.type() == EndoType::I);
  REQUIRE(!e.swapped());

  PerReport rep = periodic_subgroup(e);
  CHECK(rep.verdict == SubgroupVerdict::Lattice);
  CHECK(rep.generators.size() == 2);
  CHECK(rep.period_bound == 12);
  check_per(e, rep);
  // Both lattice generators flip exponents, so both have period two.
  CHECK(rep.per_period_data.count(2));
  CHECK(rep.per_period_data.at(2).size() == 2);

  // A mixed power pair recurs as well.
  PairElement p{W(A2, "ab"), W(B2, "A")};
  CHECK(e.apply(p) != p);
  CHECK(e.iterate(p, 2) == p);

  // Brute force: periodic points in a box are exactly the power pairs.
  std::vector<PairElement> expected;
  for (const auto& x : all_words(A2, 4))
    for (const auto& y : all_words(B2, 2)) {
      if (!match_power(W(A2, "ab"), x)) continue;
      if (!match_power(W(B2, "a"), y)) continue;
      expected.push_back({x, y});
    }
  CHECK(same_pairs(brute_periodic(e, 4, 2, 4), expected));

  // Contrast: the fixed subgroup is only the diagonal exponent line.
  FixReport fix = fixed_subgroup(e);
  CHECK(fix.verdict == SubgroupVerdict::Lattice);
  CHECK(fix.generators.size() == 1);
}

TEST_CASE("type I periodic subgroup: negation matrix and nonsingular case") {
  // Transition matrix -I: whole exponent lattice, all of period two.
  EndoSpec s;
  s.n = s.m = 2;
  s.a_images = {pe("A", ""), pe("", "aaa")};
  s.b_images = {pe("", "A"), pe("aaaaa", "")};
  ProductEndo e(s);
  REQUIRE(e.type() == EndoType::I);
  PerReport rep = periodic_subgroup(e);
  CHECK(rep.verdict == SubgroupVerdict::Lattice);
  CHECK(rep.generators.size() == 2);
  check_per(e, rep);
  CHECK(fixed_subgroup(e).verdict == SubgroupVerdict::Trivial);
  for (const auto& g : rep.generators) {
    CHECK(e.apply(g) != g);
    CHECK(e.iterate(g, 2) == g);
  }

  // No eigenvalue is a root of unity: nothing recurs but the identity.
  EndoSpec t;
  t.n = t.m = 2;
  t.a_images = {pe("aa", "a"), pe("a", "a")};
  t.b_images = {pe("A", "a"), pe("", "a")};
  ProductEndo f(t);
  REQUIRE(f.type() == EndoType::I);
  PerReport repf = periodic_subgroup(f);
  CHECK(repf.verdict == SubgroupVerdict::Trivial);
  CHECK(repf.generators.empty());
  CHECK(brute_periodic(f, 2, 2, 3).size() == 1);  // only (1, 1)
}

TEST_CASE("type II periodic subgroup: companion matrix slice") {
  // v = b1, second-root image a1, multipliers q = 1, s = 0: the slice
  // exponents swap each step, giving a rank-two recurrent lattice even
  // though the fixed subgroup is only the diagonal line.
  EndoSpec s;
  s.n = s.m = 2;
  s.a_images = {pe("", "a"), pe("", "")};
  s.b_images = {pe("a", ""), pe("", "aa")};
  ProductEndo e(s);
  REQUIRE(e.type() == EndoType::II);
  REQUIRE(!e.swapped());

  PerReport rep = periodic_subgroup(e);
  CHECK(rep.verdict == SubgroupVerdict::Lattice);
  CHECK(rep.generators.size() == 2);
  CHECK(rep.period_bound == 12);
  check_per(e, rep);
  // (a1, 1) and (1, b1) swap into each other.
  CHECK(same_pairs(rep.generators, {pe("a", ""), pe("", "a")}));
  CHECK(e.apply(pe("a", "")) == pe("", "a"));
  CHECK(e.apply(pe("", "a")) == pe("a", ""));

  // The fixed line sits inside the periodic lattice.
  FixReport fix = fixed_subgroup(e);
  REQUIRE(fix.verdict == SubgroupVerdict::InfiniteCyclic);
  CHECK(e.apply(fix.generators[0]) == fix.generators[0]);

  // Brute force: exactly the pairs of powers of a1 and b1.
  std::vector<PairElement> expected;
  for (const auto& x : all_words(A2, 2))
    for (const auto& y : all_words(B2, 2)) {
      if (!match_power(W(A2, "a"), x)) continue;
      if (!match_power(W(B2, "a"), y)) continue;
      expected.push_back({x, y});
    }
  CHECK(same_pairs(brute_periodic(e, 2, 2, 12), expected));
}

TEST_CASE("type II periodic subgroup: trivial second-root image") {
  // into_first kills v = b1 (only b2 maps across), so periodic points
  // live on the second-root axis and survive exactly for sign
  // multipliers.
  EndoSpec s;
  s.n = s.m = 2;
  s.a_images = {pe("", "a"), pe("", "aa")};
  s.b_images = {pe("", "A"), pe("a", "")};
  ProductEndo e(s);
  REQUIRE(e.type() == EndoType::II);

  PerReport rep = periodic_subgroup(e);
  CHECK(rep.verdict == SubgroupVerdict::InfiniteCyclic);
  CHECK(rep.period_bound == 2);
  CHECK(same_pairs(rep.generators, {pe("", "a")}));
  check_per(e, rep);
  CHECK(e.apply(pe("", "a")) == pe("", "A"));
  // The same endomorphism fixes nothing.
  CHECK(fixed_subgroup(e).verdict == SubgroupVerdict::Trivial);

  // Multiplier 2 instead: trivial.
  EndoSpec t = s;
  t.b_images[0] = pe("", "aa");
  ProductEndo f(t);
  REQUIRE(f.type() == EndoType::II);
  PerReport repf = periodic_subgroup(f);
  CHECK(repf.verdict == SubgroupVerdict::Trivial);
  CHECK(repf.period_bound == 1);
  CHECK(brute_periodic(f, 2, 2, 12).size() == 1);

  // Multiplier 1: periodic and fixed subgroups coincide.
  EndoSpec r = s;
  r.b_images[0] = pe("", "a");
  ProductEndo h(r);
  PerReport reph = periodic_subgroup(h);
  CHECK(reph.verdict == SubgroupVerdict::InfiniteCyclic);
  CHECK(reph.period_bound == 1);
  CHECK(same_pairs(reph.generators, fixed_subgroup(h).generators));
}

TEST_CASE("type III periodic subgroup: scalar one over a letter swap") {
  // u = a1 with scalar 1; the component map swaps b1 and b2 and the
  // weights (1, -1) balance over every orbit, so Per = Z x F_2.
  EndoSpec s;
  s.n = s.m = 2;
  s.a_images = {pe("a", ""), pe("aaa", "")};
  s.b_images = {pe("a", "b"), pe("A", "a")};
  ProductEndo e(s);
  REQUIRE(e.type() == EndoType::III);
  REQUIRE(!e.swapped());

  PerReport rep = periodic_subgroup(e);
  CHECK(rep.verdict == SubgroupVerdict::FinGen);
  CHECK(rep.generators.size() == 3);
  CHECK(rep.period_bound == 2);
  check_per(e, rep);
  // The first root axis is fixed, the component letters swap back in two.
  CHECK(rep.per_period_data.count(1));
  CHECK(rep.per_period_data.count(2));
  CHECK(rep.per_period_data.at(2).size() == 2);

  // Brute force: periodic exactly when the first coordinate is a power
  // of the root (the balance vanishes identically for a swap with
  // opposite weights).
  std::vector<PairElement> expected;
  for (const auto& x : all_words(A2, 2))
    for (const auto& y : all_words(B2, 2)) {
      if (!match_power(W(A2, "a"), x)) continue;
      expected.push_back({x, y});
    }
  CHECK(same_pairs(brute_periodic(e, 2, 2, 4), expected));
}

TEST_CASE("type III periodic subgroup: scalar one, unbalanced, not finitely generated") {
  // Identity component with weights (1, -1): the balance is a nonzero
  // homomorphism from a rank-two subgroup, so the kernel side is not
  // finitely generated.  Periodic and fixed points coincide here.
  EndoSpec s;
  s.n = s.m = 2;
  s.a_images = {pe("a", ""), pe("", "")};
  s.b_images = {pe("a", "a"), pe("A", "b")};
  ProductEndo e(s);
  REQUIRE(e.type() == EndoType::III);

  PerReport rep = periodic_subgroup(e);
  CHECK(rep.verdict == SubgroupVerdict::NotFinGen);
  CHECK(rep.period_bound == 1);
  REQUIRE(rep.witness.has_value());
  CHECK(rep.witness->find("not finitely generated") != std::string::npos);
  check_per(e, rep);

  FixReport fix = fixed_subgroup(e);
  CHECK(fix.verdict == SubgroupVerdict::NotFinGen);
  for (const auto& x : all_words(A2, 1))
    for (const auto& y : all_words(B2, 3)) {
      PairElement g{x, y};
      bool per = e.iterate(g, 1) == g;  // scalar one, identity component
      CHECK(per == fix.membership_test(g));
    }
}

TEST_CASE("type III periodic subgroup: scalar minus one over the identity") {
  // The alternating balance cancels over doubled orbits of an identity
  // component, so every (u^a, y) has period at most two, while the fixed
  // subgroup needs the even-sum residue condition.
  EndoSpec s;
  s.n = s.m = 2;
  s.a_images = {pe("A", ""), pe("aa", "")};
  s.b_images = {pe("a", "a"), pe("a", "b")};
  ProductEndo e(s);
  REQUIRE(e.type() == EndoType::III);

  PerReport rep = periodic_subgroup(e);
  CHECK(rep.verdict == SubgroupVerdict::FinGen);
  CHECK(rep.generators.size() == 3);
  CHECK(rep.period_bound == 2);
  check_per(e, rep);

  // Periodic is strictly larger than fixed: (1, b1) flips its first
  // exponent and returns.
  FixReport fix = fixed_subgroup(e);
  REQUIRE(fix.verdict == SubgroupVerdict::FinGen);
  CHECK(!fix.membership_test(pe("", "a")));
  CHECK(e.iterate(pe("", "a"), 2) == pe("", "a"));

  // Brute force: periodic exactly when the first coordinate is a power
  // of the root.
  std::vector<PairElement> expected;
  for (const auto& x : all_words(A2, 2))
    for (const auto& y : all_words(B2, 2)) {
      if (!match_power(W(A2, "a"), x)) continue;
      expected.push_back({x, y});
    }
  CHECK(same_pairs(brute_periodic(e, 2, 2, 2), expected));
}

TEST_CASE("type III periodic subgroup: scalar minus one, alternating imbalance") {
  // Component swap with weights (1, 0): each letter's doubled orbit has
  // nonzero alternating balance, so the kernel side is not finitely
  // generated, yet products like b1 b2 do balance and recur.
  EndoSpec s;
  s.n = s.m = 2;
  s.a_images = {pe("A", ""), pe("aa", "")};
  s.b_images = {pe("a", "b"), pe("", "a")};
  ProductEndo e(s);
  REQUIRE(e.type() == EndoType::III);

  PerReport rep = periodic_subgroup(e);
  CHECK(rep.verdict == SubgroupVerdict::NotFinGen);
  CHECK(rep.period_bound == 4);
  REQUIRE(rep.witness.has_value());
  CHECK(rep.witness->find("not finitely generated") != std::string::npos);
  check_per(e, rep);

  // Brute force against the alternating balance computed directly.
  FreeHom swap{B2, B2, {W(B2, "b"), W(B2, "a")}};
  std::vector<long long> R{1, 0};
  std::vector<PairElement> expected;
  for (const auto& x : all_words(A2, 2)) {
    if (!match_power(W(A2, "a"), x)) continue;
    for (const auto& y : all_words(B2, 3)) {
      auto pi = bounded_period(swap, y, 4);
      REQUIRE(pi.has_value());
      Int balance(0);
      FreeWord cur = y;
      for (long long t = 0; t < 2 * *pi; ++t) {
        Int term = weighted_sum(cur, R);
        balance += (t % 2 == 0) ? -term : term;
        cur = swap(cur);
      }
      if (balance == 0) expected.push_back({x, y});
    }
  }
  CHECK(same_pairs(brute_periodic(e, 2, 3, 4), expected));
}

TEST_CASE("type III periodic subgroup: scalar two over the identity") {
  // Scalar 2 with weights (3, 0) and identity component: modulus 1, so
  // every y lifts with exponent solved by the divisibility criterion.
  EndoSpec s;
  s.n = s.m = 2;
  s.a_images = {pe("aa", ""), pe("a", "")};
  s.b_images = {pe("aaa", "a"), pe("", "b")};
  ProductEndo e(s);
  REQUIRE(e.type() == EndoType::III);

  PerReport rep = periodic_subgroup(e);
  CHECK(rep.verdict == SubgroupVerdict::FinGen);
  CHECK(rep.period_bound == 1);
  CHECK(same_pairs(rep.generators, {pe("AAA", "a"), pe("", "b")}));
  check_per(e, rep);

  // With everything of period one, periodic equals fixed.
  CHECK(same_pairs(rep.generators, fixed_subgroup(e).generators));
}

TEST_CASE("type III periodic subgroup: scalar two over a letter swap") {
  // Component swap forces the second iterate: scalar 4, modulus 3,
  // accumulated weights (2, 1); the recurring y form the index-three
  // residue subgroup and each lifts through the one-orbit criterion.
  EndoSpec s;
  s.n = s.m = 2;
  s.a_images = {pe("aa", ""), pe("a", "")};
  s.b_images = {pe("a", "b"), pe("", "a")};
  ProductEndo e(s);
  REQUIRE(e.type() == EndoType::III);

  PerReport rep = periodic_subgroup(e);
  CHECK(rep.verdict == SubgroupVerdict::FinGen);
  CHECK(rep.generators.size() == 4);  // index-three subgroup of F_2
  CHECK(rep.period_bound == 2);
  check_per(e, rep);

  // Brute force against the residue-plus-criterion description.
  FreeHom swap{B2, B2, {W(B2, "b"), W(B2, "a")}};
  std::vector<long long> R{1, 0};
  std::vector<PairElement> expected;
  for (const auto& x : all_words(A2, 4)) {
    auto a = match_power(W(A2, "a"), x);
    if (!a) continue;
    for (const auto& y : all_words(B2, 2)) {
      auto ev = exponent_vector(y);
      if ((2 * ev[0] + ev[1]) % 3 != 0) continue;
      auto pi = bounded_period(swap, y, 2);
      REQUIRE(pi.has_value());
      std::vector<FreeWord> orbit;
      FreeWord cur = y;
      for (long long t = 0; t < *pi; ++t) {
        orbit.push_back(cur);
        cur = swap(cur);
      }
      auto lift = type3_per_criterion(Int(2), R, orbit);
      REQUIRE(lift.has_value());
      if (Int(*a) == *lift) expected.push_back({x, y});
    }
  }
  CHECK(same_pairs(brute_periodic(e, 4, 2, 2), expected));
}

TEST_CASE("type III periodic subgroup: oracle handling") {
  // Conjugation component: not derivable, so the first-cyclic type
  // demands an oracle.
  EndoSpec s;
  s.n = s.m = 2;
  s.a_images = {pe("aa", ""), pe("a", "")};
  s.b_images = {pe("a", "bab"), pe("", "b")};
  ProductEndo e(s);
  REQUIRE(e.type() == EndoType::III);
  CHECK_THROWS_AS(periodic_subgroup(e), OracleRequired);

  // b2 is fixed, hence periodic; the criterion lifts it with exponent 0.
  SubgroupBasisInput oracle;
  oracle.words_b = {{W(B2, "b")}};
  PerReport rep = periodic_subgroup(e, oracle);
  CHECK(rep.verdict == SubgroupVerdict::InfiniteCyclic);
  CHECK(same_pairs(rep.generators, {pe("", "b")}));
  check_per(e, rep);

  // b1 never returns under the conjugation.
  SubgroupBasisInput bad;
  bad.words_b = {{W(B2, "a")}};
  CHECK_THROWS_AS(periodic_subgroup(e, bad), PeriodBoundExceeded);

  // Wrong alphabet is rejected outright.
  SubgroupBasisInput wrong;
  wrong.words_b = {{W(A2, "a")}};
  CHECK_THROWS_AS(periodic_subgroup(e, wrong), Error);
}

TEST_CASE("divisibility criterion: examples and edge cases") {
  std::vector<long long> R{3, 0};
  // Scalar 2, single fixed word b1: exponent -3.
  auto a = type3_per_criterion(Int(2), R, {W(B2, "a")});
  REQUIRE(a.has_value());
  CHECK(*a == -3);

  // Scalar -3: denominator 4 rejects sum 3, accepts sum 8.
  CHECK(!type3_per_criterion(Int(-3), R, {W(B2, "a")}).has_value());
  std::vector<long long> R8{8, 0};
  auto b = type3_per_criterion(Int(-3), R8, {W(B2, "a")});
  REQUIRE(b.has_value());
  CHECK(*b == 2);

  // Scalar 0 keeps only the last orbit term (0^0 = 1).
  std::vector<long long> R31{3, 1};
  auto c = type3_per_criterion(Int(0), R31, {W(B2, "a"), W(B2, "b")});
  REQUIRE(c.has_value());
  CHECK(*c == 1);

  // Magnitude-one scalars and empty orbits are rejected.
  CHECK_THROWS_AS(type3_per_criterion(Int(1), R, {W(B2, "a")}), Error);
  CHECK_THROWS_AS(type3_per_criterion(Int(-1), R, {W(B2, "a")}), Error);
  CHECK_THROWS_AS(type3_per_criterion(Int(2), R, {}), Error);
}

TEST_CASE("divisibility criterion: independent of traversing the orbit repeatedly") {
  // Summing over s copies of the orbit multiplies numerator and
  // denominator by the same geometric factor, so both the divisibility
  // verdict and the quotient agree for every s.
  testutil::Rng rng(0x5eed5eedULL);
  for (int trial = 0; trial < 200; ++trial) {
    Int uP(rng.range(-5, 5));
    if (uP == 1 || uP == -1) uP = 5;
    std::vector<long long> R{rng.range(-5, 5), rng.range(-5, 5)};
    int pi = static_cast<int>(rng.range(1, 4));
    std::vector<FreeWord> orbit;
    for (int t = 0; t < pi; ++t) orbit.push_back(rng.word(B2, 3));
    int s = static_cast<int>(rng.range(2, 4));
    std::vector<FreeWord> repeated;
    for (int i = 0; i < s; ++i)
      repeated.insert(repeated.end(), orbit.begin(), orbit.end());
    CHECK(type3_per_criterion(uP, R, repeated) == type3_per_criterion(uP, R, orbit));
  }
}

TEST_CASE("bounded period search") {
  FreeHom swap{B2, B2, {W(B2, "b"), W(B2, "a")}};
  CHECK(bounded_period(swap, W(B2, "a"), 8) == 2);
  CHECK(bounded_period(swap, W(B2, "ab"), 8) == 2);
  CHECK(bounded_period(swap, W(B2, "aB"), 8) == 2);
  CHECK(bounded_period(swap, W(B2, ""), 8) == 1);
  CHECK(bounded_period(FreeHom::identity(B2), W(B2, "abAB"), 8) == 1);

  // Conjugation pushes b1 away forever.
  FreeHom conj{B2, B2, {W(B2, "baB"), W(B2, "b")}};
  CHECK(!bounded_period(conj, W(B2, "a"), 8).has_value());
  CHECK(bounded_period(conj, W(B2, "b"), 8) == 1);

  // Exponential growth trips the length cap instead of spinning.
  FreeHom dbl{A2, A2, {W(A2, "aa"), W(A2, "b")}};
  CHECK_THROWS_AS(bounded_period(dbl, W(A2, "a"), 64), ResourceLimit);
}

TEST_CASE("type IV periodic subgroup: identity and swap components") {
  // Identity component: periodic equals fixed, the graph of the cross map.
  EndoSpec s;
  s.n = s.m = 2;
  s.a_images = {pe("", ""), pe("", "")};
  s.b_images = {pe("a", "a"), pe("b", "b")};
  ProductEndo e(s);
  REQUIRE(e.type() == EndoType::IV);
  PerReport rep = periodic_subgroup(e);
  CHECK(rep.verdict == SubgroupVerdict::FinGen);
  CHECK(rep.period_bound == 1);
  CHECK(same_pairs(rep.generators, {pe("a", "a"), pe("b", "b")}));
  check_per(e, rep);

  // Swap component: nothing is fixed, yet the graph of the return map is
  // a rank-two periodic subgroup.
  EndoSpec t;
  t.n = t.m = 2;
  t.a_images = {pe("", ""), pe("", "")};
  t.b_images = {pe("a", "b"), pe("b", "a")};
  ProductEndo f(t);
  REQUIRE(f.type() == EndoType::IV);
  PerReport repf = periodic_subgroup(f);
  CHECK(repf.verdict == SubgroupVerdict::FinGen);
  CHECK(repf.period_bound == 2);
  CHECK(same_pairs(repf.generators, {pe("b", "a"), pe("a", "b")}));
  check_per(f, repf);
  CHECK(fixed_subgroup(f).verdict == SubgroupVerdict::Trivial);

  // Brute force: each periodic y carries exactly one first coordinate,
  // the cross image of the last orbit word before y returns.
  FreeHom psi{B2, B2, {W(B2, "b"), W(B2, "a")}};
  FreeHom phi{B2, A2, {W(A2, "a"), W(A2, "b")}};
  std::vector<PairElement> expected;
  for (const auto& y : all_words(B2, 2)) {
    auto pi = bounded_period(psi, y, 2);
    REQUIRE(pi.has_value());
    FreeWord cur = y;
    for (long long k = 0; k + 1 < *pi; ++k) cur = psi(cur);
    expected.push_back({phi(cur), y});
  }
  CHECK(same_pairs(brute_periodic(f, 2, 2, 2), expected));
}

TEST_CASE("type IV periodic subgroup: oracle handling") {
  // Conjugation component: not derivable, so the verdict degrades until
  // a basis arrives.
  EndoSpec s;
  s.n = s.m = 2;
  s.a_images = {pe("", ""), pe("", "")};
  s.b_images = {pe("a", "bab"), pe("b", "b")};
  ProductEndo e(s);
  REQUIRE(e.type() == EndoType::IV);
  PerReport rep = periodic_subgroup(e);
  CHECK(rep.verdict == SubgroupVerdict::ConditionalOnOracle);
  CHECK(rep.generators.empty());
  CHECK(!rep.period_bound.has_value());

  SubgroupBasisInput oracle;
  oracle.words_b = {{W(B2, "b")}};
  PerReport repo = periodic_subgroup(e, oracle);
  CHECK(repo.verdict == SubgroupVerdict::InfiniteCyclic);
  CHECK(same_pairs(repo.generators, {pe("b", "b")}));
  check_per(e, repo);

  SubgroupBasisInput bad;
  bad.words_b = {{W(B2, "a")}};
  CHECK_THROWS_AS(periodic_subgroup(e, bad), PeriodBoundExceeded);
}

TEST_CASE("type V periodic subgroup") {
  // Multiplier -1: an infinite cyclic axis of period-two points.
  EndoSpec s;
  s.n = s.m = 2;
  s.a_images = {pe("", "a"), pe("", "aa")};
  s.b_images = {pe("", "A"), pe("", "aaa")};
  ProductEndo e(s);
  REQUIRE(e.type() == EndoType::V);
  PerReport rep = periodic_subgroup(e);
  CHECK(rep.verdict == SubgroupVerdict::InfiniteCyclic);
  CHECK(rep.period_bound == 2);
  CHECK(same_pairs(rep.generators, {pe("", "a")}));
  check_per(e, rep);
  CHECK(fixed_subgroup(e).verdict == SubgroupVerdict::Trivial);
  CHECK(same_pairs(brute_periodic(e, 1, 2, 2),
                   {pe("", ""), pe("", "a"), pe("", "A"), pe("", "aa"), pe("", "AA")}));

  // Multiplier 2: trivial.
  EndoSpec t = s;
  t.b_images[0] = pe("", "aa");
  ProductEndo f(t);
  REQUIRE(f.type() == EndoType::V);
  CHECK(periodic_subgroup(f).verdict == SubgroupVerdict::Trivial);

  // Multiplier 1: periodic equals fixed.
  EndoSpec r = s;
  r.b_images[0] = pe("", "a");
  ProductEndo h(r);
  PerReport reph = periodic_subgroup(h);
  CHECK(reph.verdict == SubgroupVerdict::InfiniteCyclic);
  CHECK(reph.period_bound == 1);
  CHECK(same_pairs(reph.generators, fixed_subgroup(h).generators));
}

TEST_CASE("type VI periodic subgroup: identity times swap") {
  EndoSpec s;
  s.n = s.m = 2;
  s.a_images = {pe("a", ""), pe("b", "")};
  s.b_images = {pe("", "b"), pe("", "a")};
  ProductEndo e(s);
  REQUIRE(e.type() == EndoType::VI);
  PerReport rep = periodic_subgroup(e);
  CHECK(rep.verdict == SubgroupVerdict::FinGen);
  CHECK(rep.generators.size() == 4);
  CHECK(rep.period_bound == 2);
  check_per(e, rep);
  CHECK(rep.per_period_data.at(1).size() == 2);
  CHECK(rep.per_period_data.at(2).size() == 2);

  // Both components have finite order, so the whole group is periodic.
  auto box = brute_periodic(e, 2, 2, 2);
  CHECK(box.size() == 17 * 17);

  // The fixed subgroup only keeps the first factor.
  FixReport fix = fixed_subgroup(e);
  CHECK(fix.generators.size() == 2);
}

TEST_CASE("type VI periodic subgroup: oracle handling") {
  // First component conjugates (not derivable), second swaps.
  EndoSpec s;
  s.n = s.m = 2;
  s.a_images = {pe("baB", ""), pe("b", "")};
  s.b_images = {pe("", "b"), pe("", "a")};
  ProductEndo e(s);
  REQUIRE(e.type() == EndoType::VI);
  PerReport rep = periodic_subgroup(e);
  CHECK(rep.verdict == SubgroupVerdict::ConditionalOnOracle);
  CHECK(rep.structure_note.find("first factor") != std::string::npos);
  CHECK(!rep.period_bound.has_value());

  SubgroupBasisInput oracle;
  oracle.words_a = {{W(A2, "b")}};
  PerReport repo = periodic_subgroup(e, oracle);
  CHECK(repo.verdict == SubgroupVerdict::FinGen);
  CHECK(repo.generators.size() == 3);
  CHECK(repo.period_bound == 2);
  check_per(e, repo);
}

TEST_CASE("type VII periodic subgroup: factor swap endomorphism") {
  // Both composites are the identity: the whole group is periodic with
  // period at most two, and the odd-period points are the fixed diagonal.
  EndoSpec s;
  s.n = s.m = 2;
  s.a_images = {pe("", "a"), pe("", "b")};
  s.b_images = {pe("a", ""), pe("b", "")};
  ProductEndo e(s);
  REQUIRE(e.type() == EndoType::VII);
  PerReport rep = periodic_subgroup(e);
  CHECK(rep.verdict == SubgroupVerdict::FinGen);
  CHECK(rep.generators.size() == 4);
  CHECK(rep.period_bound == 2);
  check_per(e, rep);

  // Odd-period data reproduces the fixed diagonal.
  REQUIRE(rep.per_period_data.count(1));
  CHECK(same_pairs(rep.per_period_data.at(1), fixed_subgroup(e).generators));
  CHECK(rep.per_period_data.at(2).size() == 4);

  // Everything in a box is periodic.
  CHECK(brute_periodic(e, 2, 2, 2).size() == 17 * 17);
}

TEST_CASE("type VII periodic subgroup: swap with a crossing twist") {
  // tau sends a1, a2 to b2, b1's images so both composites are letter
  // swaps: all composite periods are even, so no odd-period points
  // exist and the generators cycle with period four.
  EndoSpec s;
  s.n = s.m = 2;
  s.a_images = {pe("", "b"), pe("", "a")};
  s.b_images = {pe("a", ""), pe("b", "")};
  ProductEndo e(s);
  REQUIRE(e.type() == EndoType::VII);
  PerReport rep = periodic_subgroup(e);
  CHECK(rep.verdict == SubgroupVerdict::FinGen);
  CHECK(rep.generators.size() == 4);
  CHECK(rep.period_bound == 4);
  check_per(e, rep);
  for (const auto& [k, pts] : rep.per_period_data) CHECK(k % 2 == 0);
  CHECK(e.iterate(pe("a", ""), 4) == pe("a", ""));
  CHECK(brute_periodic(e, 1, 1, 4).size() == 5 * 5);
  CHECK(fixed_subgroup(e).verdict == SubgroupVerdict::Trivial);
}

TEST_CASE("type VII periodic subgroup: odd composite period in rank three") {
  const Alphabet A3{3, 'a'};
  const Alphabet B3{3, 'b'};
  // tau: a1, a2, a3 -> b2, b3, b1 across; phi: b_j -> a_j back.  Both
  // composites are 3-cycles, so the generators have period six and each
  // a-letter pairs with its half-orbit cross image at period three.
  EndoSpec s;
  s.n = s.m = 3;
  s.a_images = {{FreeWord(A3), W(B3, "b")},
                {FreeWord(A3), W(B3, "c")},
                {FreeWord(A3), W(B3, "a")}};
  s.b_images = {{W(A3, "a"), FreeWord(B3)},
                {W(A3, "b"), FreeWord(B3)},
                {W(A3, "c"), FreeWord(B3)}};
  ProductEndo e(s);
  REQUIRE(e.type() == EndoType::VII);
  PerReport rep = periodic_subgroup(e);
  CHECK(rep.verdict == SubgroupVerdict::FinGen);
  CHECK(rep.generators.size() == 6);
  CHECK(rep.period_bound == 6);
  check_per(e, rep);
  REQUIRE(rep.per_period_data.count(3));
  REQUIRE(rep.per_period_data.count(6));
  CHECK(rep.per_period_data.at(3).size() == 3);
  CHECK(rep.per_period_data.at(6).size() == 6);

  // The listed odd-period points really cycle in three steps.
  std::vector<PairElement> odd{{W(A3, "a"), W(B3, "c")},
                               {W(A3, "b"), W(B3, "a")},
                               {W(A3, "c"), W(B3, "b")}};
  CHECK(same_pairs(rep.per_period_data.at(3), odd));
}

TEST_CASE("type VII periodic subgroup: oracle handling") {
  // Composites a1 -> a1 a2 and b1 -> b1 b2 are injective but not
  // surjective and not derivable, so the verdict degrades; the fixed
  // words of either composite are its periodic words here.
  EndoSpec s;
  s.n = s.m = 2;
  s.a_images = {pe("", "ab"), pe("", "b")};
  s.b_images = {pe("a", ""), pe("b", "")};
  ProductEndo e(s);
  REQUIRE(e.type() == EndoType::VII);
  PerReport rep = periodic_subgroup(e);
  CHECK(rep.verdict == SubgroupVerdict::ConditionalOnOracle);
  CHECK(rep.structure_note.find("composite") != std::string::npos);

  SubgroupBasisInput oracle;
  oracle.words_a = {{W(A2, "b"), W(A2, "abA")}};
  oracle.words_b = {{W(B2, "b"), W(B2, "abA")}};
  PerReport repo = periodic_subgroup(e, oracle);
  CHECK(repo.verdict == SubgroupVerdict::FinGen);
  CHECK(repo.generators.size() == 4);
  CHECK(repo.period_bound == 2);
  check_per(e, repo);
  // All supplied words are fixed by their composites, so the odd-period
  // points coincide with the fixed-subgroup generators.
  REQUIRE(repo.per_period_data.count(1));
  CHECK(same_pairs(repo.per_period_data.at(1), fixed_subgroup(e, oracle).generators));

  SubgroupBasisInput half;
  half.words_a = oracle.words_a;
  PerReport reph = periodic_subgroup(e, half);
  CHECK(reph.verdict == SubgroupVerdict::ConditionalOnOracle);
  CHECK(reph.structure_note.find("second-factor composite") != std::string::npos);
}

TEST_CASE("mirrored endomorphisms translate periodic reports") {
  // Flip the companion-matrix type II fixture across the factor swap.
  EndoSpec s;
  s.n = s.m = 2;
  s.a_images = {pe("", "a"), pe("", "")};
  s.b_images = {pe("a", ""), pe("", "aa")};
  EndoSpec t = flip_spec(s);
  ProductEndo e(s), f(t);
  REQUIRE(f.type() == EndoType::II);
  REQUIRE(f.swapped());

  PerReport rep = periodic_subgroup(e);
  PerReport repf = periodic_subgroup(f);
  CHECK(repf.verdict == rep.verdict);
  CHECK(repf.period_bound == rep.period_bound);
  std::vector<PairElement> flipped;
  for (const auto& g : rep.generators) flipped.push_back({g.y, g.x});
  CHECK(same_pairs(repf.generators, flipped));
  for (const auto& [k, pts] : rep.per_period_data) {
    REQUIRE(repf.per_period_data.count(k));
    std::vector<PairElement> fl;
    for (const auto& p : pts) fl.push_back({p.y, p.x});
    CHECK(same_pairs(repf.per_period_data.at(k), fl));
  }
  check_per(f, repf);

  // A mirrored first-cyclic fixture keeps its verdict and witness.
  EndoSpec u;
  u.n = u.m = 2;
  u.a_images = {pe("a", ""), pe("", "")};
  u.b_images = {pe("a", "a"), pe("A", "b")};
  ProductEndo g(flip_spec(u));
  REQUIRE(g.swapped());
  PerReport repg = periodic_subgroup(g);
  CHECK(repg.verdict == SubgroupVerdict::NotFinGen);
  CHECK(repg.witness.has_value());
}
