// Microbenchmarks for the hot paths: word arithmetic, classification,
// subgroup folding, orbit canonicalization and the integer lattice
// routines.  Inputs are fixed and deterministic so runs are comparable.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "fnfm/endo.hpp"
#include "fnfm/fixed.hpp"
#include "fnfm/intlinalg.hpp"
#include "fnfm/stallings.hpp"
#include "fnfm/whitehead.hpp"
#include "fnfm/word.hpp"

namespace {

using namespace fnfm;

const Alphabet A{2, 'a'};
const Alphabet B{2, 'b'};

FreeWord make_word(Alphabet alpha, std::string_view s) {
  std::vector<int> raw;
  for (char c : s) {
    if (c >= 'a' && c <= 'z') raw.push_back(c - 'a' + 1);
    if (c >= 'A' && c <= 'Z') raw.push_back(-(c - 'A' + 1));
  }
  return FreeWord(alpha, std::move(raw));
}

// A pseudo-random reduced word of the requested length.
FreeWord scramble(Alphabet alpha, long long len, uint64_t seed) {
  std::vector<int> raw;
  uint64_t st = seed | 1;
  while (static_cast<long long>(raw.size()) < len) {
    st ^= st << 13;
    st ^= st >> 7;
    st ^= st << 17;
    int l = static_cast<int>(st % (2 * alpha.rank)) - alpha.rank;
    if (l >= 0) ++l;
    if (!raw.empty() && raw.back() == -l) continue;
    raw.push_back(l);
  }
  return FreeWord(alpha, std::move(raw));
}

void bm_word_product(benchmark::State& state) {
  FreeWord u = scramble(A, state.range(0), 11);
  FreeWord v = u.inverse() * scramble(A, state.range(0), 17);
  for (auto _ : state) benchmark::DoNotOptimize(u * v);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_word_product)->Range(64, 4096)->Complexity();

void bm_primitive_root(benchmark::State& state) {
  FreeWord base = scramble(A, 12, 23);
  FreeWord w = base.pow(state.range(0) / 12 + 1);
  for (auto _ : state) benchmark::DoNotOptimize(primitive_root(w));
}
BENCHMARK(bm_primitive_root)->Range(64, 4096);

void bm_classify(benchmark::State& state) {
  FreeWord u = scramble(A, 8, 31);
  FreeWord v = scramble(B, 8, 37);
  EndoSpec spec{2,
                2,
                {{u.pow(2), v.pow(1)}, {u.pow(-1), v.pow(3)}},
                {{u.pow(1), v.pow(-2)}, {u.pow(4), v.pow(1)}}};
  for (auto _ : state) benchmark::DoNotOptimize(ProductEndo{spec});
}
BENCHMARK(bm_classify);

void bm_flags(benchmark::State& state) {
  EndoSpec spec{2,
                2,
                {{make_word(A, "ab"), FreeWord(B)}, {make_word(A, "aab"), FreeWord(B)}},
                {{FreeWord(A), make_word(B, "b")}, {FreeWord(A), make_word(B, "ba")}}};
  ProductEndo e{spec};
  for (auto _ : state) benchmark::DoNotOptimize(e.flags());
}
BENCHMARK(bm_flags);

void bm_subgroup_fold(benchmark::State& state) {
  std::vector<FreeWord> gens;
  for (uint64_t k = 0; k < 8; ++k) gens.push_back(scramble(A, state.range(0), 41 + k));
  for (auto _ : state) benchmark::DoNotOptimize(SubgroupGraph::fold(A, gens));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_subgroup_fold)->Range(16, 1024)->Complexity();

void bm_whitehead_minimize(benchmark::State& state) {
  FreeWord w = scramble(A, state.range(0), 53);
  for (auto _ : state) benchmark::DoNotOptimize(minimize_whitehead(w));
}
BENCHMARK(bm_whitehead_minimize)->Range(8, 64);

void bm_whitehead_canonical(benchmark::State& state) {
  FreeWord w = scramble(A, 6, 59);
  for (auto _ : state) benchmark::DoNotOptimize(whitehead_canonical(w));
}
BENCHMARK(bm_whitehead_canonical);

void bm_residue_graph(benchmark::State& state) {
  const std::vector<long long> weights{1, -1};
  const std::vector<FreeWord> fixbasis{make_word(B, "a"), make_word(B, "b")};
  for (auto _ : state)
    benchmark::DoNotOptimize(type3_H_graph(weights, state.range(0), B, fixbasis));
}
BENCHMARK(bm_residue_graph)->Arg(5)->Arg(97)->Arg(1009);

void bm_periodic_lattice(benchmark::State& state) {
  std::vector<IntMatrix> ms;
  for (long long t = 0; t < 64; ++t)
    ms.push_back(IntMatrix(2, 2,
                           {Int(t % 7 - 3), Int((t / 7) % 7 - 3),
                            Int((t / 2) % 7 - 3), Int((t / 3) % 7 - 3)}));
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(periodic_lattice(ms[i]));
    i = (i + 1) % ms.size();
  }
}
BENCHMARK(bm_periodic_lattice);

void bm_fixed_subgroup(benchmark::State& state) {
  EndoSpec spec{2,
                2,
                {{make_word(A, "aa"), FreeWord(B)}, {make_word(A, "a"), FreeWord(B)}},
                {{make_word(A, "a"), make_word(B, "a")},
                 {make_word(A, "A"), make_word(B, "b")}}};
  ProductEndo e{spec};
  for (auto _ : state) benchmark::DoNotOptimize(fixed_subgroup(e));
}
BENCHMARK(bm_fixed_subgroup);

}  // namespace

BENCHMARK_MAIN();
