#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "fnfm/word.hpp"

namespace testutil {

using fnfm::Alphabet;
using fnfm::FreeWord;

// Compact word literals for tests: 'a'..'z' are generators 1, 2, ...,
// 'A'..'Z' their inverses.  Anything else is ignored.
inline FreeWord W(Alphabet alpha, std::string_view s) {
  std::vector<int> raw;
  for (char c : s) {
    if (c >= 'a' && c <= 'z')
      raw.push_back(c - 'a' + 1);
    else if (c >= 'A' && c <= 'Z')
      raw.push_back(-(c - 'A' + 1));
  }
  return FreeWord(alpha, std::move(raw));
}

// Every reduced word of length <= maxlen, in shortlex-ish generation order
// starting with the empty word.
inline std::vector<FreeWord> all_words(Alphabet a, int maxlen) {
  std::vector<FreeWord> out{FreeWord(a)};
  size_t level_begin = 0;
  for (int len = 1; len <= maxlen; ++len) {
    size_t level_end = out.size();
    for (size_t i = level_begin; i < level_end; ++i)
      for (int l = 1; l <= a.rank; ++l)
        for (int s : {l, -l}) {
          const auto& ls = out[i].letters();
          if (!ls.empty() && ls.back() == -s) continue;
          std::vector<int> raw = ls;
          raw.push_back(s);
          out.push_back(FreeWord(a, std::move(raw)));
        }
    level_begin = level_end;
  }
  return out;
}

// Deterministic xorshift for reproducible randomized cases.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  uint64_t next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
  // Uniform-ish in [lo, hi].
  long long range(long long lo, long long hi) {
    return lo + static_cast<long long>(next() % static_cast<uint64_t>(hi - lo + 1));
  }
  FreeWord word(Alphabet a, int maxlen) {
    std::vector<int> raw;
    int len = static_cast<int>(range(0, maxlen));
    for (int i = 0; i < len; ++i) {
      int l = static_cast<int>(range(1, a.rank));
      raw.push_back(range(0, 1) ? l : -l);
    }
    return FreeWord(a, std::move(raw));
  }
};

}  // namespace testutil
