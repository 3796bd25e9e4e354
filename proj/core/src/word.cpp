#include "fnfm/word.hpp"

#include <algorithm>
#include <numeric>

namespace fnfm {

namespace {

void check_letter(const Alphabet& a, int letter) {
  int k = letter < 0 ? -letter : letter;
  if (k == 0 || k > a.rank)
    throw Error("letter " + std::to_string(letter) + " out of range for rank " +
                std::to_string(a.rank));
}

std::vector<int> reduce_raw(const Alphabet& a, const std::vector<int>& raw) {
  std::vector<int> out;
  out.reserve(raw.size());
  for (int l : raw) {
    check_letter(a, l);
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

}  // namespace

FreeWord::FreeWord(Alphabet a, std::vector<int> raw)
    : alpha_(a), letters_(reduce_raw(a, raw)) {}

FreeWord reduce(Alphabet a, const std::vector<int>& raw) { return FreeWord(a, raw); }

FreeWord FreeWord::inverse() const {
  std::vector<int> inv(letters_.rbegin(), letters_.rend());
  for (int& l : inv) l = -l;
  FreeWord w(alpha_);
  w.letters_ = std::move(inv);  // inverse of reduced is reduced
  return w;
}

FreeWord FreeWord::operator*(const FreeWord& rhs) const {
  if (alpha_ != rhs.alpha_) throw Error("word product across different alphabets");
  std::vector<int> cat = letters_;
  cat.insert(cat.end(), rhs.letters_.begin(), rhs.letters_.end());
  return FreeWord(alpha_, std::move(cat));
}

FreeWord FreeWord::pow(long long k) const { return pow(Int(k)); }

FreeWord FreeWord::pow(const Int& k) const {
  static const Int kMaxLetters = 1 << 24;
  Int reps = abs(k);
  if (reps * static_cast<long long>(letters_.size()) > kMaxLetters)
    throw ResourceLimit("word power too long to materialize");
  FreeWord base = k < 0 ? inverse() : *this;
  // A reduced word is either cyclically reduced or of the form p.c.p^-1;
  // splitting first keeps the repeated concatenation linear.
  size_t strip = 0;
  const auto& ls = base.letters_;
  while (ls.size() >= 2 * (strip + 1) && ls[strip] == -ls[ls.size() - 1 - strip]) ++strip;
  std::vector<int> out(ls.begin(), ls.begin() + strip);
  long long n = static_cast<long long>(reps);
  for (long long i = 0; i < n; ++i)
    out.insert(out.end(), ls.begin() + strip, ls.end() - strip);
  out.insert(out.end(), ls.end() - strip, ls.end());
  FreeWord w(alpha_);
  w.letters_ = reduce_raw(alpha_, out);
  return w;
}

FreeWord FreeWord::retag(Alphabet target) const {
  if (target.rank != alpha_.rank) throw Error("retag requires equal ranks");
  FreeWord w(target);
  w.letters_ = letters_;
  return w;
}

std::string FreeWord::str() const {
  if (letters_.empty()) return "1";
  std::string out;
  for (size_t i = 0; i < letters_.size(); ++i) {
    if (i) out += ' ';
    int l = letters_[i];
    out += alpha_.tag;
    out += std::to_string(l < 0 ? -l : l);
    if (l < 0) out += "^-1";
  }
  return out;
}

std::pair<FreeWord, long long> primitive_root(const FreeWord& w) {
  if (w.empty()) throw Error("the empty word has no primitive root");
  const auto& ls = w.letters();
  size_t strip = 0;
  while (ls.size() >= 2 * (strip + 1) && ls[strip] == -ls[ls.size() - 1 - strip]) ++strip;
  size_t core_len = ls.size() - 2 * strip;
  // Smallest period of the cyclically reduced core that divides its length.
  for (size_t d = 1; d <= core_len; ++d) {
    if (core_len % d) continue;
    bool periodic = true;
    for (size_t i = d; i < core_len && periodic; ++i)
      periodic = ls[strip + i] == ls[strip + (i % d)];
    if (!periodic) continue;
    std::vector<int> root_letters(ls.begin(), ls.begin() + strip);
    root_letters.insert(root_letters.end(), ls.begin() + strip, ls.begin() + strip + d);
    for (size_t i = 0; i < strip; ++i) root_letters.push_back(-ls[strip - 1 - i]);
    FreeWord root(w.alphabet(), std::move(root_letters));
    return {root, static_cast<long long>(core_len / d)};
  }
  return {w, 1};  // unreachable: d == core_len always matches
}

bool PowerExponents::contains(long long k) const {
  if (all_integers) return true;
  return std::binary_search(values.begin(), values.end(), k);
}

PowerExponents power_exponents(const FreeWord& w) {
  PowerExponents out;
  if (w.empty()) {
    out.all_integers = true;
    return out;
  }
  long long e = primitive_root(w).second;
  for (long long d = 1; d <= e; ++d)
    if (e % d == 0) {
      out.values.push_back(-d);
      out.values.push_back(d);
    }
  std::sort(out.values.begin(), out.values.end());
  return out;
}

bool commutes(const FreeWord& x, const FreeWord& z) {
  if (x.alphabet() != z.alphabet()) throw Error("commutation across different alphabets");
  return x * z == z * x;
}

std::vector<long long> exponent_vector(const FreeWord& w) {
  std::vector<long long> e(w.alphabet().rank, 0);
  for (int l : w.letters()) {
    if (l > 0)
      ++e[l - 1];
    else
      --e[-l - 1];
  }
  return e;
}

Int weighted_sum(const FreeWord& w, std::span<const long long> weights) {
  if (static_cast<int>(weights.size()) != w.alphabet().rank)
    throw Error("weight vector size does not match rank");
  auto e = exponent_vector(w);
  Int s = 0;
  for (size_t i = 0; i < e.size(); ++i) s += Int(e[i]) * weights[i];
  return s;
}

Int weighted_sum(const FreeWord& w, std::span<const Int> weights) {
  if (static_cast<int>(weights.size()) != w.alphabet().rank)
    throw Error("weight vector size does not match rank");
  auto e = exponent_vector(w);
  Int s = 0;
  for (size_t i = 0; i < e.size(); ++i) s += e[i] * weights[i];
  return s;
}

std::optional<long long> match_power(const FreeWord& base, const FreeWord& w) {
  if (w.empty()) return 0;
  if (base.empty()) return std::nullopt;
  // base = r^s and w = r^(s k), so compare primitive roots; the root of a
  // negative power is the inverse root.
  auto [rb, s] = primitive_root(base);
  auto [rw, t] = primitive_root(w);
  long long sign = 0;
  if (rw == rb)
    sign = 1;
  else if (rw == rb.inverse())
    sign = -1;
  else
    return std::nullopt;
  if (t % s) return std::nullopt;
  return sign * (t / s);
}

FreeHom FreeHom::identity(Alphabet a) { return relabel(a, a); }

FreeHom FreeHom::relabel(Alphabet from, Alphabet to) {
  if (from.rank != to.rank) throw Error("relabel requires equal ranks");
  FreeHom h{from, to, {}};
  for (int i = 1; i <= from.rank; ++i) h.images.push_back(FreeWord(to, {i}));
  return h;
}

FreeWord FreeHom::operator()(const FreeWord& w) const {
  if (w.alphabet() != domain) throw Error("homomorphism applied outside its domain");
  std::vector<int> out;
  for (int l : w.letters()) {
    const FreeWord& img = images[(l < 0 ? -l : l) - 1];
    if (l > 0)
      out.insert(out.end(), img.letters().begin(), img.letters().end());
    else {
      auto inv = img.inverse();
      out.insert(out.end(), inv.letters().begin(), inv.letters().end());
    }
  }
  return FreeWord(codomain, std::move(out));
}

FreeHom FreeHom::then(const FreeHom& next) const {
  if (codomain != next.domain) throw Error("homomorphism composition mismatch");
  FreeHom h{domain, next.codomain, {}};
  for (const auto& img : images) h.images.push_back(next(img));
  return h;
}

bool FreeHom::is_identity() const {
  if (domain != codomain) return false;
  for (int i = 1; i <= domain.rank; ++i)
    if (images[i - 1].letters() != std::vector<int>{i}) return false;
  return true;
}

bool FreeHom::is_trivial() const {
  return std::all_of(images.begin(), images.end(),
                     [](const FreeWord& w) { return w.empty(); });
}

bool FreeHom::is_letter_permutation() const {
  if (domain.rank != codomain.rank) return false;
  std::vector<bool> hit(domain.rank, false);
  for (const auto& img : images) {
    if (img.length() != 1) return false;
    int k = img.letters()[0];
    int idx = (k < 0 ? -k : k) - 1;
    if (hit[idx]) return false;
    hit[idx] = true;
  }
  return true;
}

}  // namespace fnfm
