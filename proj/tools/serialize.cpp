#include "cli.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fnfm::cli {
namespace {

bool space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && space(s[b])) ++b;
  while (e > b && space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::string col_msg(long long col, const std::string& what) {
  return "column " + std::to_string(col) + ": " + what;
}

// Token scanner behind every word parser.  `origin` is the 1-based
// column of text[0] in the caller's coordinates, so pair and document
// parsers report positions in the full input line.
FreeWord parse_word_at(const std::string& text, Alphabet alpha, long long origin) {
  std::vector<int> letters;
  size_t i = 0;
  while (i < text.size()) {
    if (space(text[i])) {
      ++i;
      continue;
    }
    size_t start = i;
    while (i < text.size() && !space(text[i])) ++i;
    const std::string tok = text.substr(start, i - start);
    const long long col = origin + static_cast<long long>(start);
    if (tok == "1") continue;  // identity token
    const char tag = tok[0];
    if (tag < 'a' || tag > 'z')
      throw SyntaxError(col_msg(col, "expected a generator token, got '" + tok + "'"), col);
    size_t p = 1;
    while (p < tok.size() && std::isdigit(static_cast<unsigned char>(tok[p]))) ++p;
    if (p == 1)
      throw SyntaxError(col_msg(col, "generator '" + tok + "' is missing its index"), col);
    const std::string suffix = tok.substr(p);
    int sign = 1;
    if (suffix == "^-1") {
      sign = -1;
    } else if (!suffix.empty()) {
      throw SyntaxError(col_msg(col, "unsupported suffix '" + suffix + "' (only ^-1)"), col);
    }
    if (tag != alpha.tag)
      throw WrongAlphabet(
          col_msg(col, std::string("token '") + tok + "' uses tag '" + tag +
                           "' where only '" + alpha.tag + "' generators are accepted"),
          col);
    const std::string digits = tok.substr(1, p - 1);
    long long index = 0;
    if (digits.size() > 9) {
      index = alpha.rank + 1LL;  // certainly out of range, avoid overflow
    } else {
      index = std::stoll(digits);
    }
    if (index < 1 || index > alpha.rank)
      throw UnknownGenerator(
          col_msg(col, "no generator '" + tok.substr(0, p) + "' in rank " +
                           std::to_string(alpha.rank)),
          col);
    letters.push_back(sign * static_cast<int>(index));
  }
  return FreeWord(alpha, letters);
}

// Rethrows a word-parse error with "line N, " prefixed, preserving the
// concrete error type.
template <class E>
[[noreturn]] void rethrow_line(long long line, const E& e) {
  throw E("line " + std::to_string(line) + ", " + e.what(), e.column);
}

FreeWord parse_word_line(const std::string& text, Alphabet alpha, long long origin,
                         long long line) {
  try {
    return parse_word_at(text, alpha, origin);
  } catch (const WrongAlphabet& e) {
    rethrow_line(line, e);
  } catch (const UnknownGenerator& e) {
    rethrow_line(line, e);
  } catch (const SyntaxError& e) {
    rethrow_line(line, e);
  }
}

[[noreturn]] void line_error(long long line, const std::string& what) {
  throw SyntaxError("line " + std::to_string(line) + ": " + what, 1);
}

struct RawLine {
  long long number = 0;
  std::string text;  // comment-stripped, not yet trimmed
};

std::vector<RawLine> clean_lines(const std::string& text) {
  std::vector<RawLine> out;
  std::istringstream in(text);
  std::string line;
  long long number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    out.push_back({number, line});
  }
  return out;
}

// Parses a generator name "a3" / "b1" (no exponent suffix).
std::pair<char, int> parse_gen_name(const std::string& name, long long line) {
  if (name.size() < 2 || (name[0] != 'a' && name[0] != 'b'))
    line_error(line, "expected a generator name before '->', got '" + name + "'");
  for (size_t i = 1; i < name.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(name[i])))
      line_error(line, "expected a generator name before '->', got '" + name + "'");
  if (name.size() > 10) line_error(line, "generator index out of range in '" + name + "'");
  return {name[0], static_cast<int>(std::stoll(name.substr(1)))};
}

EndoDocument parse_line_doc(const std::string& text) {
  struct ImageLine {
    long long number;
    char tag;
    int index;
    std::string x_text, y_text;
    long long x_origin, y_origin;
  };
  std::optional<long long> n, m;
  std::vector<ImageLine> images;

  for (const RawLine& raw : clean_lines(text)) {
    const size_t arrow = raw.text.find("->");
    if (arrow != std::string::npos) {
      const std::string name = trim(raw.text.substr(0, arrow));
      auto [tag, index] = parse_gen_name(name, raw.number);
      const std::string rest = raw.text.substr(arrow + 2);
      const size_t bar = rest.find('|');
      if (bar == std::string::npos)
        line_error(raw.number, "expected '<x-word> | <y-word>' after '->'");
      if (rest.find('|', bar + 1) != std::string::npos)
        line_error(raw.number, "more than one '|' in the image pair");
      ImageLine img;
      img.number = raw.number;
      img.tag = tag;
      img.index = index;
      img.x_text = rest.substr(0, bar);
      img.x_origin = static_cast<long long>(arrow) + 3;
      img.y_text = rest.substr(bar + 1);
      img.y_origin = static_cast<long long>(arrow + 2 + bar) + 2;
      images.push_back(std::move(img));
      continue;
    }
    const size_t eq = raw.text.find('=');
    if (eq == std::string::npos)
      line_error(raw.number, "expected 'n = ...', 'm = ...' or an image line");
    const std::string key = trim(raw.text.substr(0, eq));
    const std::string value = trim(raw.text.substr(eq + 1));
    std::optional<long long>* slot = nullptr;
    if (key == "n") slot = &n;
    else if (key == "m") slot = &m;
    else line_error(raw.number, "unrecognized key '" + key + "'");
    if (*slot) line_error(raw.number, "duplicate " + key);
    try {
      size_t used = 0;
      long long rank = std::stoll(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      *slot = rank;
    } catch (const std::exception&) {
      line_error(raw.number, key + " must be an integer, got '" + value + "'");
    }
    if (**slot < 1 || **slot > 1000000)
      line_error(raw.number, key + " out of range: " + std::to_string(**slot));
  }

  if (!n) throw SyntaxError("missing 'n = <rank>' line", 1);
  if (!m) throw SyntaxError("missing 'm = <rank>' line", 1);
  const Alphabet A{static_cast<int>(*n), 'a'};
  const Alphabet B{static_cast<int>(*m), 'b'};

  EndoDocument doc;
  doc.spec.n = A.rank;
  doc.spec.m = B.rank;
  doc.spec.a_images.resize(A.rank);
  doc.spec.b_images.resize(B.rank);
  std::vector<bool> seen_a(A.rank, false), seen_b(B.rank, false);

  for (const ImageLine& img : images) {
    const int rank = img.tag == 'a' ? A.rank : B.rank;
    if (img.index < 1 || img.index > rank)
      line_error(img.number, std::string("no generator '") + img.tag +
                                 std::to_string(img.index) + "' in rank " +
                                 std::to_string(rank));
    std::vector<bool>& seen = img.tag == 'a' ? seen_a : seen_b;
    if (seen[img.index - 1])
      line_error(img.number, std::string("duplicate image line for '") + img.tag +
                                 std::to_string(img.index) + "'");
    seen[img.index - 1] = true;
    PairElement g;
    g.x = parse_word_line(img.x_text, A, img.x_origin, img.number);
    g.y = parse_word_line(img.y_text, B, img.y_origin, img.number);
    (img.tag == 'a' ? doc.spec.a_images : doc.spec.b_images)[img.index - 1] = std::move(g);
  }

  for (int i = 0; i < A.rank; ++i)
    if (!seen_a[i]) throw SyntaxError("missing image line for 'a" + std::to_string(i + 1) + "'", 1);
  for (int j = 0; j < B.rank; ++j)
    if (!seen_b[j]) throw SyntaxError("missing image line for 'b" + std::to_string(j + 1) + "'", 1);
  return doc;
}

EndoDocument parse_json_doc(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SyntaxError(std::string("invalid JSON: ") + e.what(),
                      static_cast<long long>(e.byte));
  }
  if (!j.is_object()) throw SyntaxError("JSON document must be an object", 1);
  auto rank_of = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
      throw SyntaxError(std::string("JSON document needs an integer '") + key + "'", 1);
    long long r = j[key].get<long long>();
    if (r < 1 || r > 1000000)
      throw SyntaxError(std::string(key) + " out of range: " + std::to_string(r), 1);
    return static_cast<int>(r);
  };
  const Alphabet A{rank_of("n"), 'a'};
  const Alphabet B{rank_of("m"), 'b'};

  EndoDocument doc;
  doc.spec.n = A.rank;
  doc.spec.m = B.rank;
  auto read_images = [&](const char* key, Alphabet alpha) {
    if (!j.contains(key) || !j[key].is_array() ||
        static_cast<int>(j[key].size()) != alpha.rank)
      throw SyntaxError(std::string("JSON document needs '") + key + "' with " +
                            std::to_string(alpha.rank) + " [x, y] pairs",
                        1);
    std::vector<PairElement> out;
    int index = 0;
    for (const auto& item : j[key]) {
      ++index;
      const std::string where =
          std::string(key) + "[" + std::to_string(index) + "]";
      if (!item.is_array() || item.size() != 2 || !item[0].is_string() ||
          !item[1].is_string())
        throw SyntaxError(where + " must be a pair of word strings", 1);
      PairElement g;
      try {
        g.x = parse_word_at(item[0].get<std::string>(), A, 1);
        g.y = parse_word_at(item[1].get<std::string>(), B, 1);
      } catch (const ParseError& e) {
        throw SyntaxError(where + ", " + e.what(), e.column);
      }
      out.push_back(std::move(g));
    }
    return out;
  };
  doc.spec.a_images = read_images("images_a", A);
  doc.spec.b_images = read_images("images_b", B);
  return doc;
}

}  // namespace

FreeWord parse_word(const std::string& text, Alphabet alphabet) {
  return parse_word_at(text, alphabet, 1);
}

PairElement parse_pair(const std::string& text, Alphabet first, Alphabet second) {
  const size_t bar = text.find('|');
  if (bar == std::string::npos)
    throw SyntaxError("expected '<x-word> | <y-word>' with a '|' separator", 1);
  if (size_t again = text.find('|', bar + 1); again != std::string::npos)
    throw SyntaxError(col_msg(static_cast<long long>(again) + 1,
                              "more than one '|' in the pair"),
                      static_cast<long long>(again) + 1);
  PairElement g;
  g.x = parse_word_at(text.substr(0, bar), first, 1);
  g.y = parse_word_at(text.substr(bar + 1), second, static_cast<long long>(bar) + 2);
  return g;
}

EndoDocument EndoDocument::parse(const std::string& text) {
  const size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_json_doc(text);
  return parse_line_doc(text);
}

std::string EndoDocument::print() const {
  std::ostringstream out;
  out << "n = " << spec.n << "\n";
  out << "m = " << spec.m << "\n";
  for (size_t i = 0; i < spec.a_images.size(); ++i)
    out << "a" << i + 1 << " -> " << spec.a_images[i].x.str() << " | "
        << spec.a_images[i].y.str() << "\n";
  for (size_t j = 0; j < spec.b_images.size(); ++j)
    out << "b" << j + 1 << " -> " << spec.b_images[j].x.str() << " | "
        << spec.b_images[j].y.str() << "\n";
  return out.str();
}

SubgroupBasisInput parse_oracle(const std::string& text, Alphabet a, Alphabet b) {
  SubgroupBasisInput input;
  for (const RawLine& raw : clean_lines(text)) {
    const std::string line = trim(raw.text);
    const size_t colon = line.find(':');
    const std::string prefix = colon == std::string::npos ? "" : trim(line.substr(0, colon));
    if (prefix != "a" && prefix != "b")
      line_error(raw.number, "expected 'a: <word>' or 'b: <word>'");
    auto& slot = prefix == "a" ? input.words_a : input.words_b;
    if (!slot) slot.emplace();
    const long long origin =
        static_cast<long long>(raw.text.find(':')) + 2;
    FreeWord w = parse_word_line(raw.text.substr(raw.text.find(':') + 1),
                                 prefix == "a" ? a : b, origin, raw.number);
    if (!w.empty()) slot->push_back(std::move(w));
  }
  return input;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace fnfm::cli
