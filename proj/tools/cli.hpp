#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fnfm/endo.hpp"
#include "fnfm/errors.hpp"
#include "fnfm/fixed.hpp"

namespace fnfm::cli {

/// Errors raised while reading command-line words and document files.
/// `column` is 1-based.  Document parsers fold the line number into the
/// message and keep the column relative to that line.
struct ParseError : Error {
  long long column;
  ParseError(const std::string& what, long long col) : Error(what), column(col) {}
};

/// Token that does not match the word syntax at all.
struct SyntaxError : ParseError {
  using ParseError::ParseError;
};

/// Generator index outside the declared rank, like "a3" over rank 2.
struct UnknownGenerator : ParseError {
  using ParseError::ParseError;
};

/// Generator with the other factor's tag, like "b2" in a first-factor
/// slot.
struct WrongAlphabet : ParseError {
  using ParseError::ParseError;
};

/// Reads a word in the surface syntax: whitespace-separated tokens such
/// as "a3" and "b1^-1", with "1" for the empty word.  The result is
/// freely reduced.
FreeWord parse_word(const std::string& text, Alphabet alphabet);

/// Reads "x | y" with x over `first` and y over `second`.  Error columns
/// refer to the whole input string.
PairElement parse_pair(const std::string& text, Alphabet first, Alphabet second);

/// A product endomorphism as a text document.  Two interchangeable
/// encodings are accepted: a line-oriented format
///
///   n = 2
///   m = 2
///   a1 -> a1 a1 | b1
///   a2 -> 1 | b1
///   b1 -> 1 | b1
///   b2 -> 1 | b1 b1
///
/// with one arrow line per generator and "#" starting a comment, and a
/// JSON object {"n":2,"m":2,"images_a":[["a1 a1","b1"],...],"images_b":
/// [...]} chosen when the first non-space byte is "{".  `print` always
/// emits the line format in canonical order and spacing, so
/// print-parse-print is byte-stable.
struct EndoDocument {
  EndoSpec spec;

  static EndoDocument parse(const std::string& text);
  std::string print() const;
};

/// Reads a component-basis file: one word per line, "a: <word>" for the
/// first factor and "b: <word>" for the second.  A bare "a:" (or "b:")
/// declares that component's basis empty; a factor with no lines at all
/// stays disengaged.
SubgroupBasisInput parse_oracle(const std::string& text, Alphabet a, Alphabet b);

/// Whole-file read; throws Error when the file cannot be opened.
std::string slurp(const std::string& path);

/// Entry point behind the binary: `args` excludes the program name.
/// Returns 0 for decided verdicts, 1 for input or usage errors, 2 when
/// the answer is unknown, inconclusive or conditional on an oracle.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace fnfm::cli
