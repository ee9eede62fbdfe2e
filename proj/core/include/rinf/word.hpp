#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rinf {

struct Word;

/// One factor of a word: a named symbol raised to +1 or -1, or a section
/// tuple (w_0, ..., w_{k-1}) denoting the isometry with trivial root label
/// whose section at child i is w_i.
struct Letter {
  std::string symbol;
  int exponent = 1;
  std::vector<Word> sections;

  bool is_tuple() const { return symbol.empty(); }
  bool operator==(const Letter &) const = default;
};

/// Product of letters, read left to right as composition under left action:
/// the word u*v acts as u(v(.)).
struct Word {
  std::vector<Letter> letters;

  Word() = default;
  explicit Word(std::vector<Letter> ls) : letters(std::move(ls)) {}

  static Word symbol(std::string name, int exponent = 1);
  static Word tuple(std::vector<Word> sections);
  /// Text syntax: `*` product, `^k` integer power (`^-1` inverse), `( )`
  /// grouping, `(w0, w1, ...)` section tuple, `1` or empty for identity.
  static Word parse(std::string_view text);
  /// As above; error positions are reported relative to (line, column).
  static Word parse(std::string_view text, int line, int column);

  bool empty() const { return letters.empty(); }
  std::size_t length() const;
  Word inverse() const;
  Word pow(int e) const;
  std::string to_string() const;

  /// Symbols referenced anywhere, including inside tuples.
  std::vector<std::string> symbols() const;
  bool has_tuples() const;

  Word operator*(const Word &rhs) const;
  bool operator==(const Word &) const = default;
};

/// u v u^{-1}.
Word conjugate_word(const Word &u, const Word &v);
/// (w, w, ..., w) nested n levels deep with `arity` copies per level.
Word diagonal_word(const Word &w, int arity, int n);

} // namespace rinf
