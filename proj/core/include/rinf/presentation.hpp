#pragma once

// Wreath-recursion presentations of self-similar groups.
//
// Text format, one declaration per line, `#` starts a comment:
//
//   name = grigorchuk
//   sig  = binary | ternary | k1,k2,...,kt     (kt repeats forever)
//   gen  a  = perm[1,0] (1, 1)                 root permutation, sections
//   gen  b  = perm[0,1] (a, c)
//   norm f1 = perm[0,1] (1, a*d*a*d)           normalizer element, not in G
//   rel  a*a = 1                               identity checked by tests
//
// Sections are words (see Word::parse) over every declared symbol; a rule
// may refer to itself. Symbols only ever occur in section position, so every
// unfolding step consumes one level and evaluation to finite depth always
// terminates.

#include "rinf/tree.hpp"
#include "rinf/word.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rinf {

enum class SymbolKind { Generator, Normalizer };

struct RecursionRule {
  std::string name;
  SymbolKind kind = SymbolKind::Generator;
  Perm root;
  std::vector<Word> children;
  int line = 0;
};

struct Relation {
  Word lhs;
  Word rhs;
  int line = 0;
};

class Presentation {
public:
  static Presentation parse(std::string_view text);
  static Presentation load(const std::filesystem::path &file);

  const std::string &name() const { return name_; }
  const TreeSignature &signature() const { return sig_; }
  const std::vector<RecursionRule> &rules() const { return rules_; }
  const std::vector<Relation> &relations() const { return relations_; }

  std::optional<std::size_t> index_of(std::string_view symbol) const;
  const RecursionRule &rule(std::string_view symbol) const;

  /// Generator symbols in declaration order; these generate G.
  std::vector<std::string> generator_names() const;
  std::vector<std::string> normalizer_names() const;

  /// Throws Unresolved if the word mentions an undeclared symbol.
  void validate(const Word &w) const;
  /// True if w is a product of generators only (no normalizer symbols, no
  /// section tuples), i.e. w certainly denotes an element of G.
  bool is_group_word(const Word &w) const;

  /// Normalized declaration text; equal presentations give equal text.
  std::string canonical_text() const;
  std::uint64_t fingerprint() const;

private:
  std::string name_ = "unnamed";
  TreeSignature sig_;
  std::vector<RecursionRule> rules_;
  std::vector<Relation> relations_;
};

Presentation builtin_grigorchuk();
Presentation builtin_gupta_sidki();
/// "grigorchuk" or "gupta-sidki"; throws Unresolved otherwise.
Presentation builtin_presentation(std::string_view name);
bool is_builtin_name(std::string_view name);
/// Declaration text of a built-in, in the presentation file format.
std::string_view builtin_text(std::string_view name);

} // namespace rinf
