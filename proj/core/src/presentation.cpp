#include "rinf/presentation.hpp"

#include "rinf/error.hpp"
#include "rinf/hash.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace rinf {

namespace {

constexpr std::string_view kGrigorchuk = R"(# First Grigorchuk group on the binary tree.
name = grigorchuk
sig = binary
gen a = perm[1,0] (1, 1)
gen b = perm[0,1] (a, c)
gen c = perm[0,1] (a, d)
gen d = perm[0,1] (1, b)
# Outer automorphism family: conjugation by (1,(ad)^2,1,(ad)^2,...) placed
# on level L is conjugation by fL.
norm f1 = perm[0,1] (1, a*d*a*d)
norm f2 = perm[0,1] (f1, f1)
norm f3 = perm[0,1] (f2, f2)
norm f4 = perm[0,1] (f3, f3)
norm f5 = perm[0,1] (f4, f4)
norm f6 = perm[0,1] (f5, f5)
rel a*a = 1
rel b*b = 1
rel c*c = 1
rel d*d = 1
rel d = b*c
rel a^-1*c*a = (d, a)
rel a^-1*d*a = (b, 1)
)";

constexpr std::string_view kGuptaSidki = R"(# Gupta-Sidki 3-group on the ternary tree; g is gamma.
name = gupta-sidki
sig = ternary
gen x = perm[1,2,0] (1, 1, 1)
gen g = perm[0,1,2] (x, x^-1, g)
# Diagonal powers x^(i) = (x^(i-1), x^(i-1), x^(i-1)), x^(0) = x.
norm x1 = perm[0,1,2] (x, x, x)
norm x2 = perm[0,1,2] (x1, x1, x1)
norm x3 = perm[0,1,2] (x2, x2, x2)
norm x4 = perm[0,1,2] (x3, x3, x3)
# Isometry inducing x -> x^-1, g -> g.
norm t1 = perm[1,0,2] (t1, t1, t1)
rel x^3 = 1
rel g^3 = 1
)";

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) ||
                     s[0] == '_'))
    return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
      return false;
  return true;
}

struct Cursor {
  std::string_view line;
  int number;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string &what) const {
    throw ParseError(what, number, static_cast<int>(pos) + 1);
  }

  void skip_space() {
    while (pos < line.size() &&
           std::isspace(static_cast<unsigned char>(line[pos])))
      ++pos;
  }

  std::string_view identifier() {
    skip_space();
    auto start = pos;
    while (pos < line.size() &&
           (std::isalnum(static_cast<unsigned char>(line[pos])) ||
            line[pos] == '_' || line[pos] == '-'))
      ++pos;
    if (start == pos)
      fail("expected identifier");
    return line.substr(start, pos - start);
  }

  void expect(char c) {
    skip_space();
    if (pos >= line.size() || line[pos] != c)
      fail(std::string("expected '") + c + "'");
    ++pos;
  }

  std::string_view rest() {
    skip_space();
    return line.substr(pos);
  }
};

Perm parse_perm(Cursor &cur) {
  cur.skip_space();
  if (cur.line.substr(cur.pos, 5) != "perm[")
    cur.fail("expected perm[...]");
  cur.pos += 5;
  std::vector<int> images;
  for (;;) {
    cur.skip_space();
    auto start = cur.pos;
    while (cur.pos < cur.line.size() &&
           std::isdigit(static_cast<unsigned char>(cur.line[cur.pos])))
      ++cur.pos;
    if (start == cur.pos)
      cur.fail("expected permutation image");
    images.push_back(std::stoi(std::string(cur.line.substr(start, cur.pos - start))));
    cur.skip_space();
    if (cur.pos < cur.line.size() && cur.line[cur.pos] == ',') {
      ++cur.pos;
      continue;
    }
    cur.expect(']');
    break;
  }
  if (images.size() > static_cast<std::size_t>(Perm::kMaxDegree))
    cur.fail("permutation degree exceeds 8");
  try {
    return Perm::from_images(images);
  } catch (const Error &e) {
    cur.fail(e.what());
  }
}

} // namespace

Presentation Presentation::parse(std::string_view text) {
  Presentation p;
  bool have_sig = false;
  std::set<std::string> names;
  int number = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++number;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    if (trim(line).empty())
      continue;
    Cursor cur{line, number};
    auto keyword = cur.identifier();
    if (keyword == "name") {
      cur.expect('=');
      auto value = trim(cur.rest());
      if (value.empty())
        cur.fail("empty name");
      p.name_ = std::string(value);
    } else if (keyword == "sig") {
      cur.expect('=');
      try {
        p.sig_ = TreeSignature::parse(cur.rest());
      } catch (const Error &e) {
        cur.fail(e.what());
      }
      have_sig = true;
    } else if (keyword == "gen" || keyword == "norm") {
      RecursionRule rule;
      rule.kind =
          keyword == "gen" ? SymbolKind::Generator : SymbolKind::Normalizer;
      rule.line = number;
      auto name = cur.identifier();
      if (!is_identifier(name))
        cur.fail("bad symbol name '" + std::string(name) + "'");
      rule.name = std::string(name);
      if (!names.insert(rule.name).second)
        cur.fail("duplicate symbol '" + rule.name + "'");
      cur.expect('=');
      rule.root = parse_perm(cur);
      cur.skip_space();
      auto column = static_cast<int>(cur.pos) + 1;
      auto sections = Word::parse(cur.rest(), number, column);
      if (sections.letters.size() == 1 && sections.letters[0].is_tuple())
        rule.children = sections.letters[0].sections;
      else
        cur.fail("expected section tuple '(w0, w1, ...)'");
      p.rules_.push_back(std::move(rule));
    } else if (keyword == "rel") {
      cur.skip_space();
      auto body = cur.rest();
      auto eq = body.find('=');
      if (eq == std::string_view::npos)
        cur.fail("relation needs '='");
      auto column = static_cast<int>(cur.pos) + 1;
      Relation rel;
      rel.line = number;
      rel.lhs = Word::parse(body.substr(0, eq), number, column);
      rel.rhs = Word::parse(body.substr(eq + 1), number,
                            column + static_cast<int>(eq) + 1);
      p.relations_.push_back(std::move(rel));
    } else {
      cur.pos = 0;
      cur.fail("unknown declaration '" + std::string(keyword) + "'");
    }
  }
  if (!have_sig)
    throw ParseError("missing 'sig' declaration", number, 1);
  if (p.rules_.empty())
    throw ParseError("no generators declared", number, 1);

  // Arity and resolution checks, now that every symbol is known.
  for (const auto &rule : p.rules_) {
    int k = p.sig_.branching(0);
    if (p.sig_.is_constant() &&
        (rule.root.degree() != k ||
         rule.children.size() != static_cast<std::size_t>(k)))
      throw Error(ErrorKind::Structural,
                  std::to_string(rule.line) + ":1: rule '" + rule.name + "' has arity " +
                      std::to_string(rule.root.degree()) + "/" +
                      std::to_string(rule.children.size()) +
                      ", tree branching is " + std::to_string(k));
    if (rule.root.degree() != static_cast<int>(rule.children.size()))
      throw Error(ErrorKind::Structural,
                  std::to_string(rule.line) + ":1: rule '" + rule.name +
                      "': permutation degree differs from section count");
    for (const auto &child : rule.children)
      for (const auto &sym : child.symbols())
        if (!names.count(sym))
          throw Error(ErrorKind::Unresolved,
                      std::to_string(rule.line) + ":1: rule '" + rule.name +
                          "' refers to undeclared symbol '" + sym + "'");
  }
  for (const auto &rel : p.relations_)
    for (const auto *w : {&rel.lhs, &rel.rhs})
      for (const auto &sym : w->symbols())
        if (!names.count(sym))
          throw Error(ErrorKind::Unresolved,
                      std::to_string(rel.line) + ":1: relation refers to undeclared symbol '" +
                          sym + "'");
  if (p.generator_names().empty())
    throw ParseError("no 'gen' symbols declared", number, 1);
  return p;
}

Presentation Presentation::load(const std::filesystem::path &file) {
  std::ifstream in(file);
  if (!in)
    throw Error(ErrorKind::Unresolved,
                "cannot open presentation file " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<std::size_t> Presentation::index_of(std::string_view symbol) const {
  for (std::size_t i = 0; i < rules_.size(); ++i)
    if (rules_[i].name == symbol)
      return i;
  return std::nullopt;
}

const RecursionRule &Presentation::rule(std::string_view symbol) const {
  auto i = index_of(symbol);
  if (!i)
    throw Error(ErrorKind::Unresolved,
                "unknown symbol '" + std::string(symbol) + "'");
  return rules_[*i];
}

std::vector<std::string> Presentation::generator_names() const {
  std::vector<std::string> out;
  for (const auto &r : rules_)
    if (r.kind == SymbolKind::Generator)
      out.push_back(r.name);
  return out;
}

std::vector<std::string> Presentation::normalizer_names() const {
  std::vector<std::string> out;
  for (const auto &r : rules_)
    if (r.kind == SymbolKind::Normalizer)
      out.push_back(r.name);
  return out;
}

void Presentation::validate(const Word &w) const {
  for (const auto &sym : w.symbols())
    if (!index_of(sym))
      throw Error(ErrorKind::Unresolved, "unknown symbol '" + sym + "' in " +
                                             name_ + " word " + w.to_string());
}

bool Presentation::is_group_word(const Word &w) const {
  for (const auto &l : w.letters) {
    if (l.is_tuple())
      return false;
    auto i = index_of(l.symbol);
    if (!i || rules_[*i].kind != SymbolKind::Generator)
      return false;
  }
  return true;
}

std::string Presentation::canonical_text() const {
  std::string out = "name = " + name_ + "\nsig = " + sig_.to_string() + "\n";
  for (const auto &r : rules_) {
    out += r.kind == SymbolKind::Generator ? "gen " : "norm ";
    out += r.name + " = perm" + r.root.to_string() + " " +
           Word::tuple(r.children).to_string() + "\n";
  }
  for (const auto &rel : relations_)
    out += "rel " + rel.lhs.to_string() + " = " + rel.rhs.to_string() + "\n";
  return out;
}

std::uint64_t Presentation::fingerprint() const {
  return fnv1a(canonical_text());
}

std::string_view builtin_text(std::string_view name) {
  if (name == "grigorchuk")
    return kGrigorchuk;
  if (name == "gupta-sidki")
    return kGuptaSidki;
  throw Error(ErrorKind::Unresolved,
              "unknown built-in presentation '" + std::string(name) + "'");
}

bool is_builtin_name(std::string_view name) {
  return name == "grigorchuk" || name == "gupta-sidki";
}

Presentation builtin_grigorchuk() { return Presentation::parse(kGrigorchuk); }
Presentation builtin_gupta_sidki() { return Presentation::parse(kGuptaSidki); }

Presentation builtin_presentation(std::string_view name) {
  return Presentation::parse(builtin_text(name));
}

} // namespace rinf
