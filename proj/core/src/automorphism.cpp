#include "rinf/automorphism.hpp"

#include "rinf/error.hpp"

#include <charconv>

namespace rinf {

AutomorphismSpec::AutomorphismSpec(ConjugationBy c, std::string label)
    : form_(std::move(c)), label_(std::move(label)) {}

AutomorphismSpec::AutomorphismSpec(GeneratorImages g, std::string label)
    : form_(std::move(g)), label_(std::move(label)) {}

AutomorphismSpec AutomorphismSpec::identity() {
  return AutomorphismSpec(ConjugationBy{}, "identity");
}

std::optional<Word> AutomorphismSpec::conjugator() const {
  if (auto c = std::get_if<ConjugationBy>(&form_))
    return c->conjugator;
  return std::get<GeneratorImages>(form_).realizer;
}

std::string AutomorphismSpec::describe() const {
  if (!label_.empty())
    return label_;
  if (auto c = std::get_if<ConjugationBy>(&form_))
    return c->conjugator.empty() ? "identity"
                                 : "conj:" + c->conjugator.to_string();
  const auto &g = std::get<GeneratorImages>(form_);
  std::string out = "images:";
  bool first = true;
  for (const auto &[s, w] : g.images) {
    if (!first)
      out += ";";
    first = false;
    out += s + "=" + w.to_string();
  }
  if (g.realizer)
    out += "@" + g.realizer->to_string();
  return out;
}

namespace {

bool is_generator(const Presentation &p, const std::string &s) {
  auto i = p.index_of(s);
  return i && p.rules()[*i].kind == SymbolKind::Generator;
}

} // namespace

Word apply_spec(const Presentation &p, const AutomorphismSpec &phi,
                const Word &w) {
  p.validate(w);
  if (auto c = std::get_if<ConjugationBy>(&phi.form())) {
    if (c->conjugator.empty())
      return w;
    return conjugate_word(c->conjugator, w);
  }
  const auto &g = std::get<GeneratorImages>(phi.form());
  Word out;
  for (const auto &l : w.letters) {
    if (l.is_tuple() || !is_generator(p, l.symbol)) {
      if (!g.realizer)
        throw Error(ErrorKind::Unsupported,
                    "generator-image spec cannot rewrite '" + w.to_string() +
                        "': it leaves the generators and no realizer is known");
      return conjugate_word(*g.realizer, w);
    }
    auto it = g.images.find(l.symbol);
    Word image = it == g.images.end() ? Word::symbol(l.symbol) : it->second;
    out = out * image.pow(l.exponent);
  }
  return out;
}

AutomorphismSpec compose(const Presentation &p, const AutomorphismSpec &outer,
                         const AutomorphismSpec &inner) {
  auto oc = std::get_if<ConjugationBy>(&outer.form());
  auto ic = std::get_if<ConjugationBy>(&inner.form());
  if (oc && ic)
    return AutomorphismSpec(ConjugationBy{oc->conjugator * ic->conjugator});

  // At least one side is a generator-image map; compose on generators.
  GeneratorImages out;
  for (const auto &s : p.generator_names())
    out.images[s] = apply_spec(p, outer, apply_spec(p, inner, Word::symbol(s)));
  auto ot = outer.conjugator();
  auto it = inner.conjugator();
  if (ot && it)
    out.realizer = *ot * *it;
  return AutomorphismSpec(std::move(out));
}

AutomorphismSpec inner_twist(const Presentation &p, const Word &g,
                             const AutomorphismSpec &phi) {
  if (g.empty())
    return phi;
  return compose(p, AutomorphismSpec(ConjugationBy{g}), phi);
}

AutomorphismSpec spec_tau(int i) {
  auto x = Word::symbol("x");
  auto g = Word::symbol("g");
  switch (i) {
  case 1:
    return AutomorphismSpec(
        GeneratorImages{{{"x", x.inverse()}, {"g", g}}, Word::symbol("t1")},
        "tau1");
  case 2:
    return AutomorphismSpec(GeneratorImages{{{"x", x}, {"g", g.inverse()}}, {}},
                            "tau2");
  case 3:
    return AutomorphismSpec(
        GeneratorImages{{{"x", x.inverse()}, {"g", g.inverse()}}, {}}, "tau3");
  default:
    throw Error(ErrorKind::Precondition,
                "tau index must be 1, 2 or 3, got " + std::to_string(i));
  }
}

AutomorphismSpec spec_family(int level) {
  if (level < 1)
    throw Error(ErrorKind::Precondition, "family level must be >= 1");
  return AutomorphismSpec(ConjugationBy{Word::symbol("f" + std::to_string(level))},
                          "family:" + std::to_string(level));
}

namespace {

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError("bad " + std::string(what) + " '" + std::string(text) + "'",
                     1, 1);
  return value;
}

} // namespace

AutomorphismSpec parse_spec(const Presentation &p, std::string_view text) {
  auto require = [&](const Word &w) {
    p.validate(w);
    return w;
  };
  auto require_symbols = [&](std::initializer_list<const char *> names) {
    for (auto n : names)
      if (!p.index_of(n))
        throw Error(ErrorKind::Unresolved,
                    "spec '" + std::string(text) + "' needs symbol '" + n +
                        "', absent from presentation " + p.name());
  };

  if (text == "identity" || text == "id")
    return AutomorphismSpec::identity();
  if (text.size() == 4 && text.substr(0, 3) == "tau") {
    int i = parse_int(text.substr(3), "tau index");
    require_symbols({"x", "g"});
    auto spec = spec_tau(i);
    if (auto r = spec.conjugator())
      require(*r);
    return spec;
  }
  if (text.substr(0, 7) == "family:") {
    auto spec = spec_family(parse_int(text.substr(7), "family level"));
    require(*spec.conjugator());
    return spec;
  }
  if (text.substr(0, 5) == "conj:") {
    auto w = require(Word::parse(text.substr(5), 1, 6));
    return AutomorphismSpec(ConjugationBy{w});
  }
  if (text.substr(0, 7) == "images:") {
    auto body = text.substr(7);
    GeneratorImages g;
    if (auto at = body.find('@'); at != std::string_view::npos) {
      g.realizer = require(Word::parse(body.substr(at + 1)));
      body = body.substr(0, at);
    }
    while (!body.empty()) {
      auto semi = body.find(';');
      auto item = body.substr(0, semi);
      auto eq = item.find('=');
      if (eq == std::string_view::npos)
        throw ParseError("image entry needs '=': '" + std::string(item) + "'",
                         1, 1);
      std::string s(item.substr(0, eq));
      while (!s.empty() && s.back() == ' ')
        s.pop_back();
      while (!s.empty() && s.front() == ' ')
        s.erase(s.begin());
      if (!is_generator(p, s))
        throw Error(ErrorKind::Unresolved,
                    "'" + s + "' is not a generator of " + p.name());
      g.images[s] = require(Word::parse(item.substr(eq + 1)));
      body = semi == std::string_view::npos ? std::string_view{}
                                            : body.substr(semi + 1);
    }
    return AutomorphismSpec(std::move(g));
  }
  throw ParseError("unknown automorphism spec '" + std::string(text) +
                       "' (expected identity, tau1..tau3, family:<L>, "
                       "conj:<word> or images:...)",
                   1, 1);
}

} // namespace rinf
