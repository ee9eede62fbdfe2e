#include "rinf/word.hpp"

#include "rinf/error.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace rinf {

Word Word::symbol(std::string name, int exponent) {
  Word w;
  w.letters.push_back(Letter{std::move(name), exponent, {}});
  return w;
}

Word Word::tuple(std::vector<Word> sections) {
  Word w;
  w.letters.push_back(Letter{"", 1, std::move(sections)});
  return w;
}

std::size_t Word::length() const {
  std::size_t n = 0;
  for (const auto &l : letters) {
    if (!l.is_tuple()) {
      ++n;
      continue;
    }
    std::size_t longest = 0;
    for (const auto &s : l.sections)
      longest = std::max(longest, s.length());
    n += longest;
  }
  return n;
}

Word Word::inverse() const {
  Word out;
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    if (it->is_tuple()) {
      std::vector<Word> sections;
      for (const auto &s : it->sections)
        sections.push_back(s.inverse());
      out.letters.push_back(Letter{"", 1, std::move(sections)});
    } else {
      out.letters.push_back(Letter{it->symbol, -it->exponent, {}});
    }
  }
  return out;
}

Word Word::pow(int e) const {
  Word base = e < 0 ? inverse() : *this;
  Word out;
  for (int i = 0, n = e < 0 ? -e : e; i < n; ++i)
    out = out * base;
  return out;
}

Word Word::operator*(const Word &rhs) const {
  Word out = *this;
  out.letters.insert(out.letters.end(), rhs.letters.begin(),
                     rhs.letters.end());
  return out;
}

std::string Word::to_string() const {
  if (letters.empty())
    return "1";
  std::string out;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i)
      out += "*";
    const auto &l = letters[i];
    if (l.is_tuple()) {
      out += "(";
      for (std::size_t j = 0; j < l.sections.size(); ++j) {
        if (j)
          out += ", ";
        out += l.sections[j].to_string();
      }
      out += ")";
    } else {
      out += l.symbol;
      if (l.exponent != 1)
        out += "^" + std::to_string(l.exponent);
    }
  }
  return out;
}

std::vector<std::string> Word::symbols() const {
  std::set<std::string> seen;
  std::vector<std::string> out;
  auto visit = [&](const Word &w, auto &&self) -> void {
    for (const auto &l : w.letters) {
      if (l.is_tuple()) {
        for (const auto &s : l.sections)
          self(s, self);
      } else if (seen.insert(l.symbol).second) {
        out.push_back(l.symbol);
      }
    }
  };
  visit(*this, visit);
  return out;
}

bool Word::has_tuples() const {
  return std::any_of(letters.begin(), letters.end(),
                     [](const Letter &l) { return l.is_tuple(); });
}

Word conjugate_word(const Word &u, const Word &v) {
  return u * v * u.inverse();
}

Word diagonal_word(const Word &w, int arity, int n) {
  Word out = w;
  for (int i = 0; i < n; ++i)
    out = Word::tuple(std::vector<Word>(static_cast<std::size_t>(arity), out));
  return out;
}

namespace {

class WordParser {
public:
  WordParser(std::string_view text, int line, int column)
      : text_(text), line_(line), column_(column) {}

  Word parse() {
    Word w = word();
    skip_space();
    if (pos_ < text_.size())
      fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return w;
  }

private:
  [[noreturn]] void fail(const std::string &what) const {
    throw ParseError(what, line_, column_ + static_cast<int>(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool at_word_end() {
    skip_space();
    return pos_ >= text_.size() || text_[pos_] == ')' || text_[pos_] == ',';
  }

  Word word() {
    Word w;
    if (at_word_end())
      return w;
    w = factor();
    while (peek('*')) {
      ++pos_;
      w = w * factor();
    }
    return w;
  }

  Word factor() {
    Word base = atom();
    if (peek('^')) {
      ++pos_;
      skip_space();
      bool negative = false;
      if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
        negative = text_[pos_] == '-';
        ++pos_;
      }
      if (pos_ >= text_.size() ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        fail("expected integer exponent");
      int e = 0;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        e = e * 10 + (text_[pos_] - '0');
        if (e > 1000)
          fail("exponent too large");
        ++pos_;
      }
      base = base.pow(negative ? -e : e);
    }
    return base;
  }

  Word atom() {
    skip_space();
    if (pos_ >= text_.size())
      fail("expected symbol, '1' or '('");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      std::vector<Word> parts{word()};
      while (peek(',')) {
        ++pos_;
        parts.push_back(word());
      }
      if (!peek(')'))
        fail("expected ')'");
      ++pos_;
      if (parts.size() == 1)
        return parts.front();
      return Word::tuple(std::move(parts));
    }
    if (c == '1') {
      ++pos_;
      return {};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      auto start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_'))
        ++pos_;
      return Word::symbol(std::string(text_.substr(start, pos_ - start)));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
  int column_;
};

} // namespace

Word Word::parse(std::string_view text) { return parse(text, 1, 1); }

Word Word::parse(std::string_view text, int line, int column) {
  return WordParser(text, line, column).parse();
}

} // namespace rinf
