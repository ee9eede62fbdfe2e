#include "rinf/evaluator.hpp"

#include "rinf/error.hpp"

#include <mutex>

namespace rinf {

Evaluator::Evaluator(Presentation p) : pres_(std::move(p)) {}

Portrait Evaluator::eval(const Word &w, int depth) const {
  return eval_at(w, depth, 0);
}

Portrait Evaluator::eval(std::string_view word_text, int depth) const {
  return eval(Word::parse(word_text), depth);
}

Portrait Evaluator::eval_at(const Word &w, int depth, int shift) const {
  if (depth < 0)
    throw Error(ErrorKind::Precondition, "negative evaluation depth");
  auto sig = pres_.signature().shifted(shift);
  Portrait out = Portrait::identity(sig, depth);
  for (const auto &l : w.letters)
    out = compose(out, letter(l, depth, shift));
  return out;
}

Portrait Evaluator::letter(const Letter &l, int depth, int shift) const {
  if (!l.is_tuple()) {
    Portrait p = symbol(l.symbol, depth, shift);
    return l.exponent == 1 ? p : power(p, l.exponent);
  }
  auto sig = pres_.signature().shifted(shift);
  int k = sig.branching(0);
  if (l.sections.size() != static_cast<std::size_t>(k))
    throw Error(ErrorKind::Structural,
                "section tuple has " + std::to_string(l.sections.size()) +
                    " entries, vertex has " + std::to_string(k) + " children");
  if (depth == 0)
    return Portrait::identity(sig, 0);
  std::vector<Portrait> children;
  children.reserve(l.sections.size());
  for (const auto &s : l.sections)
    children.push_back(eval_at(s, depth - 1, shift + 1));
  return Portrait::assemble(sig, Perm::identity(k), children);
}

Portrait Evaluator::symbol(std::string_view name, int depth, int shift) const {
  auto index = pres_.index_of(name);
  if (!index)
    throw Error(ErrorKind::Unresolved,
                "unknown symbol '" + std::string(name) + "'");
  auto sig = pres_.signature().shifted(shift);
  if (depth == 0)
    return Portrait::identity(sig, 0);

  Key key{*index, depth, sig.is_constant() ? 0 : shift};
  {
    std::shared_lock lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end())
      return it->second;
  }

  const auto &rule = pres_.rules()[*index];
  if (rule.root.degree() != sig.branching(0))
    throw Error(ErrorKind::Structural,
                "rule '" + rule.name + "' has arity " +
                    std::to_string(rule.root.degree()) + " but level " +
                    std::to_string(shift) + " branches " +
                    std::to_string(sig.branching(0)) + "-fold");
  std::vector<Portrait> children;
  children.reserve(rule.children.size());
  for (const auto &child : rule.children)
    children.push_back(eval_at(child, depth - 1, shift + 1));
  Portrait result = Portrait::assemble(sig, rule.root, children);

  std::unique_lock lock(mutex_);
  return memo_.try_emplace(key, std::move(result)).first->second;
}

Portrait Evaluator::diagonal(const Word &w, int n, int depth) const {
  if (n < 1)
    throw Error(ErrorKind::Precondition, "diagonal needs n >= 1");
  int k = signature().branching(0);
  return eval(diagonal_word(w, k, n), depth);
}

std::vector<std::string> Evaluator::failing_relations(int depth) const {
  std::vector<std::string> out;
  for (const auto &rel : pres_.relations())
    if (!(eval(rel.lhs, depth) == eval(rel.rhs, depth)))
      out.push_back(rel.lhs.to_string() + " = " + rel.rhs.to_string());
  return out;
}

std::size_t Evaluator::memo_size() const {
  std::shared_lock lock(mutex_);
  return memo_.size();
}

} // namespace rinf
