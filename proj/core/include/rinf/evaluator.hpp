#pragma once

#include "rinf/presentation.hpp"
#include "rinf/tree.hpp"
#include "rinf/word.hpp"

#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <tuple>

namespace rinf {

/// Evaluates words of a presentation to depth-d portraits.
///
/// Symbol portraits are memoized per (symbol, depth, level shift). The memo
/// accepts concurrent readers and concurrent fills; two threads racing on the
/// same key compute identical values and the first insert wins.
class Evaluator {
public:
  explicit Evaluator(Presentation p);

  Evaluator(const Evaluator &) = delete;
  Evaluator &operator=(const Evaluator &) = delete;

  const Presentation &presentation() const { return pres_; }
  const TreeSignature &signature() const { return pres_.signature(); }

  Portrait eval(const Word &w, int depth) const;
  Portrait eval(std::string_view word_text, int depth) const;
  /// Evaluation on the subtree signature shifted by `shift` levels.
  Portrait eval_at(const Word &w, int depth, int shift) const;
  Portrait symbol(std::string_view name, int depth, int shift = 0) const;

  /// (w, w, ..., w) nested n levels deep, evaluated at total depth `depth`.
  Portrait diagonal(const Word &w, int n, int depth) const;

  /// Relations that fail at the given depth, as "lhs = rhs" strings.
  std::vector<std::string> failing_relations(int depth) const;

  std::size_t memo_size() const;

private:
  using Key = std::tuple<std::size_t, int, int>;

  Portrait letter(const Letter &l, int depth, int shift) const;

  Presentation pres_;
  mutable std::shared_mutex mutex_;
  mutable std::map<Key, Portrait> memo_;
};

} // namespace rinf
