#include "rinf/search.hpp"

#include <unordered_set>

namespace rinf {

std::size_t enumerate_elements(
    const Evaluator &ev, int depth, const SearchBudget &budget,
    const std::function<bool(const Word &, const Portrait &)> &visit) {
  std::vector<Word> moves;
  std::vector<Portrait> move_portraits;
  auto names = ev.presentation().generator_names();
  for (const auto &s : names) {
    moves.push_back(Word::symbol(s));
    move_portraits.push_back(ev.symbol(s, depth));
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto inv = inverse(move_portraits[i]);
    if (!(inv == move_portraits[i])) {
      moves.push_back(Word::symbol(names[i], -1));
      move_portraits.push_back(std::move(inv));
    }
  }

  std::unordered_set<std::string> seen;
  std::vector<Found> frontier;
  auto id = Portrait::identity(ev.signature(), depth);
  seen.insert(id.encode());
  frontier.push_back({Word{}, id});
  std::size_t visited = 1;
  if (visit(frontier.front().word, frontier.front().portrait))
    return visited;

  for (int len = 1; len <= budget.max_length && !frontier.empty(); ++len) {
    std::vector<Found> next;
    for (const auto &f : frontier)
      for (std::size_t j = 0; j < moves.size(); ++j) {
        auto p = compose(move_portraits[j], f.portrait);
        if (!seen.insert(p.encode()).second)
          continue;
        Word w = moves[j] * f.word;
        ++visited;
        if (visit(w, p))
          return visited;
        if (visited >= budget.max_frontier)
          return visited;
        next.push_back({std::move(w), std::move(p)});
      }
    frontier = std::move(next);
  }
  return visited;
}

std::optional<Found>
find_element(const Evaluator &ev, int depth, const SearchBudget &budget,
             const std::function<bool(const Portrait &)> &pred) {
  std::optional<Found> out;
  enumerate_elements(ev, depth, budget, [&](const Word &w, const Portrait &p) {
    if (!pred(p))
      return false;
    out = Found{w, p};
    return true;
  });
  return out;
}

} // namespace rinf
