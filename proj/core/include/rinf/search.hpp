#pragma once

#include "rinf/evaluator.hpp"

#include <cstddef>
#include <functional>
#include <optional>

namespace rinf {

struct SearchBudget {
  int max_length = 12;
  std::size_t max_frontier = 100000;
};

struct Found {
  Word word;
  Portrait portrait;
};

/// Visits the distinct depth-d images of generator words in breadth-first
/// order (left multiplication by generators, then inverses, in declaration
/// order), shortest word first. `visit` returns true to stop. Stops after
/// max_length letters or max_frontier distinct elements. Returns the number
/// of elements visited.
std::size_t enumerate_elements(
    const Evaluator &ev, int depth, const SearchBudget &budget,
    const std::function<bool(const Word &, const Portrait &)> &visit);

/// First element in enumeration order satisfying `pred`.
std::optional<Found>
find_element(const Evaluator &ev, int depth, const SearchBudget &budget,
             const std::function<bool(const Portrait &)> &pred);

} // namespace rinf
