#pragma once

// Hand-rolled random generators for property tests. Seeds are fixed so
// failures reproduce.

#include "rinf/presentation.hpp"
#include "rinf/tree.hpp"
#include "rinf/word.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace gen {

using Rng = std::mt19937_64;

inline int uniform(Rng &rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline rinf::Perm perm(Rng &rng, int k) {
  std::vector<int> images(static_cast<std::size_t>(k));
  std::iota(images.begin(), images.end(), 0);
  std::shuffle(images.begin(), images.end(), rng);
  return rinf::Perm::from_images(images);
}

inline rinf::Portrait portrait(Rng &rng, const rinf::TreeSignature &sig, int depth) {
  std::vector<rinf::Perm> labels;
  for (int j = 0; j < depth; ++j)
    for (std::uint64_t u = 0; u < sig.level_size(j); ++u)
      labels.push_back(perm(rng, sig.branching(j)));
  return rinf::Portrait::from_labels(sig, depth, std::move(labels));
}

/// Portrait in St_m with random labels below.
inline rinf::Portrait stabilizer_portrait(Rng &rng, const rinf::TreeSignature &sig,
                                          int depth, int m) {
  std::vector<rinf::Perm> labels;
  for (int j = 0; j < depth; ++j)
    for (std::uint64_t u = 0; u < sig.level_size(j); ++u)
      labels.push_back(j < m ? rinf::Perm::identity(sig.branching(j))
                             : perm(rng, sig.branching(j)));
  return rinf::Portrait::from_labels(sig, depth, std::move(labels));
}

/// Random product of generators and their inverses.
inline rinf::Word word(Rng &rng, const std::vector<std::string> &symbols, int length) {
  rinf::Word w;
  for (int i = 0; i < length; ++i) {
    const auto &s = symbols[static_cast<std::size_t>(
        uniform(rng, 0, static_cast<int>(symbols.size()) - 1))];
    w = w * rinf::Word::symbol(s, uniform(rng, 0, 1) ? 1 : -1);
  }
  return w;
}

/// A binary presentation with `n` generators, random root labels and
/// sections that are short random words over the generators.
inline std::string binary_presentation_text(Rng &rng, int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i)
    names.push_back("s" + std::to_string(i));
  std::string text = "name = random\nsig = binary\n";
  for (const auto &s : names) {
    auto root = uniform(rng, 0, 1) ? "perm[1,0]" : "perm[0,1]";
    auto sec = [&] {
      auto w = word(rng, names, uniform(rng, 0, 2));
      return w.empty() ? std::string("1") : w.to_string();
    };
    text += "gen " + s + " = " + root + " (" + sec() + ", " + sec() + ")\n";
  }
  return text;
}

} // namespace gen
