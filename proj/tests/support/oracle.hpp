#pragma once

// Independent reference computations for tests. Nothing here uses portraits:
// elements are tracked by where they send vertices, computed straight from
// the recursion rules.

#include "rinf/presentation.hpp"
#include "rinf/word.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace oracle {

using Path = std::vector<int>;
using Action = std::vector<std::uint32_t>;  // image index of each level-d vertex

inline Path image(const rinf::Presentation &p, const rinf::Word &w, Path v);

inline Path image_letter(const rinf::Presentation &p, const rinf::Letter &l, Path v) {
  if (v.empty())
    return v;
  Path tail(v.begin() + 1, v.end());
  if (l.is_tuple()) {
    auto rest = image(p, l.sections[static_cast<std::size_t>(v[0])], tail);
    rest.insert(rest.begin(), v[0]);
    return rest;
  }
  const auto &rule = p.rule(l.symbol);
  int e = l.exponent;
  for (; e > 0; --e) {
    int c = v[0];
    Path t(v.begin() + 1, v.end());
    auto rest = image(p, rule.children[static_cast<std::size_t>(c)], t);
    rest.insert(rest.begin(), rule.root(c));
    v = rest;
  }
  for (; e < 0; ++e) {
    int c = rule.root.inverse()(v[0]);
    Path t(v.begin() + 1, v.end());
    auto rest = image(p, rule.children[static_cast<std::size_t>(c)].inverse(), t);
    rest.insert(rest.begin(), c);
    v = rest;
  }
  return v;
}

/// Letters act right to left: the word u*v sends x to u(v(x)).
inline Path image(const rinf::Presentation &p, const rinf::Word &w, Path v) {
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    v = image_letter(p, *it, std::move(v));
  return v;
}

/// Constant branching k only.
inline Path path_of(std::uint32_t index, int k, int level) {
  Path out(static_cast<std::size_t>(level));
  for (int j = level - 1; j >= 0; --j) {
    out[static_cast<std::size_t>(j)] = static_cast<int>(index % k);
    index /= static_cast<std::uint32_t>(k);
  }
  return out;
}

inline std::uint32_t index_of(const Path &v, int k) {
  std::uint32_t u = 0;
  for (int c : v)
    u = u * static_cast<std::uint32_t>(k) + static_cast<std::uint32_t>(c);
  return u;
}

inline std::uint32_t level_size(int k, int level) {
  std::uint32_t n = 1;
  for (int j = 0; j < level; ++j)
    n *= static_cast<std::uint32_t>(k);
  return n;
}

inline Action action(const rinf::Presentation &p, const rinf::Word &w, int level) {
  int k = p.signature().branching(0);
  Action out(level_size(k, level));
  for (std::uint32_t u = 0; u < out.size(); ++u)
    out[u] = index_of(image(p, w, path_of(u, k, level)), k);
  return out;
}

/// (f*g)(x) = f(g(x)).
inline Action compose(const Action &f, const Action &g) {
  Action out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    out[i] = f[g[i]];
  return out;
}

inline Action inverse(const Action &f) {
  Action out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    out[f[i]] = static_cast<std::uint32_t>(i);
  return out;
}

inline bool is_identity(const Action &f) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] != i)
      return false;
  return true;
}

/// Level-d action images of G: G/St_d as a set.
inline std::set<Action> quotient(const rinf::Presentation &p, int level) {
  std::vector<Action> gens;
  for (const auto &s : p.generator_names()) {
    gens.push_back(action(p, rinf::Word::symbol(s), level));
    gens.push_back(inverse(gens.back()));
  }
  Action id(level_size(p.signature().branching(0), level));
  for (std::uint32_t i = 0; i < id.size(); ++i)
    id[i] = i;
  std::set<Action> seen{id};
  std::vector<Action> frontier{id};
  while (!frontier.empty()) {
    std::vector<Action> next;
    for (const auto &x : frontier)
      for (const auto &g : gens) {
        auto y = compose(g, x);
        if (seen.insert(y).second)
          next.push_back(std::move(y));
      }
    frontier = std::move(next);
  }
  return seen;
}

/// Number of classes of x ~ h x t h^-1 t^-1 on the given element set.
inline std::size_t twisted_class_count(const std::set<Action> &q, const Action &t) {
  std::vector<Action> elems(q.begin(), q.end());
  std::map<Action, std::size_t> id;
  for (std::size_t i = 0; i < elems.size(); ++i)
    id[elems[i]] = i;
  auto tinv = inverse(t);
  std::vector<bool> done(elems.size(), false);
  std::size_t classes = 0;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (done[i])
      continue;
    ++classes;
    auto xt = compose(elems[i], t);
    for (const auto &h : elems) {
      auto y = compose(compose(compose(h, xt), inverse(h)), tinv);
      done[id.at(y)] = true;
    }
  }
  return classes;
}

/// Members of each class as sorted element sets, for class-by-class checks.
inline std::vector<std::set<Action>> twisted_classes(const std::set<Action> &q,
                                                     const Action &t) {
  std::vector<Action> elems(q.begin(), q.end());
  std::set<Action> done;
  std::vector<std::set<Action>> out;
  auto tinv = inverse(t);
  for (const auto &x : elems) {
    if (done.count(x))
      continue;
    std::set<Action> cls;
    auto xt = compose(x, t);
    for (const auto &h : elems)
      cls.insert(compose(compose(compose(h, xt), inverse(h)), tinv));
    done.insert(cls.begin(), cls.end());
    out.push_back(std::move(cls));
  }
  return out;
}

} // namespace oracle
