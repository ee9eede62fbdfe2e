#include "rinf/perm_group.hpp"

#include "rinf/error.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace rinf {

bool PermGroup::contains(const Perm &p) const {
  return std::binary_search(elements_.begin(), elements_.end(), p);
}

PermGroup PermGroup::closure(int degree, std::vector<Perm> gens) {
  PermGroup g;
  g.degree_ = degree;
  for (const auto &p : gens)
    if (p.degree() != degree)
      throw Error(ErrorKind::Structural, "generator degree mismatch");
  g.generators_ = std::move(gens);

  std::set<Perm> seen{Perm::identity(degree)};
  std::deque<Perm> frontier{Perm::identity(degree)};
  while (!frontier.empty()) {
    Perm p = frontier.front();
    frontier.pop_front();
    for (const auto &s : g.generators_) {
      Perm q = s * p;
      if (seen.insert(q).second)
        frontier.push_back(q);
    }
  }
  g.elements_.assign(seen.begin(), seen.end());
  return g;
}

PermGroup PermGroup::symmetric(int degree) {
  if (degree <= 1)
    return closure(degree, {});
  return closure(degree,
                 {Perm::transposition(degree, 0, 1), Perm::cycle(degree)});
}

PermGroup PermGroup::alternating(int degree) {
  std::vector<Perm> gens;
  // 3-cycles (0 1 i) generate A_k.
  for (int i = 2; i < degree; ++i) {
    std::vector<int> img(static_cast<std::size_t>(degree));
    for (int j = 0; j < degree; ++j)
      img[static_cast<std::size_t>(j)] = j;
    img[0] = 1;
    img[1] = i;
    img[static_cast<std::size_t>(i)] = 0;
    gens.push_back(Perm::from_images(img));
  }
  return closure(degree, std::move(gens));
}

PermGroup normal_closure(const PermGroup &H, const Perm &g) {
  if (!H.contains(g))
    throw Error(ErrorKind::Domain, "normal_closure: element not in group");
  // Conjugating by generators of H until stable yields the normal closure.
  std::vector<Perm> gens{g};
  for (;;) {
    auto N = PermGroup::closure(H.degree(), gens);
    bool grew = false;
    for (const auto &n : N.generators())
      for (const auto &h : H.generators()) {
        Perm c = h * n * h.inverse();
        if (!N.contains(c)) {
          gens.push_back(c);
          grew = true;
        }
      }
    if (!grew)
      return N;
  }
}

bool is_transitive(const PermGroup &H) {
  int k = H.degree();
  if (k <= 1)
    return true;
  std::vector<bool> reached(static_cast<std::size_t>(k), false);
  for (const auto &p : H.elements())
    reached[static_cast<std::size_t>(p(0))] = true;
  return std::all_of(reached.begin(), reached.end(), [](bool b) { return b; });
}

bool is_normal_in(const PermGroup &H, const PermGroup &G) {
  for (const auto &g : G.generators())
    for (const auto &h : H.generators())
      if (!H.contains(g * h * g.inverse()))
        return false;
  return true;
}

bool is_normal_in_sym(const PermGroup &H) {
  return is_normal_in(H, PermGroup::symmetric(H.degree()));
}

int sign(const Perm &p) {
  int s = 1;
  std::vector<bool> seen(static_cast<std::size_t>(p.degree()), false);
  for (int i = 0; i < p.degree(); ++i) {
    if (seen[static_cast<std::size_t>(i)])
      continue;
    int len = 0;
    for (int j = i; !seen[static_cast<std::size_t>(j)]; j = p(j)) {
      seen[static_cast<std::size_t>(j)] = true;
      ++len;
    }
    if (len % 2 == 0)
      s = -s;
  }
  return s;
}

namespace {

// Subgroups of Sym(k) as membership masks over permutation ranks.
class RankedSym {
public:
  explicit RankedSym(int k) : k_(k), n_(factorial(k)) {
    table_.resize(n_ * n_);
    for (std::uint32_t a = 0; a < n_; ++a)
      for (std::uint32_t b = 0; b < n_; ++b)
        table_[a * n_ + b] = (Perm::unrank(k, a) * Perm::unrank(k, b)).rank();
  }

  std::uint32_t size() const { return static_cast<std::uint32_t>(n_); }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return table_[a * n_ + b];
  }

  std::vector<bool> close(const std::vector<std::uint32_t> &gens) const {
    std::vector<bool> mask(n_, false);
    mask[0] = true;
    std::deque<std::uint32_t> frontier{0};
    while (!frontier.empty()) {
      auto p = frontier.front();
      frontier.pop_front();
      for (auto s : gens) {
        auto q = mul(s, p);
        if (!mask[q]) {
          mask[q] = true;
          frontier.push_back(q);
        }
      }
    }
    return mask;
  }

  PermGroup to_group(const std::vector<std::uint32_t> &gens) const {
    std::vector<Perm> perms;
    for (auto r : gens)
      perms.push_back(Perm::unrank(k_, r));
    return PermGroup::closure(k_, std::move(perms));
  }

private:
  int k_;
  std::uint64_t n_;
  std::vector<std::uint32_t> table_;
};

} // namespace

std::vector<PermGroup> all_subgroups_of_symmetric(int degree) {
  if (degree > 6)
    throw Error(ErrorKind::Resource, "subgroup scan limited to degree <= 6");
  RankedSym sym(degree);
  std::map<std::vector<bool>, std::vector<std::uint32_t>> found;
  std::deque<std::vector<bool>> frontier;
  auto trivial = sym.close({});
  found.emplace(trivial, std::vector<std::uint32_t>{});
  frontier.push_back(trivial);
  while (!frontier.empty()) {
    auto mask = frontier.front();
    frontier.pop_front();
    const auto gens = found.at(mask);
    for (std::uint32_t x = 0; x < sym.size(); ++x) {
      if (mask[x])
        continue;
      auto next_gens = gens;
      next_gens.push_back(x);
      auto next = sym.close(next_gens);
      if (found.emplace(next, next_gens).second)
        frontier.push_back(std::move(next));
    }
  }
  std::vector<PermGroup> out;
  for (const auto &[mask, gens] : found)
    out.push_back(sym.to_group(gens));
  std::sort(out.begin(), out.end(), [](const PermGroup &a, const PermGroup &b) {
    return a.order() != b.order() ? a.order() < b.order()
                                  : a.elements() < b.elements();
  });
  return out;
}

std::vector<PermGroup> normal_subgroups_of_symmetric(int degree) {
  auto S = PermGroup::symmetric(degree);
  // One normal closure per conjugacy class.
  std::vector<PermGroup> atoms;
  std::set<Perm> covered;
  for (const auto &p : S.elements()) {
    if (covered.count(p))
      continue;
    for (const auto &q : S.elements())
      covered.insert(q * p * q.inverse());
    atoms.push_back(normal_closure(S, p));
  }
  std::vector<PermGroup> found{PermGroup::closure(degree, {})};
  for (std::size_t i = 0; i < found.size(); ++i)
    for (const auto &atom : atoms) {
      auto gens = found[i].generators();
      gens.insert(gens.end(), atom.generators().begin(),
                  atom.generators().end());
      auto join = PermGroup::closure(degree, std::move(gens));
      if (std::find(found.begin(), found.end(), join) == found.end())
        found.push_back(std::move(join));
    }
  std::sort(found.begin(), found.end(),
            [](const PermGroup &a, const PermGroup &b) {
              return a.order() < b.order();
            });
  return found;
}

} // namespace rinf
