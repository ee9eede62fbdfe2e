#pragma once

#include "rinf/tree.hpp"

#include <vector>

namespace rinf {

/// Subgroup of Sym(k), materialized by closure. Degrees here are tiny
/// (k <= 8), so the element set is stored explicitly and kept sorted.
class PermGroup {
public:
  /// Closure of `gens` under products. An empty list gives the trivial group.
  static PermGroup closure(int degree, std::vector<Perm> gens);
  static PermGroup symmetric(int degree);
  static PermGroup alternating(int degree);

  int degree() const { return degree_; }
  const std::vector<Perm> &generators() const { return generators_; }
  const std::vector<Perm> &elements() const { return elements_; }
  std::size_t order() const { return elements_.size(); }
  bool contains(const Perm &p) const;

  bool operator==(const PermGroup &other) const {
    return degree_ == other.degree_ && elements_ == other.elements_;
  }

private:
  int degree_ = 0;
  std::vector<Perm> generators_;
  std::vector<Perm> elements_;
};

/// Smallest subgroup of H containing g and closed under conjugation by H.
PermGroup normal_closure(const PermGroup &H, const Perm &g);
bool is_transitive(const PermGroup &H);
/// Normality in Sym(k), checked on generators of H against the standard
/// generators (0 1) and (0 1 ... k-1) of Sym(k).
bool is_normal_in_sym(const PermGroup &H);
bool is_normal_in(const PermGroup &H, const PermGroup &G);

/// Every subgroup of Sym(k), by adjoining one element at a time and closing.
/// Exhaustive; intended for k <= 5.
std::vector<PermGroup> all_subgroups_of_symmetric(int degree);
/// Every normal subgroup of Sym(k), as joins of normal closures of
/// conjugacy-class representatives. Exhaustive; fine through k = 7.
std::vector<PermGroup> normal_subgroups_of_symmetric(int degree);

/// Sign of a permutation, +1 or -1.
int sign(const Perm &p);

} // namespace rinf
