#pragma once

// Finite-depth automorphisms of spherically symmetric rooted trees.
//
// A Portrait of depth d stores one permutation label per vertex of levels
// 0..d-1, in breadth-first (level, then lexicographic) order. Level-m vertices
// are indexed 0..l(m)-1 lexicographically by their child-index path.
//
// Action convention: g(c_1 c_2 ... c_m) = s_0(c_1) s_{c_1}(c_2) ... where s_u
// is the label at the *source* vertex u. Composition is left action,
// (g*h)(v) = g(h(v)), so label_{g*h}(v) = label_g(h(v)) * label_h(v).

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rinf {

/// Branching indices k_1, k_2, ... given as a finite prefix followed by a
/// constant tail. branching(m) is the number of children of a level-m vertex.
class TreeSignature {
public:
  TreeSignature() : TreeSignature({}, 2) {}
  TreeSignature(std::vector<int> prefix, int tail);

  static TreeSignature constant(int k) { return TreeSignature({}, k); }
  static TreeSignature binary() { return constant(2); }
  static TreeSignature ternary() { return constant(3); }

  /// Accepts "binary", "ternary", or a comma list "k1,k2,...,kt" whose last
  /// entry repeats forever.
  static TreeSignature parse(std::string_view text);

  int branching(int level) const;
  /// l(m): number of level-m vertices; throws Resource on overflow.
  std::uint64_t level_size(int level) const;
  /// Number of internal vertices on levels 0..depth-1.
  std::uint64_t internal_count(int depth) const;

  TreeSignature shifted(int levels = 1) const;
  bool is_constant() const { return prefix_.empty(); }
  bool is_binary() const { return prefix_.empty() && tail_ == 2; }
  int max_branching(int depth) const;

  std::string to_string() const;

  bool operator==(const TreeSignature &) const = default;

private:
  std::vector<int> prefix_;
  int tail_;
};

/// Child-index path from the root; the empty path is the root.
struct Vertex {
  std::vector<int> path;

  int level() const { return static_cast<int>(path.size()); }
  Vertex child(int c) const;
  std::string to_string() const;

  bool operator==(const Vertex &) const = default;
  auto operator<=>(const Vertex &) const = default;
};

std::uint64_t vertex_index(const TreeSignature &sig, const Vertex &v);
Vertex vertex_at(const TreeSignature &sig, int level, std::uint64_t index);

/// Permutation of {0..k-1}, k <= kMaxDegree, stored as an image array.
class Perm {
public:
  static constexpr int kMaxDegree = 8;

  Perm() = default;
  explicit Perm(int degree);

  static Perm identity(int degree) { return Perm(degree); }
  /// The binary "switch".
  static Perm switch2() { return transposition(2, 0, 1); }
  static Perm transposition(int degree, int i, int j);
  /// i -> i+1 mod k.
  static Perm cycle(int degree);
  static Perm from_images(std::span<const int> images);

  int degree() const { return degree_; }
  int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }

  /// Product applying `rhs` first: (p * q)(i) = p(q(i)).
  Perm operator*(const Perm &rhs) const;
  Perm inverse() const;
  Perm pow(int e) const;

  bool is_identity() const;
  int fixed_points() const;
  std::vector<int> images() const;

  /// Lexicographic rank in Sym(k), 0 = identity.
  std::uint32_t rank() const;
  static Perm unrank(int degree, std::uint32_t rank);

  std::string to_string() const;

  bool operator==(const Perm &) const = default;
  auto operator<=>(const Perm &) const = default;

private:
  std::uint8_t degree_ = 0;
  std::array<std::uint8_t, kMaxDegree> images_{};
};

std::uint64_t factorial(int k);

class Portrait {
public:
  Portrait() = default;

  static Portrait identity(const TreeSignature &sig, int depth);
  /// Labels in breadth-first order; validated for count and arity.
  static Portrait from_labels(const TreeSignature &sig, int depth,
                              std::vector<Perm> labels);
  /// Root label followed by one depth-(d-1) child portrait per child, each
  /// over sig.shifted().
  static Portrait assemble(const TreeSignature &sig, const Perm &root,
                           std::span<const Portrait> children);

  const TreeSignature &signature() const { return sig_; }
  int depth() const { return depth_; }

  const Perm &label(int level, std::uint64_t index) const;
  const Perm &label(const Vertex &v) const;
  std::span<const Perm> level_labels(int level) const;
  const std::vector<Perm> &labels() const { return labels_; }

  /// Restriction to the subtree rooted at v, of depth depth() - level(v).
  Portrait section(const Vertex &v) const;

  /// Canonical packed encoding (label ranks, breadth-first, bit-packed).
  std::string encode() const;
  static Portrait decode(const TreeSignature &sig, int depth,
                         std::string_view bytes);
  static std::size_t encoded_size(const TreeSignature &sig, int depth);

  std::size_t hash() const;

  bool operator==(const Portrait &other) const {
    return depth_ == other.depth_ && labels_ == other.labels_ &&
           sig_ == other.sig_;
  }

private:
  friend Portrait compose(const Portrait &, const Portrait &);
  friend Portrait inverse(const Portrait &);

  std::uint64_t offset(int level) const { return offsets_[level]; }
  void init_offsets();

  TreeSignature sig_;
  int depth_ = 0;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<Perm> labels_;
};

struct PortraitHash {
  std::size_t operator()(const Portrait &p) const { return p.hash(); }
};

Portrait compose(const Portrait &g, const Portrait &h);
Portrait inverse(const Portrait &g);
/// h g h^{-1}.
Portrait conjugate(const Portrait &h, const Portrait &g);
Portrait power(const Portrait &g, int e);
/// Restriction to levels 0..depth-1; depth must not exceed g.depth().
Portrait truncate(const Portrait &g, int depth);

Vertex apply(const Portrait &g, const Vertex &v);
/// Image index of every level-`level` vertex.
std::vector<std::uint64_t> level_action(const Portrait &g, int level);

/// Largest n <= depth with all labels on levels < n trivial.
int stabilizer_depth(const Portrait &g);
std::uint64_t fixed_count(const Portrait &g, int level);
/// Nontrivial labels attached to level-m vertices. For binary trees this is
/// the number of switches acting on level m+1.
std::uint64_t nontrivial_label_count(const Portrait &g, int level);
/// g in K_n: trivial on levels <= n and switching every sibling pair of
/// level n+1. Binary trees only.
bool is_in_K(const Portrait &g, int n);
/// Sorted cycle lengths of the action on level `level`.
std::vector<std::uint64_t> cycle_type(const Portrait &g, int level);

} // namespace rinf
