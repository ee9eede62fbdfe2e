#pragma once

// Level quotients G/St_d realized as sets of depth-d portraits, induced
// automorphisms on them, and exact twisted conjugacy class enumeration.

#include "rinf/automorphism.hpp"
#include "rinf/evaluator.hpp"
#include "rinf/tree.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rinf {

using ElementId = std::uint32_t;

class QuotientGroup {
public:
  static constexpr std::uint64_t kDefaultCap = std::uint64_t{1} << 22;

  /// Breadth-first closure of the identity under left multiplication by the
  /// generators and their inverses, in declaration order. Throws Resource
  /// once more than `cap` elements are found.
  static QuotientGroup build(const Evaluator &ev, int depth,
                             std::uint64_t cap = kDefaultCap);

  int depth() const { return depth_; }
  const TreeSignature &signature() const { return sig_; }
  std::size_t order() const { return parent_.size(); }
  std::uint64_t presentation_hash() const { return pres_hash_; }

  /// Move letters used by the BFS: each generator, then each inverse that
  /// differs from its generator at this depth.
  const std::vector<Word> &moves() const { return moves_; }
  std::size_t move_count() const { return moves_.size(); }
  ElementId move_element(std::size_t j) const { return move_ids_[j]; }

  std::optional<ElementId> find(const Portrait &g) const;
  /// As find, but throws Normalization if g is not in the quotient.
  ElementId id_of(const Portrait &g) const;
  Portrait element(ElementId id) const;
  std::string_view code(ElementId id) const;

  ElementId identity() const { return 0; }
  ElementId multiply(ElementId a, ElementId b) const;
  ElementId inverse(ElementId a) const;
  /// moves()[j] * q, from the table filled during the BFS.
  ElementId left_multiply(std::size_t j, ElementId q) const {
    return lmul_[static_cast<std::size_t>(q) * moves_.size() + j];
  }

  /// A shortest word over moves() evaluating to the element (BFS tree path).
  Word rep_word(ElementId id) const;
  std::size_t rep_length(ElementId id) const;
  int stabilizer_depth(ElementId id) const;

  /// JSON cache file. load() returns nullopt when the file is absent or was
  /// written for another presentation or depth.
  void save(const std::filesystem::path &file) const;
  static std::optional<QuotientGroup> load(const std::filesystem::path &file,
                                           const Evaluator &ev, int depth);
  static std::string cache_file_name(const Evaluator &ev, int depth);
  /// Uses the cache directory when given, building and saving on a miss.
  static QuotientGroup build_cached(const Evaluator &ev, int depth,
                                    std::uint64_t cap,
                                    const std::optional<std::filesystem::path> &dir);

private:
  QuotientGroup() = default;

  ElementId insert(std::string_view code, bool &inserted);
  void rehash(std::size_t capacity);
  std::uint64_t slot_hash(std::string_view code) const;

  int depth_ = 0;
  TreeSignature sig_;
  std::uint64_t pres_hash_ = 0;
  std::size_t stride_ = 0;
  std::vector<Word> moves_;
  std::vector<ElementId> move_ids_;

  std::string codes_;
  std::vector<ElementId> parent_;
  std::vector<std::uint16_t> via_;
  std::vector<ElementId> lmul_;
  std::vector<ElementId> slots_;
};

/// Image map of the truncation G/St_{d+k} -> G/St_d, indexed by fine id.
std::vector<ElementId> truncation_map(const QuotientGroup &fine,
                                      const QuotientGroup &coarse);

class InducedAutomorphism {
public:
  /// ConjugationBy: image(q) = t q t^-1, which must stay in the quotient
  /// (Normalization error otherwise). GeneratorImages: images spread along
  /// the BFS tree, then multiplicativity is checked on every (move, element)
  /// pair (NotWellDefined error otherwise).
  static InducedAutomorphism induce(const QuotientGroup &q, const Evaluator &ev,
                                    const AutomorphismSpec &spec);
  /// Wraps an explicit image table; checks that it is a bijection.
  static InducedAutomorphism from_table(const QuotientGroup &q,
                                        std::vector<ElementId> table,
                                        std::string description);

  ElementId operator()(ElementId q) const { return table_[q]; }
  const std::vector<ElementId> &table() const { return table_; }
  const std::string &description() const { return description_; }
  /// Human-readable account of the checks performed while inducing.
  const std::string &check_log() const { return check_log_; }
  bool is_identity() const;

private:
  std::vector<ElementId> table_;
  std::string description_;
  std::string check_log_;
};

/// q -> g phi(q) g^-1 as a table.
InducedAutomorphism twist(const QuotientGroup &q, const InducedAutomorphism &phi,
                          ElementId g);

/// Exhaustive bijection and multiplicativity check of an image table.
bool is_automorphism(const QuotientGroup &q, const InducedAutomorphism &phi);

struct TwistedPartition {
  std::vector<std::uint32_t> class_of;      // per element
  std::vector<ElementId> representative;    // smallest id in each class
  std::size_t count() const { return representative.size(); }
  std::vector<ElementId> members(std::uint32_t cls) const;
  bool operator==(const TwistedPartition &) const = default;
};

/// Union-find over the moves q -> s q phi(s)^-1. Classes are numbered in
/// increasing order of their smallest element.
TwistedPartition twisted_classes(const QuotientGroup &q,
                                 const InducedAutomorphism &phi);
/// Independent oracle: orbits of (h, q) -> h q phi(h)^-1 over every h.
TwistedPartition twisted_classes_bruteforce(const QuotientGroup &q,
                                            const InducedAutomorphism &phi);

/// True iff some member of the class has stabilizer depth >= n.
bool class_meets_stabilizer(const QuotientGroup &q, const TwistedPartition &part,
                            std::uint32_t cls, int n);

/// Checks that right multiplication by k maps every phi-class onto a class
/// of tau_{k^-1} o phi, and that both partitions have the same size.
bool verify_shift_lemma(const QuotientGroup &q, const InducedAutomorphism &phi,
                        ElementId k);

struct LevelBound {
  int depth = 0;
  std::size_t order = 0;
  std::size_t classes = 0;
  std::string check_log;
};

/// R(phi_d) for d = 1..d_max.
std::vector<LevelBound>
reidemeister_lower_bounds(const Evaluator &ev, const AutomorphismSpec &spec,
                          int d_max, std::uint64_t cap = QuotientGroup::kDefaultCap,
                          const std::optional<std::filesystem::path> &cache = {});

} // namespace rinf
