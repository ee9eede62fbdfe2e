#pragma once

// Certificates: finite witnesses that k twisted conjugacy classes of an
// automorphism are pairwise distinct, and their independent verifier.
//
// Entry i claims: word_i lies in St_{m_i}, and the phi'-class of word_i does
// not meet St_{n_i}, where phi' is the spec pre-composed with conjugation by
// the twist word. Consecutive entries satisfy m_{i+1} >= n_i, so the classes
// are pairwise distinct and R(phi) >= k.
//
// Separation criteria, each a complete argument checked on portraits:
//   switch-condition  binary; word in K_m, t' in St_m with a number of
//                     level-m switches other than l(m)/2; n = m+1.
//   odd-switches      binary; word in St_m with an odd number of switches at
//                     label level m+1. The sign of the action on level m+2 is
//                     a homomorphism invariant under twisting; n = m+2.
//   cycle-type        word in St_m and word*t' has a different cycle type
//                     from t' on level n. Any h*word*phi'(h)^-1 in St_n would
//                     conjugate word*t' to t' on level n.

#include "rinf/evaluator.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rinf {

enum class CertificateKind { Binary, StronglySaturated, LocallyNormal };

std::string_view to_string(CertificateKind kind);
CertificateKind parse_certificate_kind(std::string_view text);

struct CertificateEntry {
  Word word;
  int m = 0;
  int n = 0;
  std::string criterion;
  nlohmann::json invariants = nlohmann::json::object();
};

struct Certificate {
  CertificateKind kind = CertificateKind::Binary;
  std::string presentation_name;
  std::string presentation_text;
  std::uint64_t presentation_hash = 0;
  std::string spec = "identity";
  Word twist;
  std::vector<CertificateEntry> entries;
  nlohmann::json parameters = nlohmann::json::object();

  std::size_t bound() const { return entries.size(); }
  /// Deepest avoidance level; the quotient depth needed for full checking.
  int required_depth() const;

  nlohmann::json to_json() const;
  static Certificate from_json(const nlohmann::json &j);
  void save(const std::filesystem::path &file) const;
  static Certificate load(const std::filesystem::path &file);
};

/// Portrait measurements backing an entry. `conjugator` is t' evaluated to
/// depth >= n. Deterministic; the verifier compares these with the stored
/// invariants.
nlohmann::json measure_entry(const Evaluator &ev, const Portrait &conjugator,
                             const CertificateEntry &entry);
/// Whether the entry's criterion holds; on failure `why` says which part.
bool criterion_holds(const Evaluator &ev, const Portrait &conjugator,
                     const CertificateEntry &entry, std::string *why = nullptr);

enum class VerdictStatus { Sound, Unsound, PartiallyVerified };
std::string_view to_string(VerdictStatus status);

struct Verdict {
  VerdictStatus status = VerdictStatus::Sound;
  std::string reason;
  int depth = 0;
  std::vector<std::string> log;

  nlohmann::json to_json() const;
};

struct VerifyOptions {
  int depth = 0; // 0: the certificate's required depth
  std::uint64_t cap = std::uint64_t{1} << 22;
  std::optional<std::filesystem::path> cache;
};

/// Recomputes every invariant from the stored words and re-checks the
/// separation criteria, then checks in G/St_d that each entry's word lies in
/// St_{m_i}, that its twisted class avoids St_{n_i} (entries with n_i <= d),
/// and that the classes are pairwise distinct.
Verdict verify_certificate(const Certificate &cert, const VerifyOptions &opts);

} // namespace rinf
