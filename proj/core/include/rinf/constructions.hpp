#pragma once

// Constructive procedures behind the certificates: K_n elements, the greedy
// fixed-point killer, path stabilizers, local normality reports, weak branch
// indices, and the three certificate builders.
//
// Every search is a bounded breadth-first word enumeration (see search.hpp)
// and fails with a NotFound error naming the level it could not reach.

#include "rinf/automorphism.hpp"
#include "rinf/certificate.hpp"
#include "rinf/evaluator.hpp"
#include "rinf/perm_group.hpp"
#include "rinf/search.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace rinf {

// --- K_n ------------------------------------------------------------------

struct KConstruction {
  Word word;
  Word seed;                     // St_n element with a nonzero level-n label
  std::vector<std::string> log;  // one line per merging step
};

/// An element of K_n: in St_n and switching every sibling pair of level
/// n+1. Starts from any St_n element with a switch on level n+1 and merges
/// it with its conjugate by K_{n-s} for s = 1..n, which makes the switch
/// pattern constant on blocks of 2^s. Binary trees only.
KConstruction construct_K_detailed(const Evaluator &ev, int n,
                                   const SearchBudget &budget = {});
Word construct_K(const Evaluator &ev, int n, const SearchBudget &budget = {});

/// Number of level-m switches of t differs from l(m)/2. Binary only.
bool switch_condition(const Portrait &t, int m);

// --- strong saturation and the greedy construction ---------------------------

struct StrongSaturationWitnesses {
  std::map<int, Word> words;     // level i -> g_i in St_i, fixed-point free on level i+1
  std::vector<int> gaps;         // levels without a witness
  std::vector<std::string> log;

  bool has(int level) const { return words.count(level) != 0; }
  const Word &at(int level) const;
};

/// Witnesses for levels 0..L. Binary trees use K_i elements. Otherwise a
/// search at depth i+1 is tried first, then the diagonal (g_{i-1}, ..., g_{i-1})
/// of the previous witness. Every witness is checked on its portrait.
StrongSaturationWitnesses find_strong_witnesses(const Evaluator &ev, int L,
                                                const SearchBudget &budget = {});

/// True iff w lies in St_i and fixes no vertex of level i+1.
bool is_strong_witness(const Evaluator &ev, const Word &w, int i);

struct AssumptionLevel {
  int level = 0;
  std::uint64_t fixed = 0;
  std::uint64_t size = 0;
  bool holds = false;
};

struct AssumptionReport {
  double s = 0;
  std::vector<AssumptionLevel> levels;  // j = 1..D
  bool holds = true;
};

/// fixed_count(t, j) >= s * l(j) for j = 1..D. Throws Precondition unless
/// 0 < s < 1 and D <= depth(t).
AssumptionReport check_assumption(const Portrait &t, double s, int D);

/// Minimal r with (1/2)^r < s.
int greedy_steps(double s);

struct GreedyStep {
  int level = 0;                 // witness level m+i
  int epsilon = 0;
  std::uint64_t candidates = 0;  // vertices of level m+i+1 below surviving fixed points
  std::uint64_t survivors = 0;   // of those, fixed after this step
  std::uint64_t bound = 0;       // floor(l(m+i+1) / 2^(i+1))
};

struct GreedyTrace {
  int m = 0;
  int r = 0;
  double s = 0;
  std::vector<GreedyStep> steps;
  std::uint64_t final_fixed = 0;  // fixed_count(ghat*t, m+r)
  std::uint64_t final_size = 0;   // l(m+r)

  bool halving_holds() const;
};

struct GhatResult {
  Word word;
  GreedyTrace trace;
};

using WitnessSource = std::function<Word(int level)>;

/// The greedy choice alone: at step i, multiply by g_{m+i} iff that lowers
/// the number of fixed vertices of level m+i+1. No assumption check.
GhatResult greedy_ghat(const Evaluator &ev, const Portrait &t, int m, double s,
                       const WitnessSource &witness);
/// greedy_ghat after checking Assumption-style fixed point density of t on
/// levels 1..m+r; refuses with Precondition when it fails.
GhatResult construct_ghat(const Evaluator &ev, const Portrait &t, int m,
                          double s, const StrongSaturationWitnesses &w);
GhatResult construct_ghat(const Evaluator &ev, const Portrait &t, int m,
                          double s, const WitnessSource &witness);

/// Lazily computed, memoized witnesses as in find_strong_witnesses.
WitnessSource witness_source(const Evaluator &ev, const SearchBudget &budget = {});

// --- paths and local normality ----------------------------------------------

struct AlphaResult {
  Word word;                     // beta_{n-1} * ... * beta_0
  std::vector<Word> betas;       // beta_i in St_i
};

/// alpha with alpha*t fixing v_1..v_n, where path[i] is the level-(i+1)
/// vertex v_{i+1}, each a child of the previous.
AlphaResult construct_alpha(const Evaluator &ev, const Portrait &t,
                            const std::vector<Vertex> &path,
                            const SearchBudget &budget = {});

/// v_1..v_n with v_i a child of v_{i-1}, choosing at each level the first
/// child fixed by t when the parent is fixed, else child 0.
std::vector<Vertex> default_path(const Portrait &t, int n);

struct LocalNormalityReport {
  Vertex v;
  int max_length = 0;
  std::size_t elements_scanned = 0;
  int degree = 0;
  std::vector<Perm> generators;  // labels at v of St_level(v) elements found
  PermGroup lower;               // closure of generators
  PermGroup upper;               // closure of all generator labels (contains H(v))
  bool normal = false;           // lower normal in Sym(degree)
  bool transitive = false;
  bool exact = false;            // lower == upper, so H(v) is determined
  bool degree_four = false;      // excluded branching index

  nlohmann::json to_json() const;
};

LocalNormalityReport check_local_normality(const Evaluator &ev, const Vertex &v,
                                           int max_length,
                                           std::size_t max_frontier = 100000);

struct RigidWitness {
  Vertex v;
  Word word;
  int verified_depth = 0;
};

/// Rigid witnesses for every level-m vertex of a built-in presentation, as
/// section tuples around a level-1 witness. Throws NotFound otherwise.
std::vector<RigidWitness> builtin_rigid_witnesses(const Evaluator &ev, int m);

/// Relative level of the first nontrivial action inside T_v, after checking
/// the witness acts trivially off T_v, to depth level(v)+max_relative.
/// Throws NotFound if the witness is not rigid at v within that depth.
int rigid_relative_level(const Evaluator &ev, const RigidWitness &w,
                         int max_relative = 4);

/// Max of the relative levels over witnesses covering every level-m vertex;
/// an upper bound for WBI(m).
int compute_wbi(const Evaluator &ev, int m, const std::vector<RigidWitness> &ws,
                int max_relative = 4);

struct StepResult {
  Word word;
  int n = 0;
  std::vector<std::string> log;
};

/// ghat in St_m whose twisted class avoids St_n, n <= m + wbi minimal, by
/// the cycle-type criterion. Requires t to fix a level-m vertex. The log
/// records the first-stage element g' that makes g't fixed-point free below
/// the fixed vertex, when one exists within budget.
StepResult locally_normal_step(const Evaluator &ev, const Portrait &t, int m,
                               int wbi, const SearchBudget &budget = {});

// --- certificates -------------------------------------------------------------

struct CertifyOptions {
  SearchBudget budget;           // element searches
  SearchBudget twist_budget{6, 2000};
  int max_level = 0;             // binary: last avoidance level; 0 means k+1
  double s = 0.25;               // strongly saturated
};

Certificate binary_certificate(const Evaluator &ev, const AutomorphismSpec &spec,
                               int k, const CertifyOptions &opts = {});
Certificate strongly_saturated_certificate(const Evaluator &ev,
                                           const AutomorphismSpec &spec, int k,
                                           const CertifyOptions &opts = {});
Certificate locally_normal_certificate(const Evaluator &ev,
                                       const AutomorphismSpec &spec, int n,
                                       const CertifyOptions &opts = {});

} // namespace rinf
