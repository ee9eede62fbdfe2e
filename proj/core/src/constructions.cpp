#include "rinf/constructions.hpp"

#include "rinf/error.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>

namespace rinf {

namespace {

std::string budget_text(const SearchBudget &b) {
  return "length <= " + std::to_string(b.max_length) + ", frontier <= " +
         std::to_string(b.max_frontier);
}

void require_binary(const TreeSignature &sig, const char *what) {
  if (!sig.is_binary())
    throw Error(ErrorKind::Unsupported, std::string(what) + " needs a binary tree");
}

// Level-n labels as a 0/1 vector. Binary trees.
std::vector<int> switch_vector(const Portrait &p, int n) {
  std::vector<int> out;
  for (const auto &l : p.level_labels(n))
    out.push_back(l.is_identity() ? 0 : 1);
  return out;
}

bool constant_on_blocks(const std::vector<int> &v, std::size_t block) {
  for (std::size_t b = 0; b < v.size(); b += block)
    for (std::size_t i = b + 1; i < b + block; ++i)
      if (v[i] != v[b])
        return false;
  return true;
}

KConstruction construct_K_cached(const Evaluator &ev, int n,
                                 const SearchBudget &budget,
                                 std::map<int, Word> &cache) {
  KConstruction out;
  auto seed = find_element(ev, n + 1, budget, [n](const Portrait &p) {
    return stabilizer_depth(p) >= n && nontrivial_label_count(p, n) > 0;
  });
  if (!seed)
    throw Error(ErrorKind::NotFound,
                "K_" + std::to_string(n) + ": no element of St_" + std::to_string(n) +
                    " switching a pair on level " + std::to_string(n + 1) + " (" +
                    budget_text(budget) + ")");
  out.seed = seed->word;
  out.log.push_back("seed " + seed->word.to_string());
  Word e = seed->word;
  for (int s = 1; s <= n; ++s) {
    auto v = switch_vector(ev.eval(e, n + 1), n);
    std::size_t block = std::size_t{1} << s;
    if (constant_on_blocks(v, block)) {
      out.log.push_back("blocks of " + std::to_string(block) + ": already constant");
      continue;
    }
    int j = n - s;
    auto it = cache.find(j);
    if (it == cache.end()) {
      auto sub = construct_K_cached(ev, j, budget, cache);
      it = cache.emplace(j, sub.word).first;
    }
    e = e * conjugate_word(it->second, e);
    auto merged = switch_vector(ev.eval(e, n + 1), n);
    if (!constant_on_blocks(merged, block))
      throw Error(ErrorKind::Structural, "K_" + std::to_string(n) +
                                             ": merging with K_" + std::to_string(j) +
                                             " left a mixed block");
    out.log.push_back("blocks of " + std::to_string(block) + ": merged with conjugate by K_" +
                      std::to_string(j));
  }
  if (!is_in_K(ev.eval(e, n + 1), n))
    throw Error(ErrorKind::Structural, "K_" + std::to_string(n) + ": result not in K_n");
  out.word = e;
  cache[n] = e;
  return out;
}

std::optional<Word> search_strong_witness(const Evaluator &ev, int i,
                                          const SearchBudget &budget,
                                          const std::map<int, Word> &known,
                                          std::string &note) {
  const auto &sig = ev.signature();
  if (sig.is_binary()) {
    try {
      auto w = construct_K(ev, i, budget);
      note = "K_" + std::to_string(i) + " element";
      return w;
    } catch (const Error &e) {
      if (e.kind() != ErrorKind::NotFound)
        throw;
    }
  } else {
    auto found = find_element(ev, i + 1, budget, [i](const Portrait &p) {
      return stabilizer_depth(p) >= i && fixed_count(p, i + 1) == 0;
    });
    if (found) {
      note = "search";
      return found->word;
    }
  }
  auto prev = known.find(i - 1);
  if (prev != known.end() && sig.is_constant()) {
    auto w = diagonal_word(prev->second, sig.branching(0), 1);
    if (is_strong_witness(ev, w, i)) {
      note = "diagonal of level " + std::to_string(i - 1);
      return w;
    }
  }
  return std::nullopt;
}

} // namespace

// --- K_n ------------------------------------------------------------------

KConstruction construct_K_detailed(const Evaluator &ev, int n,
                                   const SearchBudget &budget) {
  require_binary(ev.signature(), "construct_K");
  if (n < 0)
    throw Error(ErrorKind::Precondition, "construct_K: negative level");
  std::map<int, Word> cache;
  return construct_K_cached(ev, n, budget, cache);
}

Word construct_K(const Evaluator &ev, int n, const SearchBudget &budget) {
  return construct_K_detailed(ev, n, budget).word;
}

bool switch_condition(const Portrait &t, int m) {
  require_binary(t.signature(), "switch_condition");
  if (m < 0 || m >= t.depth())
    throw Error(ErrorKind::OutOfDepth, "switch_condition needs 0 <= m < depth");
  return 2 * nontrivial_label_count(t, m) != t.signature().level_size(m);
}

// --- strong saturation ------------------------------------------------------

const Word &StrongSaturationWitnesses::at(int level) const {
  auto it = words.find(level);
  if (it == words.end())
    throw Error(ErrorKind::NotFound,
                "no strong saturation witness for level " + std::to_string(level));
  return it->second;
}

bool is_strong_witness(const Evaluator &ev, const Word &w, int i) {
  auto p = ev.eval(w, i + 1);
  return stabilizer_depth(p) >= i && fixed_count(p, i + 1) == 0;
}

StrongSaturationWitnesses find_strong_witnesses(const Evaluator &ev, int L,
                                                const SearchBudget &budget) {
  StrongSaturationWitnesses out;
  for (int i = 0; i <= L; ++i) {
    std::string note;
    auto w = search_strong_witness(ev, i, budget, out.words, note);
    if (w) {
      out.words.emplace(i, *w);
      out.log.push_back("level " + std::to_string(i) + ": " + w->to_string() +
                        " (" + note + ")");
    } else {
      out.gaps.push_back(i);
      out.log.push_back("level " + std::to_string(i) + ": none (" +
                        budget_text(budget) + ")");
    }
  }
  return out;
}

WitnessSource witness_source(const Evaluator &ev, const SearchBudget &budget) {
  auto cache = std::make_shared<std::map<int, Word>>();
  auto self = std::make_shared<std::function<Word(int)>>();
  *self = [&ev, budget, cache, weak = std::weak_ptr(self)](int level) -> Word {
    if (auto it = cache->find(level); it != cache->end())
      return it->second;
    if (level > 0 && !cache->count(level - 1) && !ev.signature().is_binary()) {
      // Make the previous level available for the diagonal fallback.
      try {
        (*weak.lock())(level - 1);
      } catch (const Error &e) {
        if (e.kind() != ErrorKind::NotFound)
          throw;
      }
    }
    std::string note;
    auto w = search_strong_witness(ev, level, budget, *cache, note);
    if (!w)
      throw Error(ErrorKind::NotFound, "no strong saturation witness for level " +
                                           std::to_string(level) + " (" +
                                           budget_text(budget) + ")");
    cache->emplace(level, *w);
    return *w;
  };
  // The returned wrapper keeps the shared state alive.
  return [self](int level) { return (*self)(level); };
}

AssumptionReport check_assumption(const Portrait &t, double s, int D) {
  if (!(s > 0 && s < 1))
    throw Error(ErrorKind::Precondition, "check_assumption: s must lie in (0, 1)");
  if (D < 1 || D > t.depth())
    throw Error(ErrorKind::Precondition,
                "check_assumption: need 1 <= D <= depth of the portrait");
  AssumptionReport r;
  r.s = s;
  for (int j = 1; j <= D; ++j) {
    AssumptionLevel a;
    a.level = j;
    a.fixed = fixed_count(t, j);
    a.size = t.signature().level_size(j);
    a.holds = static_cast<double>(a.fixed) >= s * static_cast<double>(a.size);
    r.holds = r.holds && a.holds;
    r.levels.push_back(a);
  }
  return r;
}

int greedy_steps(double s) {
  if (!(s > 0 && s < 1))
    throw Error(ErrorKind::Precondition, "greedy_steps: s must lie in (0, 1)");
  int r = 0;
  for (double p = 1; !(p < s); p /= 2)
    ++r;
  return r;
}

bool GreedyTrace::halving_holds() const {
  for (const auto &st : steps)
    if (st.survivors > st.bound)
      return false;
  return steps.empty() || final_fixed == steps.back().survivors;
}

GhatResult greedy_ghat(const Evaluator &ev, const Portrait &t, int m, double s,
                       const WitnessSource &witness) {
  if (m < 0)
    throw Error(ErrorKind::Precondition, "construct_ghat: negative level");
  const int r = greedy_steps(s);
  const int D = m + r;
  if (t.depth() < D)
    throw Error(ErrorKind::OutOfDepth, "construct_ghat: conjugator needs depth " +
                                           std::to_string(D));
  const auto &sig = t.signature();
  GhatResult out;
  out.trace.m = m;
  out.trace.r = r;
  out.trace.s = s;
  Portrait current = truncate(t, D);

  // Parents of the current candidates: fixed vertices of level m+i.
  std::vector<std::uint64_t> parents(sig.level_size(m));
  for (std::uint64_t u = 0; u < parents.size(); ++u)
    parents[u] = u;

  for (int i = 0; i < r; ++i) {
    const int level = m + i + 1;
    const std::uint64_t k = static_cast<std::uint64_t>(sig.branching(m + i));
    std::vector<std::uint64_t> cands;
    for (auto p : parents)
      for (std::uint64_t c = 0; c < k; ++c)
        cands.push_back(p * k + c);
    GreedyStep st;
    st.level = m + i;
    st.candidates = cands.size();
    st.bound = sig.level_size(level) >> (i + 1);

    auto fixed_in = [&](const Portrait &g) {
      auto img = level_action(g, level);
      std::vector<std::uint64_t> f;
      for (auto u : cands)
        if (img[u] == u)
          f.push_back(u);
      return f;
    };
    auto f0 = fixed_in(current);
    if (!f0.empty()) {
      Word w = witness(m + i);
      auto alt = compose(ev.eval(w, D), current);
      auto f1 = fixed_in(alt);
      if (f1.size() < f0.size()) {
        st.epsilon = 1;
        current = std::move(alt);
        out.word = w * out.word;
        f0 = std::move(f1);
      }
    }
    st.survivors = f0.size();
    parents = std::move(f0);
    out.trace.steps.push_back(st);
  }
  out.trace.final_fixed = fixed_count(current, D);
  out.trace.final_size = sig.level_size(D);
  return out;
}

GhatResult construct_ghat(const Evaluator &ev, const Portrait &t, int m,
                          double s, const WitnessSource &witness) {
  const int r = greedy_steps(s);
  auto report = check_assumption(t, s, m + r);
  for (const auto &a : report.levels)
    if (!a.holds)
      throw Error(ErrorKind::Precondition,
                  "fixed point density of t on level " + std::to_string(a.level) + " is " +
                      std::to_string(a.fixed) + "/" + std::to_string(a.size) +
                      ", below s");
  auto out = greedy_ghat(ev, t, m, s, witness);
  if (!(static_cast<double>(out.trace.final_fixed) <
        s * static_cast<double>(out.trace.final_size)))
    throw Error(ErrorKind::Structural, "greedy construction left too many fixed points");
  return out;
}

GhatResult construct_ghat(const Evaluator &ev, const Portrait &t, int m,
                          double s, const StrongSaturationWitnesses &w) {
  return construct_ghat(ev, t, m, s, [&w](int level) { return w.at(level); });
}

// --- paths and local normality ------------------------------------------------

AlphaResult construct_alpha(const Evaluator &ev, const Portrait &t,
                            const std::vector<Vertex> &path,
                            const SearchBudget &budget) {
  if (path.empty())
    throw Error(ErrorKind::Precondition, "construct_alpha: empty path");
  for (std::size_t i = 0; i < path.size(); ++i) {
    const auto &v = path[i];
    if (v.level() != static_cast<int>(i) + 1 ||
        (i > 0 && !std::equal(path[i - 1].path.begin(), path[i - 1].path.end(),
                              v.path.begin())))
      throw Error(ErrorKind::Precondition,
                  "construct_alpha: path entry " + v.to_string() +
                      " does not continue the previous vertex");
  }
  const int n = static_cast<int>(path.size());
  if (t.depth() < n)
    throw Error(ErrorKind::OutOfDepth, "construct_alpha: conjugator too shallow");
  AlphaResult out;
  Portrait current = truncate(t, n);
  for (int i = 0; i < n; ++i) {
    const auto &target = path[static_cast<std::size_t>(i)];
    auto image = apply(current, target);
    if (image == target) {
      out.betas.emplace_back();
      continue;
    }
    auto found = find_element(ev, i + 1, budget, [&](const Portrait &p) {
      return stabilizer_depth(p) >= i && apply(p, image) == target;
    });
    if (!found)
      throw Error(ErrorKind::NotFound,
                  "construct_alpha: no element of St_" + std::to_string(i) + " maps " +
                      image.to_string() + " to " + target.to_string() + " (" +
                      budget_text(budget) + ")");
    current = compose(ev.eval(found->word, n), current);
    out.word = found->word * out.word;
    out.betas.push_back(found->word);
    for (int j = 0; j <= i; ++j) {
      const auto &v = path[static_cast<std::size_t>(j)];
      if (!(apply(current, v) == v))
        throw Error(ErrorKind::Structural, "construct_alpha: lost fixed vertex " +
                                               v.to_string());
    }
  }
  return out;
}

std::vector<Vertex> default_path(const Portrait &t, int n) {
  if (n < 1 || n > t.depth())
    throw Error(ErrorKind::Precondition, "default_path: need 1 <= n <= depth");
  std::vector<Vertex> out;
  Vertex v;
  bool fixed = true;
  for (int i = 0; i < n; ++i) {
    int chosen = 0;
    bool found = false;
    if (fixed)
      for (int c = 0; c < t.signature().branching(i) && !found; ++c)
        if (apply(t, v.child(c)) == v.child(c)) {
          chosen = c;
          found = true;
        }
    fixed = found;
    v = v.child(chosen);
    out.push_back(v);
  }
  return out;
}

nlohmann::json LocalNormalityReport::to_json() const {
  auto gens = nlohmann::json::array();
  for (const auto &g : generators)
    gens.push_back(g.to_string());
  return {{"vertex", v.to_string()},
          {"max_length", max_length},
          {"elements_scanned", elements_scanned},
          {"degree", degree},
          {"generators", gens},
          {"lower_order", lower.order()},
          {"upper_order", upper.order()},
          {"normal", normal},
          {"transitive", transitive},
          {"exact", exact},
          {"degree_four", degree_four}};
}

LocalNormalityReport check_local_normality(const Evaluator &ev, const Vertex &v,
                                           int max_length,
                                           std::size_t max_frontier) {
  const auto &sig = ev.signature();
  const int lvl = v.level();
  LocalNormalityReport r;
  r.v = v;
  r.max_length = max_length;
  r.degree = sig.branching(lvl);
  r.degree_four = r.degree == 4;
  r.lower = PermGroup::closure(r.degree, {});
  r.elements_scanned = enumerate_elements(
      ev, lvl + 1, SearchBudget{max_length, max_frontier},
      [&](const Word &, const Portrait &p) {
        if (stabilizer_depth(p) < lvl)
          return false;
        const auto &label = p.label(v);
        if (!r.lower.contains(label)) {
          r.generators.push_back(label);
          r.lower = PermGroup::closure(r.degree, r.generators);
        }
        return false;
      });

  // Labels of G at level lvl are products of root labels of the symbols that
  // occur lvl levels down the recursion of the generators.
  const auto &pres = ev.presentation();
  std::set<std::string> reach;
  for (const auto &s : pres.generator_names())
    reach.insert(s);
  for (int j = 0; j < lvl; ++j) {
    std::set<std::string> next;
    for (const auto &s : reach)
      for (const auto &child : pres.rule(s).children)
        for (const auto &name : child.symbols())
          next.insert(name);
    reach = std::move(next);
  }
  std::vector<Perm> roots;
  for (const auto &s : reach)
    roots.push_back(ev.symbol(s, 1, lvl).label(0, 0));
  r.upper = PermGroup::closure(r.degree, roots);
  r.normal = is_normal_in_sym(r.lower);
  r.transitive = is_transitive(r.lower);
  r.exact = r.lower == r.upper;
  return r;
}

// --- rigid witnesses and WBI ----------------------------------------------------

std::vector<RigidWitness> builtin_rigid_witnesses(const Evaluator &ev, int m) {
  if (m < 1)
    throw Error(ErrorKind::Precondition, "rigid witnesses start at level 1");
  const auto &pres = ev.presentation();
  std::vector<std::string> base;
  if (is_builtin_name(pres.name()) &&
      builtin_presentation(pres.name()).fingerprint() == pres.fingerprint()) {
    if (pres.name() == "grigorchuk")
      base = {"a*d*a", "d"};
    else
      base = {"(x^-1*g^-1*x*g, 1, 1)", "(1, x^-1*g^-1*x*g, 1)",
              "(1, 1, x^-1*g^-1*x*g)"};
  } else {
    throw Error(ErrorKind::NotFound,
                "no built-in rigid witnesses for presentation '" + pres.name() + "'");
  }
  const auto &sig = ev.signature();
  std::vector<RigidWitness> out;
  for (std::uint64_t u = 0; u < sig.level_size(m); ++u) {
    auto v = vertex_at(sig, m, u);
    Word w = Word::parse(base[static_cast<std::size_t>(v.path.back())]);
    for (int j = m - 2; j >= 0; --j) {
      std::vector<Word> sections(static_cast<std::size_t>(sig.branching(j)));
      sections[static_cast<std::size_t>(v.path[static_cast<std::size_t>(j)])] = w;
      w = Word::tuple(std::move(sections));
    }
    RigidWitness rw{v, w, 0};
    rw.verified_depth = m + rigid_relative_level(ev, rw);
    out.push_back(std::move(rw));
  }
  return out;
}

int rigid_relative_level(const Evaluator &ev, const RigidWitness &w,
                         int max_relative) {
  const int lv = w.v.level();
  const int D = lv + max_relative;
  auto p = ev.eval(w.word, D);
  const auto &sig = ev.signature();
  int rel = 0;
  for (int j = 0; j < D; ++j) {
    auto labels = p.level_labels(j);
    for (std::uint64_t u = 0; u < labels.size(); ++u) {
      if (labels[u].is_identity())
        continue;
      auto x = vertex_at(sig, j, u);
      bool inside = j >= lv && std::equal(w.v.path.begin(), w.v.path.end(),
                                          x.path.begin());
      if (!inside)
        throw Error(ErrorKind::NotFound, "witness " + w.word.to_string() +
                                             " acts at " + x.to_string() +
                                             ", outside the subtree of " +
                                             w.v.to_string());
      if (rel == 0)
        rel = j - lv + 1;
    }
  }
  if (rel == 0)
    throw Error(ErrorKind::NotFound, "witness " + w.word.to_string() +
                                         " acts trivially below " + w.v.to_string() +
                                         " to depth " + std::to_string(D));
  return rel;
}

int compute_wbi(const Evaluator &ev, int m, const std::vector<RigidWitness> &ws,
                int max_relative) {
  const auto &sig = ev.signature();
  int wbi = 0;
  for (std::uint64_t u = 0; u < sig.level_size(m); ++u) {
    auto v = vertex_at(sig, m, u);
    int best = 0;
    for (const auto &w : ws)
      if (w.v == v) {
        int rel = rigid_relative_level(ev, w, max_relative);
        best = best == 0 ? rel : std::min(best, rel);
      }
    if (best == 0)
      throw Error(ErrorKind::NotFound, "no rigid witness for vertex " + v.to_string());
    wbi = std::max(wbi, best);
  }
  return wbi;
}

StepResult locally_normal_step(const Evaluator &ev, const Portrait &t, int m,
                               int wbi, const SearchBudget &budget) {
  if (m < 1 || wbi < 1)
    throw Error(ErrorKind::Precondition, "locally_normal_step: need m >= 1, wbi >= 1");
  if (t.depth() < m + wbi)
    throw Error(ErrorKind::OutOfDepth, "locally_normal_step: conjugator needs depth " +
                                           std::to_string(m + wbi));
  const auto &sig = t.signature();
  auto img = level_action(t, m);
  std::optional<std::uint64_t> v0;
  for (std::uint64_t u = 0; u < img.size() && !v0; ++u)
    if (img[u] == u)
      v0 = u;
  if (!v0)
    throw Error(ErrorKind::Precondition, "t fixes no vertex of level " + std::to_string(m) +
                                             "; apply construct_alpha first");
  StepResult out;
  const Vertex v = vertex_at(sig, m, *v0);

  auto t1 = truncate(t, m + 1);
  auto stage1 = find_element(ev, m + 1, budget, [&](const Portrait &p) {
    return stabilizer_depth(p) >= m &&
           compose(p, t1).label(v).fixed_points() == 0;
  });
  out.log.push_back(stage1 ? "g' = " + stage1->word.to_string() +
                                 " makes g't fixed-point free below " + v.to_string()
                           : "no g' below " + v.to_string() + " (" +
                                 budget_text(budget) + ")");

  for (int n = m + 1; n <= m + wbi; ++n) {
    auto tn = truncate(t, n);
    auto ct = cycle_type(tn, n);
    auto found = find_element(ev, n, budget, [&](const Portrait &p) {
      return stabilizer_depth(p) >= m && cycle_type(compose(p, tn), n) != ct;
    });
    if (found) {
      out.word = found->word;
      out.n = n;
      out.log.push_back("ghat = " + found->word.to_string() + " separates on level " +
                        std::to_string(n));
      return out;
    }
    out.log.push_back("level " + std::to_string(n) + ": no separating element");
  }
  throw Error(ErrorKind::NotFound,
              "locally_normal_step: no element of St_" + std::to_string(m) +
                  " separates cycle types on levels " + std::to_string(m + 1) + ".." +
                  std::to_string(m + wbi) + " (" + budget_text(budget) + ")");
}

// --- certificates ------------------------------------------------------------------

namespace {

Word require_conjugator(const AutomorphismSpec &spec) {
  auto c = spec.conjugator();
  if (!c)
    throw Error(ErrorKind::Unsupported,
                "spec '" + spec.describe() + "' has no conjugating isometry");
  return *c;
}

Certificate start_certificate(const Evaluator &ev, CertificateKind kind,
                              const AutomorphismSpec &spec, const Word &twist) {
  Certificate c;
  c.kind = kind;
  c.presentation_name = ev.presentation().name();
  c.presentation_text = ev.presentation().canonical_text();
  c.presentation_hash = ev.presentation().fingerprint();
  c.spec = spec.describe();
  c.twist = twist;
  return c;
}

void add_entry(Certificate &c, const Evaluator &ev, const Portrait &tp, Word w,
               int m, int n, std::string criterion) {
  CertificateEntry e{std::move(w), m, n, std::move(criterion), {}};
  std::string why;
  if (!criterion_holds(ev, tp, e, &why))
    throw Error(ErrorKind::Structural, "constructed entry fails its criterion: " + why);
  e.invariants = measure_entry(ev, tp, e);
  c.entries.push_back(std::move(e));
}

nlohmann::json budget_json(const SearchBudget &b) {
  return {{"max_length", b.max_length}, {"max_frontier", b.max_frontier}};
}

} // namespace

Certificate binary_certificate(const Evaluator &ev, const AutomorphismSpec &spec,
                               int k, const CertifyOptions &opts) {
  require_binary(ev.signature(), "binary_certificate");
  if (k < 0)
    throw Error(ErrorKind::Precondition, "binary_certificate: negative k");
  const int L = opts.max_level > 0 ? opts.max_level : k + 1;
  if (k > 0 && L < 2)
    throw Error(ErrorKind::Precondition, "binary_certificate: max level must be >= 2");
  Word conj = require_conjugator(spec);
  auto t = ev.eval(conj, L);

  std::map<int, std::optional<Word>> kcache;
  auto k_at = [&](int m) -> std::optional<Word> {
    auto it = kcache.find(m);
    if (it != kcache.end())
      return it->second;
    std::optional<Word> w;
    try {
      w = construct_K(ev, m, opts.budget);
    } catch (const Error &e) {
      if (e.kind() != ErrorKind::NotFound)
        throw;
    }
    kcache[m] = w;
    return w;
  };
  std::map<int, std::optional<Word>> oddcache;
  auto odd_at = [&](int m) -> std::optional<Word> {
    auto it = oddcache.find(m);
    if (it != oddcache.end())
      return it->second;
    auto odd = [m](const Portrait &p) {
      return stabilizer_depth(p) >= m && nontrivial_label_count(p, m + 1) % 2 == 1;
    };
    std::optional<Word> w;
    if (auto kw = k_at(m); kw && odd(ev.eval(*kw, m + 2)))
      w = kw;
    else if (auto f = find_element(ev, m + 2, opts.budget, odd))
      w = f->word;
    oddcache[m] = w;
    return w;
  };

  struct Planned {
    Word word;
    int m, n;
    std::string criterion;
  };
  std::vector<std::string> failures;
  auto plan = [&](const Portrait &tp) {
    std::vector<Planned> out;
    int m = 1;
    while (static_cast<int>(out.size()) < k && m + 1 <= L) {
      if (stabilizer_depth(tp) >= m && switch_condition(tp, m)) {
        if (auto w = k_at(m)) {
          out.push_back({*w, m, m + 1, "switch-condition"});
          m += 1;
          continue;
        }
      }
      if (m + 2 <= L)
        if (auto w = odd_at(m)) {
          out.push_back({*w, m, m + 2, "odd-switches"});
          m += 2;
          continue;
        }
      ++m;
    }
    return out;
  };

  std::optional<std::pair<Word, Portrait>> chosen;
  std::vector<Planned> entries;
  std::size_t best = 0;
  if (k == 0) {
    chosen.emplace(Word{}, t);
  } else {
    enumerate_elements(ev, L, opts.twist_budget, [&](const Word &g, const Portrait &gp) {
      auto tp = compose(gp, t);
      auto p = plan(tp);
      best = std::max(best, p.size());
      if (static_cast<int>(p.size()) < k)
        return false;
      chosen.emplace(g, tp);
      entries = std::move(p);
      return true;
    });
  }
  if (!chosen)
    throw Error(ErrorKind::NotFound,
                "binary_certificate: no inner twist gives " + std::to_string(k) +
                    " separated levels up to level " + std::to_string(L) + "; best " +
                    std::to_string(best) + " (twist " +
                    budget_text(opts.twist_budget) + ")");

  auto c = start_certificate(ev, CertificateKind::Binary, spec, chosen->first);
  for (auto &e : entries)
    add_entry(c, ev, chosen->second, e.word, e.m, e.n, e.criterion);
  c.parameters = {{"k", k},
                  {"max_level", L},
                  {"budget", budget_json(opts.budget)},
                  {"twist_budget", budget_json(opts.twist_budget)}};
  return c;
}

Certificate strongly_saturated_certificate(const Evaluator &ev,
                                           const AutomorphismSpec &spec, int k,
                                           const CertifyOptions &opts) {
  if (k < 0)
    throw Error(ErrorKind::Precondition, "strongly_saturated_certificate: negative k");
  Word conj = require_conjugator(spec);
  const int r = greedy_steps(opts.s);
  auto witness = witness_source(ev, opts.budget);
  auto c = start_certificate(ev, CertificateKind::StronglySaturated, spec, Word{});
  auto traces = nlohmann::json::array();
  int m = 1;
  for (int i = 0; i < k; ++i) {
    const int D = m + r;
    auto t = ev.eval(conj, D);
    GhatResult g;
    try {
      g = construct_ghat(ev, t, m, opts.s, witness);
    } catch (const Error &e) {
      throw Error(e.kind(), "entry " + std::to_string(i) + " at level " +
                                std::to_string(m) + ": " + e.what());
    }
    int n = 0;
    for (int j = m + 1; j <= D && n == 0; ++j) {
      auto tj = truncate(t, j);
      if (cycle_type(compose(ev.eval(g.word, j), tj), j) != cycle_type(tj, j))
        n = j;
    }
    if (n == 0)
      throw Error(ErrorKind::Structural, "greedy element does not separate cycle types");
    add_entry(c, ev, t, g.word, m, n, "cycle-type");
    auto steps = nlohmann::json::array();
    for (const auto &st : g.trace.steps)
      steps.push_back({{"level", st.level},
                       {"epsilon", st.epsilon},
                       {"candidates", st.candidates},
                       {"survivors", st.survivors},
                       {"bound", st.bound}});
    traces.push_back({{"m", m},
                      {"steps", steps},
                      {"final_fixed", g.trace.final_fixed},
                      {"final_size", g.trace.final_size}});
    m = n;
  }
  c.parameters = {{"k", k},
                  {"s", opts.s},
                  {"r", r},
                  {"budget", budget_json(opts.budget)},
                  {"greedy", traces}};
  return c;
}

Certificate locally_normal_certificate(const Evaluator &ev,
                                       const AutomorphismSpec &spec, int n,
                                       const CertifyOptions &opts) {
  if (n < 0)
    throw Error(ErrorKind::Precondition, "locally_normal_certificate: negative n");
  Word conj = require_conjugator(spec);
  const auto &sig = ev.signature();

  std::map<int, int> wbi;
  auto wbi_at = [&](int m) {
    auto it = wbi.find(m);
    if (it == wbi.end())
      it = wbi.emplace(m, compute_wbi(ev, m, builtin_rigid_witnesses(ev, m))).first;
    return it->second;
  };
  // w(n): levels the conjugator must fix a vertex on.
  int w = 1;
  for (int i = 0; i < n; ++i)
    w += wbi_at(w);
  for (int j = 0; j < w; ++j)
    if (sig.branching(j) == 4)
      throw Error(ErrorKind::Precondition,
                  "branching index 4 at level " + std::to_string(j));

  auto t = ev.eval(conj, w);
  auto path = default_path(t, w);
  auto alpha = construct_alpha(ev, t, path, opts.budget);
  auto c = start_certificate(ev, CertificateKind::LocallyNormal, spec, alpha.word);
  Word twisted = alpha.word * conj;

  auto logs = nlohmann::json::array();
  auto normality = nlohmann::json::array();
  int m = 1;
  for (int i = 0; i < n; ++i) {
    const int window = wbi_at(m);
    auto tp = ev.eval(twisted, m + window);
    StepResult step;
    try {
      step = locally_normal_step(ev, tp, m, window, opts.budget);
    } catch (const Error &e) {
      throw Error(e.kind(), "entry " + std::to_string(i) + " at level " +
                                std::to_string(m) + ": " + e.what());
    }
    add_entry(c, ev, tp, step.word, m, step.n, "cycle-type");
    for (auto &line : step.log)
      logs.push_back(line);
    const auto &v = path[static_cast<std::size_t>(std::min(m, w) - 1)];
    normality.push_back(check_local_normality(ev, v, 8, 20000).to_json());
    m = step.n;
  }
  auto path_json = nlohmann::json::array();
  for (const auto &v : path)
    path_json.push_back(v.to_string());
  auto wbi_json = nlohmann::json::object();
  for (auto [level, value] : wbi)
    wbi_json[std::to_string(level)] = value;
  c.parameters = {{"n", n},
                  {"path", path_json},
                  {"wbi", wbi_json},
                  {"budget", budget_json(opts.budget)},
                  {"steps", logs},
                  {"local_normality", normality}};
  return c;
}

} // namespace rinf
