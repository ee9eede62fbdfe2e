// One line per acceptance criterion; exit status is the number of failures.

#include "gen.hpp"
#include "oracle.hpp"

#include "rinf/certificate.hpp"
#include "rinf/constructions.hpp"
#include "rinf/perm_group.hpp"
#include "rinf/quotient.hpp"
#include "rinf/search.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace rinf;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream note;

  void require(bool cond, const std::string &what) {
    if (!cond && ok) {
      ok = false;
      note << what;
    }
  }
};

struct Criterion {
  int id;
  const char *name;
  double limit_seconds;  // 0: no runtime bound
  std::function<void(Outcome &)> run;
};

// --- 1 ---------------------------------------------------------------------

void relations(Outcome &out) {
  Evaluator ev(builtin_grigorchuk());
  auto id = Portrait::identity(ev.signature(), 8);
  for (auto *s : {"a*a", "b*b", "c*c", "d*d"})
    out.require(ev.eval(s, 8) == id, std::string(s) + " is not trivial");
  out.require(ev.eval("a^-1*c*a", 8) == ev.eval("(d, a)", 8), "a^-1 c a != (d, a)");
  out.require(ev.eval("a^-1*d*a", 8) == ev.eval("(b, 1)", 8), "a^-1 d a != (b, 1)");
  out.require(ev.eval("d", 8) == ev.eval("b*c", 8), "d != bc");
}

// --- 2 ---------------------------------------------------------------------

void figures(Outcome &out) {
  Evaluator gr(builtin_grigorchuk());
  const int depth = 9;
  // Label at the left child of spine vertex 1^j, as +1 (trivial) / -1 (switch).
  // b: -1 -1 +1 ..., c: -1 +1 -1 ..., d: +1 -1 -1 ..., period 3.
  std::vector<std::pair<const char *, std::vector<int>>> pattern{
      {"b", {-1, -1, 1}}, {"c", {-1, 1, -1}}, {"d", {1, -1, -1}}};
  for (const auto &[s, period] : pattern) {
    auto p = gr.eval(s, depth);
    Vertex spine;
    for (int j = 0; j + 1 < depth; ++j) {
      int sign = p.label(spine.child(0)).is_identity() ? 1 : -1;
      out.require(sign == period[static_cast<std::size_t>(j % 3)],
                  std::string(s) + " spine label at level " + std::to_string(j + 1));
      // Everything off the left children of the spine is trivial.
      out.require(p.label(spine).is_identity(), std::string(s) + " spine vertex switched");
      spine = spine.child(1);
    }
  }
  Evaluator gs(builtin_gupta_sidki());
  auto g = gs.eval("g", 4);
  auto x = Perm::cycle(3);
  for (int level = 0; level < 4; ++level)
    for (std::uint64_t u = 0; u < gs.signature().level_size(level); ++u) {
      auto v = vertex_at(gs.signature(), level, u);
      Perm expected = Perm::identity(3);
      bool spine = level >= 1;
      for (int i = 0; i + 1 < level; ++i)
        spine = spine && v.path[static_cast<std::size_t>(i)] == 2;
      if (spine && v.path.back() == 0)
        expected = x;
      if (spine && v.path.back() == 1)
        expected = x.inverse();
      out.require(g.label(v) == expected, "gamma label at " + v.to_string());
    }
}

// --- 3 ---------------------------------------------------------------------

void gupta_sidki_facts(Outcome &out) {
  Evaluator ev(builtin_gupta_sidki());
  auto w = Word::parse("x^-1*g^-1*x*g");
  auto g = ev.eval(w, 3);
  out.require(stabilizer_depth(g) == 1, "stabilizer depth of g");
  out.require(fixed_count(g, 2) == 0, "g fixes a level-2 vertex");
  auto d = ev.diagonal(w, 1, 3);
  out.require(stabilizer_depth(d) == 2, "stabilizer depth of the diagonal");
  out.require(fixed_count(d, 3) == 0, "diagonal fixes a level-3 vertex");
  auto q = QuotientGroup::build(ev, 3);
  out.require(q.find(d).has_value(), "diagonal not in the image of G mod St_3");
}

// --- 4 ---------------------------------------------------------------------

void quotient_orders(Outcome &out) {
  Evaluator ev(builtin_grigorchuk());
  std::vector<std::size_t> expected{2, 8, 128, 4096};
  std::vector<QuotientGroup> qs;
  for (int d = 1; d <= 4; ++d) {
    qs.push_back(QuotientGroup::build(ev, d));
    out.require(qs.back().order() == expected[static_cast<std::size_t>(d - 1)],
                "order at d = " + std::to_string(d) + " is " +
                    std::to_string(qs.back().order()));
  }
  for (std::size_t i = 0; i + 1 < qs.size(); ++i) {
    out.require(qs[i + 1].order() % qs[i].order() == 0, "tower does not divide");
    std::vector<std::size_t> fibre(qs[i].order(), 0);
    for (auto c : truncation_map(qs[i + 1], qs[i]))
      ++fibre[c];
    for (auto f : fibre)
      out.require(f == qs[i + 1].order() / qs[i].order(), "uneven truncation fibre");
  }
}

// --- 5 ---------------------------------------------------------------------

void reidemeister(Outcome &out) {
  auto p = builtin_grigorchuk();
  Evaluator ev(p);
  auto bounds = reidemeister_lower_bounds(ev, AutomorphismSpec::identity(), 4);
  out.require(bounds.size() == 4, "missing levels");
  out.require(bounds[0].classes == 2 && bounds[1].classes == 5, "does not start 2, 5");
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i)
    out.require(bounds[i].classes <= bounds[i + 1].classes, "not non-decreasing");
  for (const auto &b : bounds) {
    auto q = oracle::quotient(p, b.depth);
    auto brute = oracle::twisted_class_count(q, oracle::action(p, Word{}, b.depth));
    out.require(brute == b.classes, "d = " + std::to_string(b.depth) + ": " +
                                        std::to_string(b.classes) + " vs brute force " +
                                        std::to_string(brute));
  }
  out.note << "R = " << bounds[0].classes << ", " << bounds[1].classes << ", "
           << bounds[2].classes << ", " << bounds[3].classes;
}

// --- 6 ---------------------------------------------------------------------

void shift_lemma(Outcome &out) {
  gen::Rng rng(6);
  struct Case {
    const char *pres;
    int d;
    std::vector<const char *> specs;
  };
  int pairs = 0;
  for (const auto &c : {Case{"grigorchuk", 3, {"identity", "family:1", "family:2", "conj:a"}},
                        Case{"gupta-sidki", 2, {"identity", "tau1", "tau2", "tau3"}}}) {
    Evaluator ev(builtin_presentation(c.pres));
    auto q = QuotientGroup::build(ev, c.d);
    for (int trial = 0; trial < 20; ++trial) {
      const auto *s = c.specs[static_cast<std::size_t>(
          gen::uniform(rng, 0, static_cast<int>(c.specs.size()) - 1))];
      auto phi = InducedAutomorphism::induce(q, ev, parse_spec(ev.presentation(), s));
      auto k = static_cast<ElementId>(gen::uniform(rng, 0, static_cast<int>(q.order()) - 1));
      // Class by class: x ~phi y iff xk ~psi yk, psi = tau_{k^-1} o phi.
      auto part = twisted_classes(q, phi);
      auto psi = twist(q, phi, q.inverse(k));
      auto shifted = twisted_classes(q, psi);
      bool same = part.count() == shifted.count();
      for (ElementId x = 0; same && x < q.order(); ++x) {
        auto rep = part.representative[part.class_of[x]];
        same = shifted.class_of[q.multiply(x, k)] == shifted.class_of[q.multiply(rep, k)];
      }
      out.require(same, std::string(c.pres) + " " + s + " k = " + std::to_string(k));
      out.require(verify_shift_lemma(q, phi, k), "library shift check disagrees");
      ++pairs;
    }
  }
  out.note << pairs << " pairs";
}

// --- 7 ---------------------------------------------------------------------

void k_construction(Outcome &out) {
  Evaluator ev(builtin_grigorchuk());
  gen::Rng rng(7);
  for (int n = 0; n <= 2; ++n) {
    auto w = construct_K(ev, n);
    auto k = ev.eval(w, n + 4);
    out.require(is_in_K(k, n), "K_" + std::to_string(n) + " output fails is_in_K");
    for (int trial = 0; trial < 100; ++trial) {
      auto h = trial % 2 == 0
                   ? ev.eval(gen::word(rng, {"a", "b", "c", "d"}, gen::uniform(rng, 1, 14)), n + 4)
                   : gen::portrait(rng, ev.signature(), n + 4);
      out.require(is_in_K(conjugate(h, k), n), "conjugate left K_" + std::to_string(n));
    }
  }
}

// --- 8 ---------------------------------------------------------------------

void quotient_shadow(Outcome &out) {
  auto p = builtin_grigorchuk();
  Evaluator ev(p);
  auto q = QuotientGroup::build(ev, 3);
  int specs = 0, elements = 0;
  for (auto *s : {"identity", "family:1", "family:2", "family:3", "conj:b", "conj:c",
                  "conj:d", "conj:a*d*a"}) {
    auto spec = parse_spec(p, s);
    auto t = ev.eval(*spec.conjugator(), 3);
    if (stabilizer_depth(t) < 1 || !switch_condition(t, 1))
      continue;
    ++specs;
    auto phi = InducedAutomorphism::induce(q, ev, spec);
    auto part = twisted_classes(q, phi);
    for (ElementId id = 0; id < q.order(); ++id) {
      if (!is_in_K(q.element(id), 1))
        continue;
      ++elements;
      out.require(!class_meets_stabilizer(q, part, part.class_of[id], 2),
                  std::string(s) + ": a K_1 class meets St_2");
    }
  }
  out.require(specs >= 5 && elements > 0, "too few cases");
  out.note << specs << " automorphisms, " << elements / std::max(specs, 1) << " K_1 elements";
}

// --- 9 ---------------------------------------------------------------------

void greedy(Outcome &out) {
  gen::Rng rng(9);
  const double s = 0.25;
  out.require(greedy_steps(s) == 3, "r != 3");
  for (auto *name : {"grigorchuk", "gupta-sidki"}) {
    Evaluator ev(builtin_presentation(name));
    auto src = witness_source(ev);
    const auto &sig = ev.signature();
    int accepted = 0;
    for (int attempt = 0; attempt < 5000 && accepted < 25; ++attempt) {
      int m = gen::uniform(rng, 0, sig.is_binary() ? 2 : 1);
      int D = m + 3;
      std::vector<Perm> labels;
      for (int j = 0; j < D; ++j)
        for (std::uint64_t u = 0; u < sig.level_size(j); ++u)
          labels.push_back(gen::uniform(rng, 0, 9) < 8 ? Perm::identity(sig.branching(j))
                                                       : gen::perm(rng, sig.branching(j)));
      auto t = Portrait::from_labels(sig, D, labels);
      if (!check_assumption(t, s, D).holds)
        continue;
      ++accepted;
      auto g = construct_ghat(ev, t, m, s, src);
      out.require(g.trace.halving_holds(), std::string(name) + ": halving bound fails");
      auto gt = compose(ev.eval(g.word, D), t);
      out.require(4 * fixed_count(gt, D) < sig.level_size(D),
                  std::string(name) + ": final fixed fraction >= 1/4");
    }
    out.require(accepted == 25, std::string(name) + ": too few conjugators");
  }
}

// --- 10 --------------------------------------------------------------------

void local_groups(Outcome &out) {
  for (int k : {2, 3, 5}) {
    auto S = PermGroup::symmetric(k), A = PermGroup::alternating(k);
    for (const auto &H : all_subgroups_of_symmetric(k)) {
      if (!is_normal_in_sym(H) || !is_transitive(H))
        continue;
      out.require(H == S || H == A, "exotic normal transitive subgroup at k = " +
                                        std::to_string(k));
      for (const auto &g : H.elements())
        if (!g.is_identity())
          out.require(is_transitive(normal_closure(H, g)),
                      "intransitive normal closure at k = " + std::to_string(k));
    }
  }
  bool exception = false;
  for (const auto &H : all_subgroups_of_symmetric(4))
    if (is_normal_in_sym(H) && is_transitive(H) && H.order() == 4)
      exception = true;
  out.require(exception, "Klein four exception not found at k = 4");
}

// --- 11 --------------------------------------------------------------------

void local_normality(Outcome &out) {
  gen::Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    Evaluator ev(Presentation::parse(gen::binary_presentation_text(rng, gen::uniform(rng, 1, 3))));
    for (int level = 0; level <= 2; ++level)
      for (std::uint64_t u = 0; u < ev.signature().level_size(level); ++u) {
        auto r = check_local_normality(ev, vertex_at(ev.signature(), level, u), 6, 2000);
        out.require(r.normal, "binary local group not normal");
      }
  }
  Evaluator gs(builtin_gupta_sidki());
  auto A3 = PermGroup::alternating(3);
  for (int level = 0; level <= 2; ++level)
    for (std::uint64_t u = 0; u < gs.signature().level_size(level); ++u) {
      auto v = vertex_at(gs.signature(), level, u);
      auto r = check_local_normality(gs, v, 8);
      out.require(r.lower == A3 && r.upper == A3 && r.normal && r.transitive,
                  "H(" + v.to_string() + ") != A_3");
    }
}

// --- 12 --------------------------------------------------------------------

VerdictStatus round_trip(const Certificate &c, int depth) {
  // Through the serialized form, as a file would carry it.
  auto back = Certificate::from_json(nlohmann::json::parse(c.to_json().dump()));
  VerifyOptions o;
  o.depth = depth;
  return verify_certificate(back, o).status;
}

void certificates(Outcome &out) {
  auto gp = builtin_grigorchuk();
  Evaluator gr(gp);
  for (auto *s : {"identity", "family:1"}) {
    auto c = binary_certificate(gr, parse_spec(gp, s), 3);
    out.require(c.bound() == 3, std::string(s) + ": bound != 3");
    out.require(round_trip(c, 4) == VerdictStatus::Sound, std::string(s) + ": not sound at d = 4");
  }
  auto sp = builtin_gupta_sidki();
  Evaluator gs(sp);
  auto ln = locally_normal_certificate(gs, parse_spec(sp, "tau1"), 2);
  out.require(ln.bound() == 2, "tau1: bound != 2");
  out.require(round_trip(ln, 3) == VerdictStatus::Sound, "tau1: not sound at d = 3");

  auto j = binary_certificate(gr, parse_spec(gp, "identity"), 3).to_json();
  j["entries"][0]["n"] = j["entries"][0]["n"].get<int>() - 1;
  out.require(round_trip(Certificate::from_json(j), 4) == VerdictStatus::Unsound,
              "tampered certificate not unsound");
}

} // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "relations at depth 8", 1, relations},
      {2, "spine and gamma label patterns", 1, figures},
      {3, "gupta-sidki commutator and diagonal", 5, gupta_sidki_facts},
      {4, "grigorchuk quotient orders 2, 8, 128, 4096", 30, quotient_orders},
      {5, "reidemeister bounds vs brute force", 120, reidemeister},
      {6, "class shift by k", 0, shift_lemma},
      {7, "construct_K and conjugation invariance", 0, k_construction},
      {8, "K_1 classes avoid St_2", 0, quotient_shadow},
      {9, "greedy halving", 0, greedy},
      {10, "normal transitive subgroups of Sym(k)", 10, local_groups},
      {11, "local normality", 0, local_normality},
      {12, "certify and verify", 0, certificates},
  };
  int failures = 0;
  for (auto &c : criteria) {
    Outcome out;
    auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception &e) {
      out.ok = false;
      out.note.str("");
      out.note << "exception: " << e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (out.ok && c.limit_seconds > 0 && secs > c.limit_seconds) {
      out.ok = false;
      out.note << " over the " << c.limit_seconds << " s limit";
    }
    failures += out.ok ? 0 : 1;
    std::printf("%s %2d %-44s %8.3f s  %s\n", out.ok ? "PASS" : "FAIL", c.id, c.name, secs,
                out.note.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures;
}
