#include "doctest.h"

#include "gen.hpp"
#include "oracle.hpp"

#include "rinf/error.hpp"
#include "rinf/quotient.hpp"
#include "rinf/union_find.hpp"

#include <filesystem>

using namespace rinf;

TEST_CASE("union find") {
  UnionFind uf(6);
  uf.unite(0, 1);
  uf.unite(2, 3);
  uf.unite(1, 3);
  CHECK(uf.find(0) == uf.find(2));
  CHECK(uf.find(4) != uf.find(5));
  CHECK(uf.components() == 3);
}

TEST_CASE("quotient orders match the vertex-action oracle") {
  for (auto [name, dmax] : {std::pair{"grigorchuk", 3}, std::pair{"gupta-sidki", 2}}) {
    auto p = builtin_presentation(name);
    Evaluator ev(p);
    for (int d = 1; d <= dmax; ++d) {
      auto q = QuotientGroup::build(ev, d);
      CHECK(q.order() == oracle::quotient(p, d).size());
    }
  }
}

TEST_CASE("grigorchuk tower divides") {
  Evaluator ev(builtin_grigorchuk());
  std::vector<std::size_t> orders;
  for (int d = 1; d <= 4; ++d)
    orders.push_back(QuotientGroup::build(ev, d).order());
  CHECK(orders == std::vector<std::size_t>{2, 8, 128, 4096});
  auto fine = QuotientGroup::build(ev, 3), coarse = QuotientGroup::build(ev, 2);
  auto map = truncation_map(fine, coarse);
  std::vector<std::size_t> fibre(coarse.order(), 0);
  for (auto c : map)
    ++fibre[c];
  for (auto f : fibre)
    CHECK(f == fine.order() / coarse.order());
}

TEST_CASE("cap is enforced") {
  Evaluator ev(builtin_grigorchuk());
  CHECK_THROWS_AS(QuotientGroup::build(ev, 3, 100), Error);
}

TEST_CASE("property: quotient multiplication matches portraits") {
  gen::Rng rng(41);
  Evaluator ev(builtin_gupta_sidki());
  auto q = QuotientGroup::build(ev, 2);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = static_cast<ElementId>(gen::uniform(rng, 0, static_cast<int>(q.order()) - 1));
    auto b = static_cast<ElementId>(gen::uniform(rng, 0, static_cast<int>(q.order()) - 1));
    CHECK(q.element(q.multiply(a, b)) == compose(q.element(a), q.element(b)));
    CHECK(q.multiply(a, q.inverse(a)) == q.identity());
    CHECK(ev.eval(q.rep_word(a), 2) == q.element(a));
    CHECK(q.rep_length(a) == q.rep_word(a).length());
  }
}

TEST_CASE("quotient cache round trip") {
  auto dir = std::filesystem::temp_directory_path() / "rinf_quotient_cache_test";
  std::filesystem::remove_all(dir);
  Evaluator ev(builtin_grigorchuk());
  auto a = QuotientGroup::build_cached(ev, 3, QuotientGroup::kDefaultCap, dir);
  REQUIRE(std::filesystem::exists(dir / QuotientGroup::cache_file_name(ev, 3)));
  auto b = QuotientGroup::build_cached(ev, 3, QuotientGroup::kDefaultCap, dir);
  REQUIRE(a.order() == b.order());
  for (ElementId i = 0; i < a.order(); ++i) {
    CHECK(a.code(i) == b.code(i));
    CHECK(a.rep_word(i) == b.rep_word(i));
  }
  CHECK(!QuotientGroup::load(dir / QuotientGroup::cache_file_name(ev, 3), ev, 2));
  Evaluator other(builtin_gupta_sidki());
  CHECK(!QuotientGroup::load(dir / QuotientGroup::cache_file_name(ev, 3), other, 3));
  std::filesystem::remove_all(dir);
}

namespace {

oracle::Action conjugator_action(const Presentation &p, const AutomorphismSpec &s, int d) {
  auto c = s.conjugator();
  REQUIRE(c);
  return oracle::action(p, *c, d);
}

} // namespace

TEST_CASE("twisted class counts match the independent orbit oracle") {
  struct Case {
    const char *pres;
    const char *spec;
    int dmax;
  };
  for (auto c : {Case{"grigorchuk", "identity", 3}, Case{"grigorchuk", "family:1", 3},
                 Case{"grigorchuk", "family:2", 3}, Case{"grigorchuk", "conj:a*b", 3},
                 Case{"gupta-sidki", "identity", 2}, Case{"gupta-sidki", "tau1", 2},
                 Case{"gupta-sidki", "conj:x1", 2}}) {
    auto p = builtin_presentation(c.pres);
    Evaluator ev(p);
    auto spec = parse_spec(p, c.spec);
    for (int d = 1; d <= c.dmax; ++d) {
      auto q = QuotientGroup::build(ev, d);
      auto phi = InducedAutomorphism::induce(q, ev, spec);
      CHECK(is_automorphism(q, phi));
      auto part = twisted_classes(q, phi);
      CHECK(part == twisted_classes_bruteforce(q, phi));
      auto ref = oracle::twisted_class_count(oracle::quotient(p, d),
                                             conjugator_action(p, spec, d));
      CHECK_MESSAGE(part.count() == ref, c.pres << " " << c.spec << " d=" << d);
    }
  }
}

TEST_CASE("reidemeister bounds for the identity on grigorchuk") {
  Evaluator ev(builtin_grigorchuk());
  auto rows = reidemeister_lower_bounds(ev, AutomorphismSpec::identity(), 3);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].classes == 2);
  CHECK(rows[1].classes == 5);
  CHECK(rows[2].classes == 20);
}

TEST_CASE("tau2 and tau3 are well defined on small gupta-sidki quotients") {
  Evaluator ev(builtin_gupta_sidki());
  for (int d = 1; d <= 2; ++d) {
    auto q = QuotientGroup::build(ev, d);
    for (auto *s : {"tau2", "tau3"}) {
      auto phi = InducedAutomorphism::induce(q, ev, parse_spec(ev.presentation(), s));
      CHECK(is_automorphism(q, phi));
      CHECK(twisted_classes(q, phi) == twisted_classes_bruteforce(q, phi));
    }
  }
}

TEST_CASE("generator images that are not a homomorphism are rejected") {
  Evaluator ev(builtin_grigorchuk());
  auto q = QuotientGroup::build(ev, 3);
  auto bad = parse_spec(ev.presentation(), "images:a=b");
  try {
    InducedAutomorphism::induce(q, ev, bad);
    FAIL("expected not-well-defined");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::NotWellDefined);
  }
}

TEST_CASE("property: shifting classes by k gives the twisted partition") {
  gen::Rng rng(42);
  struct Case {
    const char *pres;
    int d;
    std::vector<const char *> specs;
  };
  for (const auto &c : {Case{"grigorchuk", 3, {"identity", "family:1", "family:2", "conj:a"}},
                        Case{"gupta-sidki", 2, {"identity", "tau1", "tau2", "tau3", "conj:x1"}}}) {
    Evaluator ev(builtin_presentation(c.pres));
    auto q = QuotientGroup::build(ev, c.d);
    for (int trial = 0; trial < 10; ++trial) {
      auto spec = parse_spec(ev.presentation(),
                             c.specs[static_cast<std::size_t>(
                                 gen::uniform(rng, 0, static_cast<int>(c.specs.size()) - 1))]);
      auto phi = InducedAutomorphism::induce(q, ev, spec);
      auto k = static_cast<ElementId>(gen::uniform(rng, 0, static_cast<int>(q.order()) - 1));
      CHECK(verify_shift_lemma(q, phi, k));
    }
  }
}

TEST_CASE("twist by an element is an automorphism with the same class count") {
  Evaluator ev(builtin_grigorchuk());
  auto q = QuotientGroup::build(ev, 3);
  auto phi = InducedAutomorphism::induce(q, ev, AutomorphismSpec::identity());
  for (ElementId g : {ElementId{1}, ElementId{5}, ElementId{77}}) {
    auto psi = twist(q, phi, g);
    CHECK(is_automorphism(q, psi));
    CHECK(twisted_classes(q, psi).count() == twisted_classes(q, phi).count());
  }
}

TEST_CASE("class_meets_stabilizer") {
  Evaluator ev(builtin_grigorchuk());
  auto q = QuotientGroup::build(ev, 3);
  auto phi = InducedAutomorphism::induce(q, ev, AutomorphismSpec::identity());
  auto part = twisted_classes(q, phi);
  CHECK(class_meets_stabilizer(q, part, part.class_of[q.identity()], 3));
  auto a = q.id_of(ev.eval("a", 3));
  CHECK(!class_meets_stabilizer(q, part, part.class_of[a], 1));
}
