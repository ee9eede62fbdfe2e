#include "doctest.h"

#include "gen.hpp"
#include "oracle.hpp"

#include "rinf/error.hpp"
#include "rinf/evaluator.hpp"
#include "rinf/io.hpp"
#include "rinf/tree.hpp"

#include <numeric>

using namespace rinf;

namespace {

const TreeSignature kSigs[] = {TreeSignature::binary(), TreeSignature::ternary(),
                               TreeSignature({2, 3}, 2), TreeSignature({3}, 5)};

} // namespace

TEST_CASE("signature parsing and level sizes") {
  CHECK(TreeSignature::parse("binary") == TreeSignature::binary());
  CHECK(TreeSignature::parse(" ternary ") == TreeSignature::ternary());
  auto s = TreeSignature::parse("2,3,2");
  CHECK(s.branching(0) == 2);
  CHECK(s.branching(1) == 3);
  CHECK(s.branching(7) == 2);
  CHECK(s.level_size(3) == 12);
  CHECK(s.internal_count(3) == 1 + 2 + 6);
  CHECK(s.shifted().branching(0) == 3);
  CHECK_THROWS_AS(TreeSignature::parse("2,x"), Error);
  CHECK_THROWS_AS(TreeSignature::parse("1"), Error);
  CHECK(TreeSignature::parse(s.to_string()) == s);
}

TEST_CASE("vertex index round trip") {
  for (const auto &sig : kSigs)
    for (int level = 0; level <= 3; ++level)
      for (std::uint64_t u = 0; u < sig.level_size(level); ++u)
        CHECK(vertex_index(sig, vertex_at(sig, level, u)) == u);
}

TEST_CASE("perm basics") {
  auto s = Perm::switch2();
  CHECK(!s.is_identity());
  CHECK((s * s).is_identity());
  auto c = Perm::cycle(3);
  CHECK(c(0) == 1);
  CHECK(c.pow(3).is_identity());
  CHECK(c.inverse() == c.pow(2));
  CHECK(Perm::identity(4).fixed_points() == 4);
  int bad[] = {0, 0, 1};
  CHECK_THROWS_AS(Perm::from_images(bad), Error);
  for (int k = 1; k <= 5; ++k)
    for (std::uint32_t r = 0; r < factorial(k); ++r)
      CHECK(Perm::unrank(k, r).rank() == r);
}

TEST_CASE("property: perm products compose images") {
  gen::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    int k = gen::uniform(rng, 1, 8);
    auto p = gen::perm(rng, k), q = gen::perm(rng, k), r = gen::perm(rng, k);
    for (int i = 0; i < k; ++i)
      CHECK((p * q)(i) == p(q(i)));
    CHECK((p * q) * r == p * (q * r));
    CHECK((p * p.inverse()).is_identity());
  }
}

TEST_CASE("property: portrait group laws") {
  gen::Rng rng(12);
  for (const auto &sig : kSigs)
    for (int trial = 0; trial < 20; ++trial) {
      int d = gen::uniform(rng, 1, 4);
      auto f = gen::portrait(rng, sig, d), g = gen::portrait(rng, sig, d),
           h = gen::portrait(rng, sig, d);
      auto id = Portrait::identity(sig, d);
      CHECK(compose(compose(f, g), h) == compose(f, compose(g, h)));
      CHECK(compose(f, inverse(f)) == id);
      CHECK(compose(inverse(f), f) == id);
      CHECK(compose(id, f) == f);
      CHECK(power(f, 3) == compose(f, compose(f, f)));
      CHECK(power(f, -1) == inverse(f));
      // The action is a left action on every level.
      for (int level = 1; level <= d; ++level) {
        auto fg = level_action(compose(f, g), level);
        auto fa = level_action(f, level), ga = level_action(g, level);
        for (std::size_t u = 0; u < fg.size(); ++u)
          CHECK(fg[u] == fa[ga[u]]);
      }
    }
}

TEST_CASE("property: truncation is a homomorphism") {
  gen::Rng rng(13);
  for (const auto &sig : kSigs)
    for (int trial = 0; trial < 20; ++trial) {
      int d = gen::uniform(rng, 2, 4);
      int e = gen::uniform(rng, 0, d);
      auto f = gen::portrait(rng, sig, d), g = gen::portrait(rng, sig, d);
      CHECK(truncate(compose(f, g), e) == compose(truncate(f, e), truncate(g, e)));
      CHECK(truncate(f, d) == f);
    }
}

TEST_CASE("property: encode and JSON round trip") {
  gen::Rng rng(14);
  for (const auto &sig : kSigs)
    for (int trial = 0; trial < 20; ++trial) {
      int d = gen::uniform(rng, 0, 4);
      auto f = gen::portrait(rng, sig, d);
      auto bytes = f.encode();
      CHECK(bytes.size() == Portrait::encoded_size(sig, d));
      CHECK(Portrait::decode(sig, d, bytes) == f);
      CHECK(portrait_from_json(portrait_to_json(f)) == f);
    }
}

TEST_CASE("property: sections restrict the action") {
  gen::Rng rng(15);
  for (const auto &sig : kSigs)
    for (int trial = 0; trial < 10; ++trial) {
      auto f = gen::portrait(rng, sig, 3);
      for (std::uint64_t u = 0; u < sig.level_size(1); ++u) {
        auto v = vertex_at(sig, 1, u);
        auto s = f.section(v);
        CHECK(s.depth() == 2);
        // f(v w) = f(v) s(w) for every w of length 2 below v.
        for (std::uint64_t x = 0; x < s.signature().level_size(2); ++x) {
          auto w = vertex_at(s.signature(), 2, x);
          Vertex vw = v;
          for (int c : w.path)
            vw = vw.child(c);
          auto img = apply(f, vw);
          auto tail = apply(s, w);
          CHECK(img.path[0] == apply(f, v).path[0]);
          CHECK(std::vector<int>(img.path.begin() + 1, img.path.end()) == tail.path);
        }
      }
    }
}

TEST_CASE("property: cycle type and fixed counts agree") {
  gen::Rng rng(16);
  for (const auto &sig : kSigs)
    for (int trial = 0; trial < 20; ++trial) {
      auto f = gen::portrait(rng, sig, 3);
      for (int level = 1; level <= 3; ++level) {
        auto ct = cycle_type(f, level);
        CHECK(std::accumulate(ct.begin(), ct.end(), std::uint64_t{0}) ==
              sig.level_size(level));
        CHECK(std::count(ct.begin(), ct.end(), 1u) ==
              static_cast<std::ptrdiff_t>(fixed_count(f, level)));
        CHECK(std::is_sorted(ct.begin(), ct.end()));
        // Conjugation preserves cycle type.
        auto h = gen::portrait(rng, sig, 3);
        CHECK(cycle_type(conjugate(h, f), level) == ct);
      }
    }
}

TEST_CASE("stabilizer depth and K_n") {
  auto sig = TreeSignature::binary();
  gen::Rng rng(17);
  for (int m = 0; m < 4; ++m) {
    auto f = gen::stabilizer_portrait(rng, sig, 5, m);
    CHECK(stabilizer_depth(f) >= m);
  }
  CHECK(stabilizer_depth(Portrait::identity(sig, 4)) == 4);
  std::vector<Perm> labels(7, Perm::identity(2));
  labels[1] = labels[2] = Perm::switch2();
  auto k1 = Portrait::from_labels(sig, 3, labels);
  CHECK(is_in_K(k1, 1));
  CHECK(!is_in_K(k1, 0));
  CHECK(nontrivial_label_count(k1, 1) == 2);
  CHECK_THROWS_AS(is_in_K(Portrait::identity(TreeSignature::ternary(), 2), 0), Error);
  CHECK_THROWS_AS(is_in_K(k1, 3), Error);
}

TEST_CASE("property: K_n is closed under conjugation") {
  auto sig = TreeSignature::binary();
  gen::Rng rng(18);
  for (int n = 0; n <= 3; ++n)
    for (int trial = 0; trial < 30; ++trial) {
      // A K_n element: switches on every level-n vertex, random below.
      std::vector<Perm> labels;
      for (int j = 0; j < 6; ++j)
        for (std::uint64_t u = 0; u < sig.level_size(j); ++u)
          labels.push_back(j < n    ? Perm::identity(2)
                           : j == n ? Perm::switch2()
                                    : gen::perm(rng, 2));
      auto g = Portrait::from_labels(sig, 6, labels);
      REQUIRE(is_in_K(g, n));
      auto h = gen::portrait(rng, sig, 6);
      CHECK(is_in_K(conjugate(h, g), n));
    }
}

TEST_CASE("grigorchuk relations at depth 8") {
  Evaluator ev(builtin_grigorchuk());
  CHECK(ev.failing_relations(8).empty());
  auto id = Portrait::identity(ev.signature(), 8);
  for (auto s : {"a*a", "b*b", "c*c", "d*d", "b*c*d"})
    CHECK(ev.eval(s, 8) == id);
  CHECK(ev.eval("a^-1*c*a", 8) == ev.eval("(d, a)", 8));
  CHECK(ev.eval("a^-1*d*a", 8) == ev.eval("(b, 1)", 8));
}

TEST_CASE("portrait agrees with the vertex-action oracle") {
  gen::Rng rng(19);
  for (auto *name : {"grigorchuk", "gupta-sidki"}) {
    auto p = builtin_presentation(name);
    Evaluator ev(p);
    int k = p.signature().branching(0);
    for (int trial = 0; trial < 15; ++trial) {
      auto w = gen::word(rng, p.generator_names(), gen::uniform(rng, 0, 8));
      const int d = 3;
      auto port = ev.eval(w, d);
      auto act = level_action(port, d);
      auto ref = oracle::action(p, w, d);
      REQUIRE(act.size() == ref.size());
      for (std::size_t u = 0; u < ref.size(); ++u)
        CHECK(act[u] == ref[u]);
      (void)k;
    }
  }
}

TEST_CASE("gupta-sidki commutator fixes no level-2 vertex") {
  Evaluator ev(builtin_gupta_sidki());
  auto g = ev.eval("x^-1*g^-1*x*g", 4);
  CHECK(stabilizer_depth(g) == 1);
  CHECK(fixed_count(g, 2) == 0);
}

TEST_CASE("portrait stats") {
  Evaluator ev(builtin_grigorchuk());
  auto s = portrait_stats(ev.eval("a", 3));
  CHECK(s["stabilizer_depth"] == 0);
  CHECK(s["fixed_counts"] == nlohmann::json::array({0, 0, 0}));
  CHECK(s["nontrivial_labels"] == nlohmann::json::array({1, 0, 0}));
}
