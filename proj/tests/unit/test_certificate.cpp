#include "doctest.h"

#include "rinf/certificate.hpp"
#include "rinf/constructions.hpp"
#include "rinf/error.hpp"

#include <filesystem>

using namespace rinf;

namespace {

Certificate grigorchuk_binary(int k, const char *spec = "identity") {
  auto p = builtin_grigorchuk();
  Evaluator ev(p);
  return binary_certificate(ev, parse_spec(p, spec), k);
}

VerdictStatus verify_at(const Certificate &c, int d) {
  VerifyOptions o;
  o.depth = d;
  return verify_certificate(c, o).status;
}

} // namespace

TEST_CASE("certificate JSON round trip") {
  auto c = grigorchuk_binary(2);
  auto j = c.to_json();
  auto back = Certificate::from_json(j);
  CHECK(back.to_json() == j);
  CHECK(back.bound() == 2);
  CHECK(back.required_depth() == c.entries.back().n);
  auto file = std::filesystem::temp_directory_path() / "rinf_unit_cert.json";
  c.save(file);
  CHECK(Certificate::load(file).to_json() == j);
  std::filesystem::remove(file);
  CHECK_THROWS_AS(Certificate::from_json(nlohmann::json{{"schema", "other"}}), Error);
}

TEST_CASE("entries chain and carry their criterion") {
  auto c = grigorchuk_binary(3, "family:1");
  REQUIRE(c.entries.size() == 3);
  for (std::size_t i = 0; i < c.entries.size(); ++i) {
    const auto &e = c.entries[i];
    CHECK(e.m >= 1);
    CHECK(e.n > e.m);
    if (i > 0)
      CHECK(e.m >= c.entries[i - 1].n);
    CHECK(!e.criterion.empty());
  }
}

TEST_CASE("empty certificate is sound") {
  auto c = grigorchuk_binary(0);
  CHECK(c.entries.empty());
  CHECK(verify_at(c, 1) == VerdictStatus::Sound);
}

TEST_CASE("binary certificates verify") {
  CHECK(verify_at(grigorchuk_binary(2), 4) == VerdictStatus::Sound);
  CHECK(verify_at(grigorchuk_binary(3, "family:1"), 4) == VerdictStatus::Sound);
}

TEST_CASE("verdicts are monotone in depth") {
  auto c = grigorchuk_binary(2);
  // Sound at the required depth stays sound one level deeper.
  int d = c.required_depth();
  CHECK(verify_at(c, d) == VerdictStatus::Sound);
  if (d < 4)
    CHECK(verify_at(c, d + 1) == VerdictStatus::Sound);
  // Too shallow to see the deepest avoidance level: partial, never unsound.
  CHECK(verify_at(c, d - 1) == VerdictStatus::PartiallyVerified);
}

TEST_CASE("tampered certificates are unsound") {
  auto c = grigorchuk_binary(2);
  SUBCASE("lower avoidance level") {
    c.entries[0].n -= 1;
    CHECK(verify_at(c, 4) == VerdictStatus::Unsound);
  }
  SUBCASE("wrong word") {
    c.entries[1].word = Word::parse("a");
    CHECK(verify_at(c, 4) == VerdictStatus::Unsound);
  }
  SUBCASE("edited invariants") {
    c.entries[0].invariants["stabilizer_depth"] = 7;
    CHECK(verify_at(c, 4) == VerdictStatus::Unsound);
  }
  SUBCASE("presentation hash") {
    c.presentation_hash ^= 1;
    CHECK(verify_at(c, 4) == VerdictStatus::Unsound);
  }
  SUBCASE("broken chain") {
    std::swap(c.entries[0], c.entries[1]);
    CHECK(verify_at(c, 4) == VerdictStatus::Unsound);
  }
}

TEST_CASE("criterion_holds explains failures") {
  auto p = builtin_grigorchuk();
  Evaluator ev(p);
  auto t = Portrait::identity(ev.signature(), 4);
  CertificateEntry e{Word::parse("a"), 1, 2, "switch-condition"};
  std::string why;
  CHECK(!criterion_holds(ev, t, e, &why));
  CHECK(!why.empty());
  CertificateEntry good{construct_K(ev, 1), 1, 2, "switch-condition"};
  CHECK(criterion_holds(ev, t, good));
}

TEST_CASE("small cap gives a partial verdict") {
  auto c = grigorchuk_binary(2);
  VerifyOptions o;
  o.depth = 4;
  o.cap = 100;
  auto v = verify_certificate(c, o);
  CHECK(v.status == VerdictStatus::PartiallyVerified);
  CHECK(v.to_json()["verdict"] == std::string(to_string(v.status)));
}

TEST_CASE("strongly saturated certificate") {
  auto p = builtin_grigorchuk();
  Evaluator ev(p);
  auto c = strongly_saturated_certificate(ev, parse_spec(p, "identity"), 2);
  CHECK(c.bound() == 2);
  CHECK(c.kind == CertificateKind::StronglySaturated);
  VerifyOptions o;
  o.depth = std::min(4, c.required_depth());
  CHECK(verify_certificate(c, o).status != VerdictStatus::Unsound);
}

TEST_CASE("locally normal certificate for tau1") {
  auto p = builtin_gupta_sidki();
  Evaluator ev(p);
  auto c = locally_normal_certificate(ev, parse_spec(p, "tau1"), 2);
  REQUIRE(c.bound() == 2);
  CHECK(c.kind == CertificateKind::LocallyNormal);
  CHECK(c.required_depth() <= 3);
  CHECK(verify_at(c, 3) == VerdictStatus::Sound);
  CHECK(c.parameters.contains("wbi"));
}

TEST_CASE("kind names") {
  for (auto k : {CertificateKind::Binary, CertificateKind::StronglySaturated,
                 CertificateKind::LocallyNormal})
    CHECK(parse_certificate_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_certificate_kind("nope"), Error);
}
