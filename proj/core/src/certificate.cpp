#include "rinf/certificate.hpp"

#include "rinf/automorphism.hpp"
#include "rinf/error.hpp"
#include "rinf/quotient.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace rinf {

namespace {

constexpr const char *kSchema = "rinf-certificate/1";

std::string hash_hex(std::uint64_t h) {
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

std::uint64_t parse_hash(const std::string &hex) {
  std::size_t used = 0;
  auto value = std::stoull(hex, &used, 16);
  if (used != hex.size())
    throw Error(ErrorKind::Parse, "bad presentation hash '" + hex + "'");
  return value;
}

} // namespace

std::string_view to_string(CertificateKind kind) {
  switch (kind) {
  case CertificateKind::Binary:
    return "binary";
  case CertificateKind::StronglySaturated:
    return "strongly-saturated";
  case CertificateKind::LocallyNormal:
    return "locally-normal";
  }
  return "?";
}

CertificateKind parse_certificate_kind(std::string_view text) {
  if (text == "binary")
    return CertificateKind::Binary;
  if (text == "strongly-saturated")
    return CertificateKind::StronglySaturated;
  if (text == "locally-normal")
    return CertificateKind::LocallyNormal;
  throw Error(ErrorKind::Parse, "unknown certificate kind '" +
                                    std::string(text) +
                                    "' (binary, strongly-saturated, locally-normal)");
}

std::string_view to_string(VerdictStatus status) {
  switch (status) {
  case VerdictStatus::Sound:
    return "sound";
  case VerdictStatus::Unsound:
    return "unsound";
  case VerdictStatus::PartiallyVerified:
    return "partially-verified";
  }
  return "?";
}

int Certificate::required_depth() const {
  int d = 1;
  for (const auto &e : entries)
    d = std::max(d, e.n);
  return d;
}

nlohmann::json Certificate::to_json() const {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["kind"] = std::string(to_string(kind));
  j["presentation"] = {{"name", presentation_name},
                       {"hash", hash_hex(presentation_hash)},
                       {"text", presentation_text}};
  j["spec"] = spec;
  j["twist"] = twist.to_string();
  j["bound"] = bound();
  j["parameters"] = parameters;
  auto entries_json = nlohmann::json::array();
  for (const auto &e : entries)
    entries_json.push_back({{"word", e.word.to_string()},
                            {"m", e.m},
                            {"n", e.n},
                            {"criterion", e.criterion},
                            {"invariants", e.invariants}});
  j["entries"] = entries_json;
  return j;
}

Certificate Certificate::from_json(const nlohmann::json &j) {
  try {
    if (j.at("schema").get<std::string>() != kSchema)
      throw Error(ErrorKind::Parse, "unsupported certificate schema '" +
                                        j.at("schema").get<std::string>() + "'");
    Certificate c;
    c.kind = parse_certificate_kind(j.at("kind").get<std::string>());
    const auto &p = j.at("presentation");
    c.presentation_name = p.at("name").get<std::string>();
    c.presentation_text = p.at("text").get<std::string>();
    c.presentation_hash = parse_hash(p.at("hash").get<std::string>());
    c.spec = j.at("spec").get<std::string>();
    c.twist = Word::parse(j.at("twist").get<std::string>());
    c.parameters = j.value("parameters", nlohmann::json::object());
    for (const auto &e : j.at("entries")) {
      CertificateEntry entry;
      entry.word = Word::parse(e.at("word").get<std::string>());
      entry.m = e.at("m").get<int>();
      entry.n = e.at("n").get<int>();
      entry.criterion = e.at("criterion").get<std::string>();
      entry.invariants = e.value("invariants", nlohmann::json::object());
      c.entries.push_back(std::move(entry));
    }
    return c;
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorKind::Parse, std::string("malformed certificate: ") + e.what());
  }
}

void Certificate::save(const std::filesystem::path &file) const {
  std::ofstream out(file);
  if (!out)
    throw Error(ErrorKind::Resource, "cannot write " + file.string());
  out << to_json().dump(2) << "\n";
}

Certificate Certificate::load(const std::filesystem::path &file) {
  std::ifstream in(file);
  if (!in)
    throw Error(ErrorKind::Unresolved, "cannot open certificate " + file.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorKind::Parse, std::string("certificate is not JSON: ") + e.what());
  }
  return from_json(j);
}

nlohmann::json measure_entry(const Evaluator &ev, const Portrait &conjugator,
                             const CertificateEntry &entry) {
  const int n = entry.n;
  const int m = entry.m;
  if (n < 1 || m < 0 || m >= n)
    throw Error(ErrorKind::Precondition, "entry levels must satisfy 0 <= m < n");
  auto t = truncate(conjugator, n);
  auto g = ev.eval(entry.word, n);
  auto gt = compose(g, t);
  nlohmann::json j;
  j["stabilizer_depth"] = stabilizer_depth(g);
  j["level_m_nontrivial_labels"] = nontrivial_label_count(g, m);
  j["fixed_word_t"] = fixed_count(gt, n);
  j["fixed_t"] = fixed_count(t, n);
  j["cycle_type_word_t"] = cycle_type(gt, n);
  j["cycle_type_t"] = cycle_type(t, n);
  j["conjugator_stabilizer_depth"] = std::min(stabilizer_depth(t), m + 1);
  j["conjugator_level_m_nontrivial_labels"] = nontrivial_label_count(t, m);
  if (m + 1 < n)
    j["level_m1_nontrivial_labels"] = nontrivial_label_count(g, m + 1);
  return j;
}

bool criterion_holds(const Evaluator &ev, const Portrait &conjugator,
                     const CertificateEntry &entry, std::string *why) {
  auto fail = [&](std::string msg) {
    if (why)
      *why = std::move(msg);
    return false;
  };
  const int m = entry.m;
  const int n = entry.n;
  if (m < 1)
    return fail("level m must be >= 1");
  if (n <= m)
    return fail("avoidance level n must exceed m");
  if (conjugator.depth() < n)
    return fail("conjugator evaluated too shallow");
  const auto &sig = ev.signature();
  auto t = truncate(conjugator, n);
  auto g = ev.eval(entry.word, n);
  if (stabilizer_depth(g) < m)
    return fail("word is not in St_" + std::to_string(m));

  if (entry.criterion == "switch-condition") {
    if (!sig.is_binary())
      return fail("switch-condition needs a binary tree");
    if (n != m + 1)
      return fail("switch-condition separates from St_{m+1} only");
    if (!is_in_K(g, m))
      return fail("word is not in K_" + std::to_string(m));
    if (stabilizer_depth(t) < m)
      return fail("conjugator is not in St_" + std::to_string(m));
    if (2 * nontrivial_label_count(t, m) == sig.level_size(m))
      return fail("conjugator switches exactly half of level " +
                  std::to_string(m + 1));
    return true;
  }
  if (entry.criterion == "odd-switches") {
    if (!sig.is_binary())
      return fail("odd-switches needs a binary tree");
    if (n != m + 2)
      return fail("odd-switches separates from St_{m+2} only");
    if (nontrivial_label_count(g, m + 1) % 2 == 0)
      return fail("word has an even number of switches at label level " +
                  std::to_string(m + 1));
    return true;
  }
  if (entry.criterion == "cycle-type") {
    if (cycle_type(compose(g, t), n) == cycle_type(t, n))
      return fail("word*t' and t' have equal cycle types on level " +
                  std::to_string(n));
    return true;
  }
  return fail("unknown criterion '" + entry.criterion + "'");
}

nlohmann::json Verdict::to_json() const {
  return {{"verdict", std::string(to_string(status))},
          {"reason", reason},
          {"depth", depth},
          {"log", log}};
}

Verdict verify_certificate(const Certificate &cert, const VerifyOptions &opts) {
  Verdict v;
  v.depth = opts.depth > 0 ? opts.depth : cert.required_depth();
  auto unsound = [&](std::string reason) {
    v.status = VerdictStatus::Unsound;
    v.reason = std::move(reason);
    v.log.push_back("FAIL: " + v.reason);
    return v;
  };
  std::vector<std::string> partial;

  Presentation pres;
  try {
    pres = Presentation::parse(cert.presentation_text);
  } catch (const Error &e) {
    return unsound(std::string("presentation text does not parse: ") + e.what());
  }
  if (pres.fingerprint() != cert.presentation_hash)
    return unsound("presentation hash does not match its text");
  Evaluator ev(pres);

  AutomorphismSpec phi;
  try {
    if (!pres.is_group_word(cert.twist))
      return unsound("twist " + cert.twist.to_string() +
                     " is not a word over the generators");
    phi = inner_twist(pres, cert.twist, parse_spec(pres, cert.spec));
  } catch (const Error &e) {
    return unsound(std::string("spec: ") + e.what());
  }
  auto conj = phi.conjugator();
  if (!conj)
    return unsound("spec has no conjugating isometry; criteria cannot be checked");
  v.log.push_back("phi' = " + (cert.twist.empty() ? std::string()
                                                  : "inner(" + cert.twist.to_string() + ") o ") +
                  cert.spec + ", conjugator " + conj->to_string());

  // Portrait-level checks.
  const int eval_depth = std::max(v.depth, cert.required_depth());
  auto t = ev.eval(*conj, eval_depth);
  if (auto g = std::get_if<GeneratorImages>(&phi.form())) {
    auto tinv = inverse(t);
    for (const auto &s : pres.generator_names()) {
      auto lhs = compose(compose(t, ev.symbol(s, eval_depth)), tinv);
      auto image = apply_spec(pres, AutomorphismSpec(GeneratorImages{g->images, {}}),
                              Word::symbol(s));
      if (!(lhs == ev.eval(image, eval_depth)))
        return unsound("conjugator " + conj->to_string() + " does not map " + s +
                       " to " + image.to_string() + " at depth " +
                       std::to_string(eval_depth));
    }
    v.log.push_back("conjugator realizes the generator images to depth " +
                    std::to_string(eval_depth));
  }

  for (std::size_t i = 0; i < cert.entries.size(); ++i) {
    const auto &e = cert.entries[i];
    auto tag = "entry " + std::to_string(i) + " (" + e.word.to_string() + ", m=" +
               std::to_string(e.m) + ", n=" + std::to_string(e.n) + ")";
    try {
      pres.validate(e.word);
    } catch (const Error &err) {
      return unsound(tag + ": " + err.what());
    }
    if (i > 0 && e.m < cert.entries[i - 1].n)
      return unsound(tag + ": level " + std::to_string(e.m) +
                     " is below the previous avoidance level " +
                     std::to_string(cert.entries[i - 1].n));
    std::string why;
    try {
      if (!criterion_holds(ev, t, e, &why))
        return unsound(tag + ": " + e.criterion + " fails: " + why);
      if (measure_entry(ev, t, e) != e.invariants)
        return unsound(tag + ": stored invariants differ from recomputed ones");
    } catch (const Error &err) {
      return unsound(tag + ": " + err.what());
    }
    v.log.push_back(tag + ": " + e.criterion + " holds, invariants match");
    if (!pres.is_group_word(e.word))
      partial.push_back(tag + " uses section tuples; membership in G is only "
                              "checked in the quotient");
  }

  // Quotient checks.
  if (!cert.entries.empty()) {
    try {
      auto q = QuotientGroup::build_cached(ev, v.depth, opts.cap, opts.cache);
      auto induced = InducedAutomorphism::induce(q, ev, phi);
      v.log.push_back("G/St_" + std::to_string(v.depth) + ": order " +
                      std::to_string(q.order()) + "; " + induced.check_log());
      auto part = twisted_classes(q, induced);
      std::vector<int> stab(q.order());
      for (ElementId id = 0; id < q.order(); ++id)
        stab[id] = q.stabilizer_depth(id);
      std::vector<std::uint32_t> cls(cert.entries.size());
      for (std::size_t i = 0; i < cert.entries.size(); ++i) {
        const auto &e = cert.entries[i];
        auto tag = "entry " + std::to_string(i);
        auto id = q.find(ev.eval(e.word, v.depth));
        if (!id)
          return unsound(tag + ": word is not in G/St_" + std::to_string(v.depth));
        if (stab[*id] < std::min(e.m, v.depth))
          return unsound(tag + ": word is not in St_" + std::to_string(e.m) +
                         " in the quotient");
        cls[i] = part.class_of[*id];
        if (e.n > v.depth) {
          partial.push_back(tag + ": avoidance level " + std::to_string(e.n) +
                            " is beyond quotient depth " + std::to_string(v.depth));
          continue;
        }
        for (ElementId x = 0; x < q.order(); ++x)
          if (part.class_of[x] == cls[i] && stab[x] >= e.n)
            return unsound(tag + ": twisted class meets St_" + std::to_string(e.n) +
                           " at " + q.rep_word(x).to_string());
        v.log.push_back(tag + ": class " + std::to_string(cls[i]) +
                        " avoids St_" + std::to_string(e.n));
      }
      for (std::size_t i = 0; i < cert.entries.size(); ++i)
        for (std::size_t j = i + 1; j < cert.entries.size(); ++j)
          if (cert.entries[i].n <= v.depth && cls[i] == cls[j])
            return unsound("entries " + std::to_string(i) + " and " +
                           std::to_string(j) + " share a twisted class");
      v.log.push_back(std::to_string(part.count()) + " twisted classes in G/St_" +
                      std::to_string(v.depth) + "; entry classes pairwise distinct");
    } catch (const Error &e) {
      if (e.kind() == ErrorKind::Resource) {
        partial.push_back(std::string("quotient not built: ") + e.what());
      } else {
        return unsound(std::string("quotient check: ") + e.what());
      }
    }
  }

  if (!partial.empty()) {
    v.status = VerdictStatus::PartiallyVerified;
    v.reason = partial.front();
    for (auto &p : partial)
      v.log.push_back("PARTIAL: " + p);
  } else {
    v.status = VerdictStatus::Sound;
    v.reason = "R(phi) >= " + std::to_string(cert.bound());
  }
  return v;
}

} // namespace rinf
