// rinf: evaluate words, enumerate level quotients, emit and verify
// Reidemeister lower-bound certificates.
//
// Exit codes: 0 success or sound, 1 unsound or partially verified,
// 2 parse or precondition error, 3 cap or budget exhausted.

#include "rinf/certificate.hpp"
#include "rinf/constructions.hpp"
#include "rinf/error.hpp"
#include "rinf/io.hpp"
#include "rinf/quotient.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace rinf;
using nlohmann::json;

enum class Format { Json, Csv, Plain };

struct RunConfig {
  std::string presentation;
  int depth = 0;
  int dmax = 3;
  std::string spec = "identity";
  std::string cache;
  std::string format = "plain";
  int budget_words = 12;
  std::size_t budget_frontier = 100000;
  std::uint64_t seed = 0;
  std::uint64_t cap = QuotientGroup::kDefaultCap;

  Format fmt() const {
    if (format == "json")
      return Format::Json;
    if (format == "csv")
      return Format::Csv;
    return Format::Plain;
  }
  SearchBudget budget() const { return {budget_words, budget_frontier}; }
  std::optional<std::filesystem::path> cache_dir() const {
    if (cache.empty())
      return std::nullopt;
    return std::filesystem::path(cache);
  }
};

Presentation load_presentation(const std::string &source) {
  if (is_builtin_name(source))
    return builtin_presentation(source);
  if (std::filesystem::exists(source))
    return Presentation::load(source);
  throw Error(ErrorKind::Unresolved, "'" + source +
                                         "' is neither a built-in (grigorchuk, "
                                         "gupta-sidki) nor a presentation file");
}

int exit_code(const Error &e) {
  switch (e.kind()) {
  case ErrorKind::Resource:
  case ErrorKind::NotFound:
  case ErrorKind::OutOfDepth:
    return 3;
  default:
    return 2;
  }
}

int cmd_eval(const RunConfig &cfg, const std::string &word) {
  Evaluator ev(load_presentation(cfg.presentation));
  auto w = Word::parse(word);
  ev.presentation().validate(w);
  auto p = ev.eval(w, cfg.depth);
  auto stats = portrait_stats(p);
  switch (cfg.fmt()) {
  case Format::Json: {
    json out{{"schema", "rinf-eval/1"},
             {"presentation", ev.presentation().name()},
             {"word", w.to_string()},
             {"portrait", portrait_to_json(p)},
             {"stats", stats},
             {"provenance",
              {{"portrait", "Evaluator::eval"},
               {"stabilizer_depth", "stabilizer_depth"},
               {"fixed_counts", "fixed_count"},
               {"nontrivial_labels", "nontrivial_label_count"}}}};
    std::cout << out.dump(2) << "\n";
    break;
  }
  case Format::Csv:
    std::cout << "level,fixed,nontrivial_labels\n";
    for (int j = 0; j < p.depth(); ++j)
      std::cout << j + 1 << "," << stats["fixed_counts"][j] << ","
                << stats["nontrivial_labels"][j] << "\n";
    break;
  case Format::Plain:
    std::cout << "word             " << (w.empty() ? "1" : w.to_string()) << "\n"
              << "depth            " << p.depth() << "\n"
              << "identity         " << (stabilizer_depth(p) == p.depth() ? "yes" : "no")
              << "\n"
              << "stabilizer depth " << stats["stabilizer_depth"] << "\n";
    for (int j = 0; j < p.depth(); ++j) {
      std::cout << "level " << j << " labels:";
      for (const auto &l : p.level_labels(j))
        std::cout << " " << l.to_string();
      std::cout << "   (nontrivial " << stats["nontrivial_labels"][j] << ", fixed on level "
                << j + 1 << ": " << stats["fixed_counts"][j] << ")\n";
    }
    break;
  }
  return 0;
}

int cmd_quotient(const RunConfig &cfg) {
  Evaluator ev(load_presentation(cfg.presentation));
  auto spec = parse_spec(ev.presentation(), cfg.spec);
  json rows = json::array();
  bool capped = false;
  for (int d = 1; d <= cfg.dmax; ++d) {
    json row{{"d", d}};
    try {
      auto q = QuotientGroup::build_cached(ev, d, cfg.cap, cfg.cache_dir());
      auto phi = InducedAutomorphism::induce(q, ev, spec);
      auto part = twisted_classes(q, phi);
      row["order"] = q.order();
      row["classes"] = part.count();
      row["check"] = phi.check_log();
    } catch (const Error &e) {
      if (e.kind() != ErrorKind::Resource)
        throw;
      row["order"] = nullptr;
      row["classes"] = nullptr;
      row["check"] = std::string("cap exceeded: ") + e.what();
      capped = true;
    }
    rows.push_back(row);
    if (capped)
      break;
  }
  switch (cfg.fmt()) {
  case Format::Json:
    std::cout << json{{"schema", "rinf-quotient-report/1"},
                      {"presentation", ev.presentation().name()},
                      {"spec", spec.describe()},
                      {"cap", cfg.cap},
                      {"rows", rows},
                      {"provenance",
                       {{"order", "QuotientGroup::build"},
                        {"classes", "twisted_classes"},
                        {"check", "InducedAutomorphism::induce"}}}}
                     .dump(2)
              << "\n";
    break;
  case Format::Csv:
    std::cout << "d,order,classes\n";
    for (const auto &r : rows) {
      if (r["order"].is_null())
        std::cout << r["d"] << ",cap-exceeded,cap-exceeded\n";
      else
        std::cout << r["d"] << "," << r["order"] << "," << r["classes"] << "\n";
    }
    break;
  case Format::Plain:
    std::cout << "spec " << spec.describe() << "\n";
    for (const auto &r : rows) {
      if (r["order"].is_null())
        std::cout << "d=" << r["d"] << "  " << r["check"].get<std::string>() << "\n";
      else
        std::cout << "d=" << r["d"] << "  |G/St_d|=" << r["order"] << "  R>=" << r["classes"]
                  << "  (" << r["check"].get<std::string>() << ")\n";
    }
    break;
  }
  return capped ? 3 : 0;
}

struct CertifyArgs {
  std::string kind = "binary";
  int k = 3;
  int n = 2;
  int max_level = 0;
  double s = 0.25;
  std::string out;
};

int cmd_certify(const RunConfig &cfg, const CertifyArgs &a) {
  Evaluator ev(load_presentation(cfg.presentation));
  auto spec = parse_spec(ev.presentation(), cfg.spec);
  CertifyOptions opts;
  opts.budget = cfg.budget();
  opts.max_level = a.max_level;
  opts.s = a.s;
  Certificate c;
  switch (parse_certificate_kind(a.kind)) {
  case CertificateKind::Binary:
    c = binary_certificate(ev, spec, a.k, opts);
    break;
  case CertificateKind::StronglySaturated:
    c = strongly_saturated_certificate(ev, spec, a.k, opts);
    break;
  case CertificateKind::LocallyNormal:
    c = locally_normal_certificate(ev, spec, a.n, opts);
    break;
  }
  c.parameters["seed"] = cfg.seed;
  if (!a.out.empty()) {
    c.save(a.out);
    if (cfg.fmt() != Format::Json)
      std::cout << "wrote " << a.out << ": " << to_string(c.kind) << " certificate, R >= "
                << c.bound() << ", verify at depth " << c.required_depth() << "\n";
  }
  if (a.out.empty() || cfg.fmt() == Format::Json)
    std::cout << c.to_json().dump(2) << "\n";
  return 0;
}

int cmd_verify(const RunConfig &cfg, const std::string &file) {
  auto c = Certificate::load(file);
  VerifyOptions opts;
  opts.depth = cfg.depth;
  opts.cap = cfg.cap;
  opts.cache = cfg.cache_dir();
  auto v = verify_certificate(c, opts);
  switch (cfg.fmt()) {
  case Format::Json: {
    auto j = v.to_json();
    j["schema"] = "rinf-verdict/1";
    j["certificate"] = file;
    j["bound"] = c.bound();
    std::cout << j.dump(2) << "\n";
    break;
  }
  case Format::Csv:
    std::cout << "verdict,bound,depth,reason\n"
              << to_string(v.status) << "," << c.bound() << "," << v.depth << ",\""
              << v.reason << "\"\n";
    break;
  case Format::Plain:
    for (const auto &line : v.log)
      std::cout << "  " << line << "\n";
    std::cout << to_string(v.status) << ": " << v.reason << "\n";
    break;
  }
  return v.status == VerdictStatus::Sound ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Twisted conjugacy lower bounds for self-similar groups"};
  app.require_subcommand(1);
  RunConfig cfg;
  CertifyArgs certify;
  std::string word, file;

  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--format", cfg.format, "json, csv or plain")
        ->check(CLI::IsMember({"json", "csv", "plain"}));
    sub->add_option("--cache", cfg.cache, "Quotient cache directory");
    sub->add_option("--cap", cfg.cap, "Largest quotient order to build");
    sub->add_option("--budget-words", cfg.budget_words, "Longest word searched")
        ->check(CLI::PositiveNumber);
    sub->add_option("--budget-frontier", cfg.budget_frontier, "Most elements searched")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "Recorded in outputs; searches are deterministic");
  };
  auto check_presentation = [](const std::string &s) -> std::string {
    if (is_builtin_name(s) || std::filesystem::exists(s))
      return {};
    return "unknown presentation '" + s + "' (grigorchuk, gupta-sidki, or a file)";
  };

  auto *eval = app.add_subcommand("eval", "Evaluate a word to a finite portrait");
  eval->add_option("presentation", cfg.presentation)->required()->check(check_presentation);
  eval->add_option("word", word, "Word, e.g. \"a*b^-1\"; empty for the identity")->required();
  eval->add_option("--depth", cfg.depth, "Portrait depth")->required()->check(CLI::PositiveNumber);
  add_common(eval);

  auto *quot = app.add_subcommand("quotient", "Orders and twisted class counts of G/St_d");
  quot->add_option("presentation", cfg.presentation)->required()->check(check_presentation);
  quot->add_option("--dmax", cfg.dmax, "Deepest level")->check(CLI::PositiveNumber);
  quot->add_option("--spec", cfg.spec, "Automorphism spec");
  add_common(quot);

  auto *cert = app.add_subcommand("certify", "Build a lower-bound certificate");
  cert->add_option("presentation", cfg.presentation)->required()->check(check_presentation);
  cert->add_option("--kind", certify.kind, "binary, strongly-saturated or locally-normal")
      ->check(CLI::IsMember({"binary", "strongly-saturated", "locally-normal"}));
  cert->add_option("--k", certify.k, "Entries (binary, strongly-saturated)")
      ->check(CLI::NonNegativeNumber);
  cert->add_option("--n", certify.n, "Entries (locally-normal)")->check(CLI::NonNegativeNumber);
  cert->add_option("--max-level", certify.max_level, "Binary: deepest avoidance level");
  cert->add_option("--s", certify.s, "Strongly saturated: fixed point density")
      ->check(CLI::Range(0.0, 1.0));
  cert->add_option("--spec", cfg.spec, "Automorphism spec");
  cert->add_option("-o,--out", certify.out, "Certificate file");
  add_common(cert);

  auto *ver = app.add_subcommand("verify", "Verify a certificate file");
  ver->add_option("certificate", file)->required()->check(CLI::ExistingFile);
  ver->add_option("--depth", cfg.depth, "Quotient depth; default the certificate's own")
      ->check(CLI::NonNegativeNumber);
  add_common(ver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*eval)
      return cmd_eval(cfg, word);
    if (*quot)
      return cmd_quotient(cfg);
    if (*cert)
      return cmd_certify(cfg, certify);
    if (*ver)
      return cmd_verify(cfg, file);
  } catch (const Error &e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
