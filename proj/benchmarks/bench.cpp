#include "rinf/constructions.hpp"
#include "rinf/quotient.hpp"

#include <benchmark/benchmark.h>

using namespace rinf;

static void BM_EvalGrigorchuk(benchmark::State &state) {
  auto depth = static_cast<int>(state.range(0));
  auto w = Word::parse("a*b*a*c*a*d*a*b*a*c");
  for (auto _ : state) {
    // Fresh evaluator each time so the memo does not hide the work.
    Evaluator ev(builtin_grigorchuk());
    benchmark::DoNotOptimize(ev.eval(w, depth));
  }
}
BENCHMARK(BM_EvalGrigorchuk)->Arg(6)->Arg(10)->Arg(14);

static void BM_QuotientBuild(benchmark::State &state) {
  Evaluator ev(builtin_grigorchuk());
  auto depth = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(QuotientGroup::build(ev, depth).order());
}
BENCHMARK(BM_QuotientBuild)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_QuotientBuildGuptaSidki(benchmark::State &state) {
  Evaluator ev(builtin_gupta_sidki());
  for (auto _ : state)
    benchmark::DoNotOptimize(QuotientGroup::build(ev, 3).order());
}
BENCHMARK(BM_QuotientBuildGuptaSidki)->Unit(benchmark::kMillisecond);

static void BM_TwistedClasses(benchmark::State &state) {
  Evaluator ev(builtin_grigorchuk());
  auto q = QuotientGroup::build(ev, static_cast<int>(state.range(0)));
  auto phi = InducedAutomorphism::induce(q, ev, spec_family(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(twisted_classes(q, phi).count());
}
BENCHMARK(BM_TwistedClasses)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_TwistedClassesBruteforce(benchmark::State &state) {
  Evaluator ev(builtin_grigorchuk());
  auto q = QuotientGroup::build(ev, 3);
  auto phi = InducedAutomorphism::induce(q, ev, spec_family(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(twisted_classes_bruteforce(q, phi).count());
}
BENCHMARK(BM_TwistedClassesBruteforce)->Unit(benchmark::kMillisecond);

static void BM_ConstructK(benchmark::State &state) {
  auto n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    Evaluator ev(builtin_grigorchuk());
    benchmark::DoNotOptimize(construct_K(ev, n));
  }
}
BENCHMARK(BM_ConstructK)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

static void BM_BinaryCertificate(benchmark::State &state) {
  auto p = builtin_grigorchuk();
  for (auto _ : state) {
    Evaluator ev(p);
    benchmark::DoNotOptimize(binary_certificate(ev, AutomorphismSpec::identity(), 3).bound());
  }
}
BENCHMARK(BM_BinaryCertificate)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
