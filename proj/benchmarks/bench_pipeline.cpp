#include <benchmark/benchmark.h>

#include <cstdlib>

#include "ibni/checker.hpp"
#include "ibni/harness.hpp"
#include "ibni/solver.hpp"

using namespace ibni;

namespace {

harness::LoadedCase load(const char* app, const char* variant) {
  const char* env = std::getenv("IBNI_CORPUS_DIR");
  std::filesystem::path dir = env ? env : IBNI_BENCH_CORPUS_DIR;
  return harness::load_case(harness::find_case(app, variant), dir);
}

std::set<std::string> gui_channels(const sym::DriverConfig& d) {
  std::set<std::string> out;
  for (const auto& g : d.gui) out.insert(g.name);
  return out;
}

void BM_SymExecBump(benchmark::State& state) {
  auto c = load("bump", "secure");
  sym::DriverConfig cfg = c.driver;
  cfg.depth = static_cast<int>(state.range(0));
  std::size_t paths = 0;
  for (auto _ : state) {
    auto res = sym::sym_exec(c.program, cfg);
    paths = res.paths();
    benchmark::DoNotOptimize(res);
  }
  state.counters["paths"] = static_cast<double>(paths);
}
BENCHMARK(BM_SymExecBump)->DenseRange(1, 5)->Unit(benchmark::kMillisecond);

void BM_CheckBump(benchmark::State& state) {
  auto c = load("bump", "secure");
  sym::DriverConfig cfg = c.driver;
  cfg.depth = static_cast<int>(state.range(0));
  auto res = sym::sym_exec(c.program, cfg);
  check::CheckOptions opts;
  opts.prune = state.range(1) != 0;
  auto gui = gui_channels(c.driver);
  check::CheckStats st;
  for (auto _ : state) {
    auto v = check::check_ibni(res.nodes, c.policy, gui, opts, &st);
    benchmark::DoNotOptimize(v);
  }
  state.counters["queries"] = static_cast<double>(st.queries_issued);
}
BENCHMARK(BM_CheckBump)->ArgsProduct({{2, 3, 4}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_PipelineCase(benchmark::State& state, const char* app, const char* variant, int depth) {
  auto c = load(app, variant);
  for (auto _ : state) {
    auto r = harness::run_pipeline(c, depth);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK_CAPTURE(BM_PipelineCase, loctoggle_secure, "loctoggle", "secure", 2)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_PipelineCase, contacts_insecure1, "contacts", "insecure1", 2)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_PipelineCase, whereru_secure, "whereru", "secure", 3)->Unit(benchmark::kMillisecond);

void BM_SolverWorkedFormula(benchmark::State& state) {
  using namespace smt;
  auto a1 = int_var("a1"), a1p = int_var("a1'"), a2 = int_var("a2"), a2p = int_var("a2'");
  auto f = mk_and({eq(a1, a1p), mk_or({ne(a1, a1p), ne(a2, a2p)})});
  unsigned width = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(check_sat(f, width));
}
BENCHMARK(BM_SolverWorkedFormula)->Arg(8)->Arg(16)->Arg(32);

void BM_SolverMaskedUnsat(benchmark::State& state) {
  using namespace smt;
  auto a = int_var("a1"), b = int_var("a1'");
  auto mask = int_const(-256);
  auto f = mk_and({eq(bit_and(a, mask), bit_and(b, mask)),
                   ne(bit_and(bit_and(a, mask), mask), bit_and(bit_and(b, mask), mask))});
  for (auto _ : state) benchmark::DoNotOptimize(check_sat(f, 32));
}
BENCHMARK(BM_SolverMaskedUnsat);

}  // namespace

BENCHMARK_MAIN();
