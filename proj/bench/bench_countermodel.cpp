#include <benchmark/benchmark.h>

#include "lbiq/search.hpp"
#include "lbiq/semantics.hpp"
#include "lbiq/syntax.hpp"

namespace {

using namespace lbiq;

// Valid formulas force the search to visit every candidate model.
const char* kValid = "(forall x.(p(x) & q)) -> (forall x.p(x) & q)";
const char* kShift = "(forall x.(p(x) | q)) -> (forall x.p(x) | q)";

void BM_Serial(benchmark::State& st, const char* text, Variant v) {
  Sequent s = goal_of(parse_formula(text));
  Bounds b{static_cast<int>(st.range(0)), static_cast<int>(st.range(1))};
  for (auto _ : st) benchmark::DoNotOptimize(find_countermodel_serial(s, b, v));
  st.counters["models"] = static_cast<double>(count_models(signature_of(s), b, v));
}

void BM_Parallel(benchmark::State& st, const char* text, Variant v) {
  Sequent s = goal_of(parse_formula(text));
  Bounds b{static_cast<int>(st.range(0)), static_cast<int>(st.range(1))};
  int jobs = static_cast<int>(st.range(2));
  for (auto _ : st) benchmark::DoNotOptimize(find_countermodel(s, b, v, jobs));
  st.counters["models"] = static_cast<double>(count_models(signature_of(s), b, v));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Serial, valid_id, kValid, Variant::ID)->Args({2, 2})->Args({3, 2})->Args({2, 3});
BENCHMARK_CAPTURE(BM_Parallel, valid_id, kValid, Variant::ID)
    ->ArgsProduct({{2, 3}, {2}, {1, 2, 4, 8}})
    ->Args({2, 3, 4});
BENCHMARK_CAPTURE(BM_Serial, shift_cd, kShift, Variant::CD)->Args({3, 2});
BENCHMARK_CAPTURE(BM_Parallel, shift_cd, kShift, Variant::CD)->Args({3, 2, 4});

BENCHMARK_MAIN();
