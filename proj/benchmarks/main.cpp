// The distribution's libbenchmark_main.a carries LTO bytecode from another
// compiler release, so the entry point lives here instead.
#include <benchmark/benchmark.h>

BENCHMARK_MAIN();
