#include <benchmark/benchmark.h>

#include "fa/generate.hpp"
#include "fa/matrix.hpp"
#include "fa/structure.hpp"

namespace {

std::vector<std::string> port_names(const char* stem, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

void BM_MatrixProduct(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  fa::Rng rng(1);
  const std::vector<std::string> alphabet = {"a", "b", "c"};
  fa::PortIndex rows = fa::PortIndex::of(port_names("r", n));
  fa::PortIndex mid = fa::PortIndex::of(port_names("m", n));
  fa::PortIndex cols = fa::PortIndex::of(port_names("c", n));
  fa::SemiringMatrix a = fa::random_matrix(rng, rows, mid, alphabet, 0.3);
  fa::SemiringMatrix b = fa::random_matrix(rng, mid, cols, alphabet, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(a * b);
  }
}
BENCHMARK(BM_MatrixProduct)->Arg(4)->Arg(16)->Arg(64);

void BM_Compose(benchmark::State& state) {
  fa::ArrowFactory factory(2);
  const fa::BoxShape& x = factory.fresh_box_nonempty(4);
  const fa::BoxShape& y = factory.fresh_box_nonempty(4);
  const fa::BoxShape& z = factory.fresh_box_nonempty(4);
  fa::MatArrow inner = fa::to_mat(factory.random_arrow(x, y, 8));
  fa::MatArrow outer = fa::to_mat(factory.random_arrow(y, z, 8));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fa::compose(outer, inner));
  }
}
BENCHMARK(BM_Compose);

void BM_IdentityCompose(benchmark::State& state) {
  fa::ArrowFactory factory(3);
  const fa::BoxShape& x = factory.fresh_box_nonempty(4);
  const fa::BoxShape& y = factory.fresh_box_nonempty(4);
  fa::MatArrow m = fa::to_mat(factory.random_arrow(x, y, 8));
  fa::MatArrow id = fa::to_mat(fa::arrow_identity(x));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fa::compose(m, id));
  }
}
BENCHMARK(BM_IdentityCompose);

}  // namespace

BENCHMARK_MAIN();
