#include <benchmark/benchmark.h>

#include "xot/cheat_analysis.hpp"
#include "xot/linalg.hpp"
#include "xot/protocol_engine.hpp"
#include "xot/rng.hpp"
#include "xot/state_family.hpp"

using namespace xot;
using linalg::CMat;
using linalg::cdouble;

namespace {

CMat random_hermitian(Rng& rng, int n) {
  CMat m(n, n);
  for (int i = 0; i < n; ++i) {
    m.at(i, i) = 2.0 * rng.uniform() - 1.0;
    for (int j = i + 1; j < n; ++j) {
      const cdouble z(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
      m.at(i, j) = z;
      m.at(j, i) = std::conj(z);
    }
  }
  return m;
}

void BM_HermitianEig(benchmark::State& state) {
  Rng rng(1);
  const CMat m = random_hermitian(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto eig = linalg::hermitian_eig(m);
    benchmark::DoNotOptimize(eig.values);
  }
}
BENCHMARK(BM_HermitianEig)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_BuildFamily(benchmark::State& state) {
  const states::OverlapParams p{0.21, -0.07, 0.11};
  for (auto _ : state) {
    auto fam = states::build_symmetric_family(p);
    benchmark::DoNotOptimize(fam.fourier_weights);
  }
}
BENCHMARK(BM_BuildFamily);

void BM_ReceiverCheatOracle(benchmark::State& state) {
  const states::OverlapParams p{0.21, -0.07, 0.11};
  for (auto _ : state) {
    benchmark::DoNotOptimize(cheat::bob_cheat_oracle(p));
  }
}
BENCHMARK(BM_ReceiverCheatOracle);

void BM_SenderNoTestOracle(benchmark::State& state) {
  const states::OverlapParams p{0.21, -0.07, 0.11};
  for (auto _ : state) {
    auto res = cheat::alice_notest_oracle(p);
    benchmark::DoNotOptimize(res.p01_max);
  }
}
BENCHMARK(BM_SenderNoTestOracle);

void BM_SemirandomRound(benchmark::State& state) {
  std::uint64_t round = 0;
  const auto honest = protocol::PartyStrategy::honest();
  for (auto _ : state) {
    auto rec = protocol::run_semirandom(honest, honest, 42 + (++round));
    benchmark::DoNotOptimize(rec.outcome);
  }
}
BENCHMARK(BM_SemirandomRound);

void BM_ClosedFormPoint(benchmark::State& state) {
  const states::OverlapParams p{0.21, -0.07, 0.11};
  for (auto _ : state) {
    benchmark::DoNotOptimize(cheat::bob_cheat_closed_form(p));
    auto ant = cheat::alice_notest_closed_form(p);
    benchmark::DoNotOptimize(ant.overall);
  }
}
BENCHMARK(BM_ClosedFormPoint);

}  // namespace

BENCHMARK_MAIN();
