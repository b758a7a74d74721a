// Serial reference versus OpenMP paths for the hot kernels.
#include <benchmark/benchmark.h>

#include <vector>

#include "mfvdm/alignment.hpp"
#include "mfvdm/embedding.hpp"
#include "mfvdm/graph_core.hpp"
#include "mfvdm/kernels.hpp"
#include "mfvdm/manifold.hpp"
#include "mfvdm/spectral.hpp"

namespace {

using namespace mfvdm;

struct Fixture {
    GroundTruth truth;
    AlignmentGraph graph;
    SparseHermitian s1;
    EmbeddingSet emb;
    NeighborList nn;
};

const Fixture& fixture() {
    static const Fixture f = [] {
        GroundTruth truth = GroundTruth::sphere(sample_so3_uniform(2000, 7));
        AlignmentGraph graph = build_clean_knn_graph(truth, 40);
        SparseHermitian s1 = build_sk(graph, 1);
        std::vector<SpectralBundle> bundles;
        for (int k = 1; k <= 6; ++k) {
            SpectralBundle b = top_eigenpairs(build_sk(graph, k), 12);
            b.k = k;
            bundles.push_back(std::move(b));
        }
        EmbeddingSet emb = build_embedding(bundles, 1);
        NeighborList nn = nn_search(emb, 20);
        return Fixture{std::move(truth), std::move(graph), std::move(s1), std::move(emb), std::move(nn)};
    }();
    return f;
}

Execution mode(const benchmark::State& state) { return state.range(0) == 0 ? Execution::Serial : Execution::Parallel; }

void BM_spmv(benchmark::State& state) {
    const auto& f = fixture();
    std::vector<std::complex<double>> x(f.s1.size(), {1.0, 0.5}), y(f.s1.size());
    for (auto _ : state) {
        spmv(f.s1, x, y, mode(state));
        benchmark::DoNotOptimize(y.data());
    }
}

void BM_nn_search(benchmark::State& state) {
    const auto& f = fixture();
    for (auto _ : state) benchmark::DoNotOptimize(nn_search(f.emb, 20, mode(state)));
}

void BM_align(benchmark::State& state) {
    const auto& f = fixture();
    for (auto _ : state) benchmark::DoNotOptimize(align_neighbors(f.emb, f.nn, 256, mode(state)));
}

void BM_knn_graph(benchmark::State& state) {
    const auto& f = fixture();
    for (auto _ : state) benchmark::DoNotOptimize(build_clean_knn_graph(f.truth, 40, mode(state)));
}

}  // namespace

BENCHMARK(BM_spmv)->Arg(0)->Arg(1);
BENCHMARK(BM_nn_search)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_align)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_knn_graph)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
