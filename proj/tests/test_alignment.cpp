#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "mfvdm/alignment.hpp"
#include "mfvdm/error.hpp"
#include "mfvdm/evaluation.hpp"
#include "mfvdm/manifold.hpp"
#include "oracles.hpp"

using namespace mfvdm;
constexpr double kPi = std::numbers::pi;

namespace {

std::vector<SpectralBundle> bundles_for(const AlignmentGraph& g, int k_max, std::size_t m) {
    std::vector<SpectralBundle> out;
    for (int k = 1; k <= k_max; ++k) {
        SpectralBundle b = top_eigenpairs(build_sk(g, k), m);
        b.k = k;
        out.push_back(std::move(b));
    }
    return out;
}

AlignmentSequence seq(std::vector<Complex> z) { return AlignmentSequence{0, 1, std::move(z)}; }

}  // namespace

TEST_CASE("single and coherent harmonics") {
    const AngleEstimate one = estimate_angle(seq({std::polar(1.0, 1.0)}), 1024);
    CHECK(std::abs(one.alpha - 1.0) < 1e-4);

    std::vector<Complex> z;
    for (int k = 1; k <= 10; ++k) z.push_back(std::polar(1.0, 2.5 * k));
    CHECK(std::abs(estimate_angle(seq(z), 1024).alpha - 2.5) < 1e-4);

    AngleEstimator est(256);
    const auto e = est.estimate(z);
    CHECK(e.grid == 256);
    CHECK(est.last_objective().size() == 256);
    CHECK(e.objective == doctest::Approx(10.0).epsilon(1e-3));
}

TEST_CASE("random sequences against a 10^6-point grid") {
    std::mt19937_64 gen(3);
    std::normal_distribution<double> g;
    AngleEstimator est(1024);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Complex> z(10);
        for (auto& v : z) v = Complex(g(gen), g(gen));
        const auto e = est.estimate(z);
        const auto [arg, best] = oracle::grid_argmax(z, 1000000);
        double scale = 0;
        for (auto v : z) scale += std::abs(v);
        CHECK(best - oracle::objective(z, e.alpha) < 1e-6 * scale);
        // Far from a near-tie the peaks must coincide to grid plus interpolation accuracy.
        CHECK(oracle::circular_gap(e.alpha, arg) < 2 * kPi / 1e6 + 1e-3);
    }
}

TEST_CASE("grid and input validation") {
    const auto z = seq({Complex(1, 0), Complex(0, 1)});
    CHECK_THROWS_AS(estimate_angle(z, 1000), ParameterError);
    CHECK_THROWS_AS(estimate_angle(seq(std::vector<Complex>(300, Complex(1, 0))), 1024), ParameterError);
    CHECK_THROWS_AS(estimate_angle(seq({Complex(0, 0), Complex(0, 0)}), 64), NumericalError);
}

TEST_CASE("alignment sequences") {
    const std::size_t n = 100;
    const AlignmentGraph g = oracle::random_graph(n, 250, 5);
    const auto bundles = bundles_for(g, 3, n);
    const int t = 2;
    const EmbeddingSet emb = build_embedding(bundles, t);

    const auto self = alignment_sequence(emb, 7, 7);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(self.z[k].imag() == 0.0);
        CHECK(self.z[k].real() > 0.0);
    }
    CHECK(estimate_angle(self, 64).alpha == 0.0);

    for (int k = 1; k <= 3; ++k) {
        const Eigen::MatrixXcd p = oracle::matrix_power(oracle::dense_sk(g, k), 2 * t);
        for (std::size_t i = 0; i < n; i += 3)
            for (std::size_t j = 0; j < n; j += 2) {
                const auto zij = alignment_sequence(emb, i, j).z[static_cast<std::size_t>(k - 1)];
                const auto zji = alignment_sequence(emb, j, i).z[static_cast<std::size_t>(k - 1)];
                REQUIRE(zji == std::conj(zij));
                REQUIRE(std::abs(zij - p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) < 1e-10);
            }
    }
}

TEST_CASE("rotating one node's frame shifts the estimate by the same angle") {
    const AlignmentGraph g = oracle::random_graph(60, 200, 9);
    const auto bundles = bundles_for(g, 4, 12);
    const EmbeddingSet emb = build_embedding(bundles, 1);
    const double theta = 0.7;
    auto feats = emb.features();
    for (auto& f : feats) {
        // phi_k(j) -> e^{i k theta} phi_k(j) for node j = 11
        for (Eigen::Index l = 0; l < f.re.cols(); ++l) {
            const Complex v = Complex(f.re(11, l), f.im(11, l)) * std::polar(1.0, f.k * theta);
            f.re(11, l) = v.real();
            f.im(11, l) = v.imag();
        }
    }
    const EmbeddingSet turned(EmbeddingKind::MultiFrequency, feats);
    const double before = estimate_angle(alignment_sequence(emb, 3, 11), 4096).alpha;
    const double after = estimate_angle(alignment_sequence(turned, 3, 11), 4096).alpha;
    CHECK(oracle::circular_gap(after, wrap_2pi(before - theta)) < 1e-3);
}

TEST_CASE("torus: flat bundle gives exact alignments up to the grid") {
    const TorusGeometry geom{};
    const auto truth = GroundTruth::torus(sample_torus_uniform(1500, geom, 12), geom);
    const AlignmentGraph g = build_clean_knn_graph(truth, 30);
    const EmbeddingSet emb = build_embedding(bundles_for(g, 5, 10), 1);
    const NeighborList nl = nn_search(emb, 10);
    const auto pairs = align_neighbors(emb, nl, 1024);
    const double bin = 2 * kPi / 1024;
    double worst = 0;
    for (const auto& pa : pairs) worst = std::max(worst, oracle::circular_gap(pa.estimate.alpha, truth.alpha(pa.i, pa.j)));
    CHECK(worst < bin);
}

TEST_CASE("sphere: clean alignments, orientation symmetry, serial equals parallel") {
    const auto truth = GroundTruth::sphere(sample_so3_uniform(3000, 2));
    const AlignmentGraph g = build_clean_knn_graph(truth, 60);
    const EmbeddingSet emb = build_embedding(bundles_for(g, 10, 20), 1);
    const NeighborList nl = nn_search(emb, 30);
    const auto par = align_neighbors(emb, nl, 1024, Execution::Parallel);
    const auto ser = align_neighbors(emb, nl, 1024, Execution::Serial);
    REQUIRE(par.size() == ser.size());
    for (std::size_t e = 0; e < par.size(); ++e) {
        REQUIRE(par[e].estimate.alpha == ser[e].estimate.alpha);
        REQUIRE(par[e].estimate.objective == ser[e].estimate.objective);
    }
    CHECK(score_alignment(par, truth, "mfvdm").median < 2.0);

    // A mutual pair is estimated once and negated.
    for (std::size_t i = 0; i < nl.n; ++i) {
        const Index j = nl.neighbor(i, 0);
        for (std::size_t r = 0; r < nl.kappa; ++r)
            if (nl.neighbor(j, r) == i) {
                const double a = par[i * nl.kappa].estimate.alpha;
                const double b = par[j * nl.kappa + r].estimate.alpha;
                REQUIRE(oracle::circular_gap(a + b, 0.0) < 1e-12);
            }
    }
}
