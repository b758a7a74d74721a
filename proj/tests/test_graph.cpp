#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "mfvdm/error.hpp"
#include "mfvdm/graph.hpp"
#include "mfvdm/graph_core.hpp"
#include "mfvdm/kernels.hpp"
#include "oracles.hpp"

using namespace mfvdm;
constexpr double kPi = std::numbers::pi;

TEST_CASE("angle wrapping") {
    CHECK(wrap_2pi(-0.5) == doctest::Approx(2 * kPi - 0.5));
    CHECK(wrap_2pi(2 * kPi) == 0.0);
    CHECK(wrap_2pi(7 * kPi) == doctest::Approx(kPi));
    CHECK(wrap_2pi(-1e-18) < 2 * kPi);
    CHECK(wrap_pi(1.5 * kPi) == doctest::Approx(-0.5 * kPi));
    CHECK(wrap_pi(0.25) == doctest::Approx(0.25));
}

TEST_CASE("oriented edges negate the angle when flipped") {
    const Edge e = oriented_edge(5, 2, 1.5, 0.75);
    CHECK(e.i == 2);
    CHECK(e.j == 5);
    CHECK(e.alpha == doctest::Approx(2 * kPi - 0.75));
    CHECK(oriented_edge(2, 5, 1.5, 0.75).alpha == 0.75);
}

TEST_CASE("validation rejects malformed graphs") {
    const double a = 0.1;
    CHECK_NOTHROW(AlignmentGraph(3, {{0, 1, 1, a}, {1, 2, 1, a}}).validate());
    CHECK_THROWS_AS(AlignmentGraph(3, {{0, 1, 1, a}, {1, 1, 1, a}}).validate(), ParameterError);
    CHECK_THROWS_AS(AlignmentGraph(3, {{0, 1, 1, a}, {0, 1, 1, a}, {1, 2, 1, a}}).validate(), ParameterError);
    CHECK_THROWS_AS(AlignmentGraph(3, {{0, 1, 1, a}, {1, 3, 1, a}}).validate(), ParameterError);
    CHECK_THROWS_AS(AlignmentGraph(3, {{0, 1, 0, a}, {1, 2, 1, a}}).validate(), ParameterError);
    CHECK_THROWS_AS(AlignmentGraph(3, {{0, 1, 1, 7.0}, {1, 2, 1, a}}).validate(), ParameterError);
    CHECK_THROWS_AS(AlignmentGraph(4, {{0, 1, 1, a}, {1, 2, 1, a}}).validate(), ParameterError);
    CHECK_THROWS_AS(AlignmentGraph(3, {{1, 0, 1, a}, {1, 2, 1, a}}).validate(), ParameterError);
}

TEST_CASE("W_k entries") {
    const AlignmentGraph g(2, {{0, 1, 1.0, kPi / 2}});
    const auto w2 = build_wk(g, 2);
    CHECK(std::abs(w2.entry(0, 1) - Complex(-1, 0)) < 1e-15);
    CHECK(std::abs(w2.entry(1, 0) - Complex(-1, 0)) < 1e-15);

    const AlignmentGraph r = oracle::random_graph(60, 120, 4);
    const auto w0 = build_wk(r, 0);
    for (const auto& e : r.edges()) {
        CHECK(w0.entry(e.i, e.j).imag() == 0.0);
        CHECK(w0.entry(e.i, e.j).real() == e.weight);
    }
    for (int k : {1, 3, 7}) {
        const Eigen::MatrixXcd d = build_wk(r, k).to_dense();
        CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("degrees") {
    const AlignmentGraph tri(3, {{0, 1, 1, 0.3}, {0, 2, 2, 1.0}, {1, 2, 3, 2.0}});
    const auto d = degrees(tri);
    CHECK(d == std::vector<double>{3, 4, 5});

    // Same degrees through the moduli of any frequency.
    const AlignmentGraph r = oracle::random_graph(50, 80, 9);
    const auto deg = degrees(r);
    for (int k : {1, 5}) {
        const Eigen::MatrixXcd w = build_wk(r, k).to_dense();
        for (Eigen::Index i = 0; i < w.rows(); ++i)
            CHECK(w.row(i).cwiseAbs().sum() == doctest::Approx(deg[static_cast<std::size_t>(i)]).epsilon(1e-14));
    }
    CHECK_THROWS_AS(degrees(AlignmentGraph(3, {{0, 1, 1, 0.0}})), ZeroDegreeError);
}

TEST_CASE("S_k: closed form and dense oracle") {
    const AlignmentGraph two(2, {{0, 1, 1.0, 0.0}});
    const Eigen::MatrixXcd s = build_sk(two, 1).to_dense();
    CHECK(std::abs(s(0, 1) - Complex(1, 0)) < 1e-15);
    CHECK(std::abs(s(0, 0)) == 0.0);

    const AlignmentGraph r = oracle::random_graph(150, 400, 21);
    for (int k = 0; k <= 10; ++k) {
        const Eigen::MatrixXcd mine = build_sk(r, k).to_dense();
        const Eigen::MatrixXcd ref = oracle::dense_sk(r, k);
        CHECK((mine - ref).cwiseAbs().maxCoeff() < 1e-14);
        const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(ref, Eigen::EigenvaluesOnly).eigenvalues();
        CHECK(ev.maxCoeff() <= 1 + 1e-10);
        CHECK(ev.minCoeff() >= -1 - 1e-10);
    }
}

TEST_CASE("S_0 has top eigenvalue 1 with eigenvector proportional to sqrt(deg)") {
    const AlignmentGraph r = oracle::random_graph(80, 150, 2);
    const auto deg = degrees(r);
    const auto s = build_sk(r, 0);
    std::vector<Complex> x(r.size()), y(r.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sqrt(deg[i]);
    spmv(s, x, y, Execution::Serial);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(y[i] - x[i]) < 1e-12);
}

TEST_CASE("spmv: serial matches dense product and parallel is bitwise identical") {
    const AlignmentGraph r = oracle::random_graph(500, 3000, 8);
    const auto s = build_sk(r, 3);
    std::vector<Complex> x(r.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = Complex(std::sin(0.3 * i), std::cos(1.7 * i));
    std::vector<Complex> ys(x.size()), yp(x.size());
    spmv_serial(s, x, ys);
    const int before = worker_count();
    set_worker_count(4);
    spmv_parallel(s, x, yp);
    set_worker_count(before);
    CHECK(ys == yp);
    const Eigen::VectorXcd ref = oracle::dense_sk(r, 3) * Eigen::Map<Eigen::VectorXcd>(x.data(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(ys[i] - ref(static_cast<Eigen::Index>(i))) < 1e-13);
}
