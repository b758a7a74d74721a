#include "mfvdm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <span>
#include <string>

#include "mfvdm/error.hpp"
#include "mfvdm/kernels.hpp"
#include "mfvdm/rng.hpp"

namespace mfvdm {

namespace {

using Ix = Eigen::Index;

std::span<const Complex> col_span(const Eigen::MatrixXcd& m, Ix c) {
    return {m.col(c).data(), static_cast<std::size_t>(m.rows())};
}

std::span<Complex> col_span(Eigen::MatrixXcd& m, Ix c) {
    return {m.col(c).data(), static_cast<std::size_t>(m.rows())};
}

SpectralBundle dense_top(const SparseHermitian& s, std::size_t m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(s.to_dense());
    if (solver.info() != Eigen::Success) throw ConvergenceError("dense Hermitian eigensolver failed", 0.0);
    const Ix n = static_cast<Ix>(s.size());
    SpectralBundle out;
    out.vectors.resize(n, static_cast<Ix>(m));
    for (std::size_t a = 0; a < m; ++a) {
        const Ix src = n - 1 - static_cast<Ix>(a);
        out.eigenvalues.push_back(solver.eigenvalues()(src));
        out.vectors.col(static_cast<Ix>(a)) = solver.eigenvectors().col(src);
    }
    return out;
}

// Orthogonalizes w against the first `count` columns of v (two classical
// Gram-Schmidt passes) and returns the accumulated coefficients.
Eigen::VectorXcd orthogonalize(const Eigen::MatrixXcd& v, Ix count, Eigen::VectorXcd& w) {
    Eigen::VectorXcd h = v.leftCols(count).adjoint() * w;
    w.noalias() -= v.leftCols(count) * h;
    Eigen::VectorXcd h2 = v.leftCols(count).adjoint() * w;
    w.noalias() -= v.leftCols(count) * h2;
    return h + h2;
}

void random_unit_vector(Eigen::VectorXcd& w, CounterRng& rng) {
    for (Ix r = 0; r < w.size(); ++r) w(r) = Complex(rng.normal(), rng.normal());
    w.normalize();
}

SpectralBundle lanczos_top(const SparseHermitian& s, std::size_t m, const EigenOptions& opt) {
    const Ix n = static_cast<Ix>(s.size());
    const Ix want = static_cast<Ix>(m);
    Ix kdim = opt.krylov_dim ? static_cast<Ix>(opt.krylov_dim) : std::max<Ix>(2 * want + 20, 3 * want);
    kdim = std::min(kdim, n);
    if (kdim <= want) kdim = std::min(n, want + 1);
    const std::size_t max_restarts = opt.max_restarts ? opt.max_restarts : 50 * m;

    CounterRng rng = CounterRng::stream(opt.seed, "lanczos");
    Eigen::MatrixXcd basis(n, kdim + 1);
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(kdim, kdim);
    Eigen::VectorXcd w(n);
    random_unit_vector(w, rng);
    basis.col(0) = w;

    Ix start = 0;
    double beta = 0.0;
    Eigen::MatrixXcd ritz_basis(n, kdim);
    double worst = 0.0;

    for (std::size_t cycle = 0; cycle <= max_restarts; ++cycle) {
        for (Ix j = start; j < kdim; ++j) {
            spmv(s, col_span(basis, j), std::span<Complex>(w.data(), static_cast<std::size_t>(n)), Execution::Parallel);
            Eigen::VectorXcd h = orthogonalize(basis, j + 1, w);
            for (Ix r = 0; r < j; ++r) {
                proj(r, j) = h(r);
                proj(j, r) = std::conj(h(r));
            }
            proj(j, j) = Complex(h(j).real(), 0.0);
            beta = w.norm();
            if (beta < 1e-12) {
                // Invariant subspace found: continue from a fresh orthogonal direction.
                random_unit_vector(w, rng);
                orthogonalize(basis, j + 1, w);
                w.normalize();
                beta = 0.0;
                basis.col(j + 1) = w;
            } else {
                basis.col(j + 1) = w / beta;
            }
            if (j + 1 < kdim) {
                proj(j + 1, j) = beta;
                proj(j, j + 1) = beta;
            }
        }

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> small(proj);
        // Ritz values ascending; walk from the top.
        const Eigen::VectorXd& theta = small.eigenvalues();
        const Eigen::MatrixXcd& y = small.eigenvectors();
        worst = 0.0;
        for (Ix a = 0; a < want; ++a) {
            const Ix c = kdim - 1 - a;
            worst = std::max(worst, std::abs(beta * y(kdim - 1, c)));
        }

        // Converged, exhausted budget, or the full space is spanned.
        const bool done = worst < opt.tol * 0.5 || kdim == n;
        if (done || cycle == max_restarts) {
            SpectralBundle out;
            out.vectors.resize(n, want);
            Eigen::MatrixXcd top(kdim, want);
            for (Ix a = 0; a < want; ++a) {
                top.col(a) = y.col(kdim - 1 - a);
                out.eigenvalues.push_back(theta(kdim - 1 - a));
            }
            out.vectors.noalias() = basis.leftCols(kdim) * top;
            if (!done)
            {
                char buf[96];
                std::snprintf(buf, sizeof buf, "Lanczos did not converge (worst Ritz residual %.3g)", worst);
                throw ConvergenceError(buf, worst);
            }
            return out;
        }

        // Thick restart: keep the leading Ritz vectors plus the residual direction.
        const Ix keep = std::min<Ix>(kdim - 1, want + (kdim - want) / 2);
        Eigen::MatrixXcd yk(kdim, keep);
        for (Ix a = 0; a < keep; ++a) yk.col(a) = y.col(kdim - 1 - a);
        ritz_basis.leftCols(keep).noalias() = basis.leftCols(kdim) * yk;
        basis.leftCols(keep) = ritz_basis.leftCols(keep);
        basis.col(keep) = basis.col(kdim);
        proj.setZero();
        for (Ix a = 0; a < keep; ++a) {
            proj(a, a) = theta(kdim - 1 - a);
            const Complex coupling = beta * yk(kdim - 1, a);
            proj(keep, a) = coupling;
            proj(a, keep) = std::conj(coupling);
        }
        start = keep;
    }
    throw ConvergenceError("Lanczos did not converge", worst);
}

}  // namespace

void fix_phase_gauge(Eigen::MatrixXcd& vectors) {
    for (Ix c = 0; c < vectors.cols(); ++c) {
        Ix best = 0;
        double best_mod = -1.0;
        for (Ix r = 0; r < vectors.rows(); ++r) {
            const double mod = std::abs(vectors(r, c));
            if (mod > best_mod) {
                best_mod = mod;
                best = r;
            }
        }
        if (best_mod <= 0.0) continue;
        const Complex phase = std::conj(vectors(best, c)) / best_mod;
        vectors.col(c) *= phase;
        vectors(best, c) = Complex(vectors(best, c).real(), 0.0);
    }
}

double max_residual(const SparseHermitian& s, const std::vector<double>& eigenvalues, const Eigen::MatrixXcd& vectors) {
    double worst = 0.0;
    Eigen::VectorXcd y(vectors.rows());
    for (Ix c = 0; c < vectors.cols(); ++c) {
        spmv(s, col_span(vectors, c), std::span<Complex>(y.data(), static_cast<std::size_t>(y.size())),
             Execution::Parallel);
        y -= eigenvalues[static_cast<std::size_t>(c)] * vectors.col(c);
        worst = std::max(worst, y.norm());
    }
    return worst;
}

SpectralBundle top_eigenpairs(const SparseHermitian& s, std::size_t m, const EigenOptions& options) {
    if (m == 0 || m > s.size())
        throw ParameterError("top_eigenpairs: need 1 <= m <= n (m=" + std::to_string(m) +
                             ", n=" + std::to_string(s.size()) + ")");
    const bool dense = options.method == EigenMethod::Dense ||
                       (options.method == EigenMethod::Auto && s.size() <= options.dense_threshold);
    SpectralBundle out = dense ? dense_top(s, m) : lanczos_top(s, m, options);
    fix_phase_gauge(out.vectors);
    out.max_residual = max_residual(s, out.eigenvalues, out.vectors);
    if (!dense && out.max_residual > options.tol)
        throw ConvergenceError("Lanczos residual " + std::to_string(out.max_residual) + " above tolerance",
                               out.max_residual);
    return out;
}

}  // namespace mfvdm
