#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mfvdm/graph_core.hpp"

namespace mfvdm {

/// Top-m eigenpairs of one S_k.
///
/// Eigenvalues are sorted descending. Each eigenvector column is gauge-fixed so
/// that its largest-modulus entry is real and positive. Members of a
/// (near-)degenerate cluster come back in no particular order or basis.
struct SpectralBundle {
    int k = 0;
    std::vector<double> eigenvalues;
    Eigen::MatrixXcd vectors;  ///< n x m, column l is u_l
    double max_residual = 0.0;

    std::size_t n() const { return static_cast<std::size_t>(vectors.rows()); }
    std::size_t m() const { return eigenvalues.size(); }
};

enum class EigenMethod { Auto, Dense, Lanczos };

struct EigenOptions {
    double tol = 1e-8;
    std::size_t dense_threshold = 500;
    EigenMethod method = EigenMethod::Auto;
    std::uint64_t seed = 0x5eed;
    /// Restart cycles; 0 means 50 * m.
    std::size_t max_restarts = 0;
    /// Krylov subspace dimension; 0 picks max(2m + 20, 3m) capped at n.
    std::size_t krylov_dim = 0;
};

/// The m algebraically largest eigenpairs of a Hermitian matrix. Uses a dense
/// Hermitian solver up to dense_threshold and thick-restart Lanczos with full
/// reorthogonalization above it. Throws ConvergenceError when the residual
/// tolerance is not met within the restart budget.
SpectralBundle top_eigenpairs(const SparseHermitian& s, std::size_t m, const EigenOptions& options = {});

/// Rotates each column so its largest-modulus entry is real positive.
void fix_phase_gauge(Eigen::MatrixXcd& vectors);

/// Max over columns of ||S u - lambda u||.
double max_residual(const SparseHermitian& s, const std::vector<double>& eigenvalues, const Eigen::MatrixXcd& vectors);

}  // namespace mfvdm
