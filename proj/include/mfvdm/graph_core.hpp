#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "mfvdm/graph.hpp"

namespace mfvdm {

using Complex = std::complex<double>;

/// Hermitian matrix in CSR form with both triangles present. The lower
/// triangle is written as the exact conjugate of the upper one at build time,
/// so entry(j,i) == conj(entry(i,j)) holds bitwise. The diagonal is empty.
class SparseHermitian {
public:
    SparseHermitian() = default;

    /// Builds from upper-triangle triplets (i < j); mirrors each into the lower triangle.
    static SparseHermitian from_upper(std::size_t n, const std::vector<Edge>& pattern,
                                      const std::vector<Complex>& upper_values);

    std::size_t size() const { return n_; }
    std::size_t nonzeros() const { return values_.size(); }

    const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
    const std::vector<Index>& cols() const { return cols_; }
    const std::vector<Complex>& values() const { return values_; }

    /// Stored value or zero.
    Complex entry(std::size_t i, std::size_t j) const;

    Eigen::MatrixXcd to_dense() const;

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> row_ptr_;
    std::vector<Index> cols_;
    std::vector<Complex> values_;
};

using DegreeVector = std::vector<double>;

/// W_k(i,j) = w_ij exp(i k alpha_ij) on edges. k = 0 gives the scalar weight matrix.
SparseHermitian build_wk(const AlignmentGraph& graph, int k);

/// Per-node sum of incident weights; throws ZeroDegreeError on an isolated node.
DegreeVector degrees(const AlignmentGraph& graph);

/// S_k = D^{-1/2} W_k D^{-1/2}.
SparseHermitian build_sk(const AlignmentGraph& graph, int k);

/// Replaces edge weights with exp(-d_ij^2 / sigma) for a caller-supplied distance.
AlignmentGraph with_gaussian_weights(const AlignmentGraph& graph,
                                     const std::function<double(std::size_t, std::size_t)>& distance, double sigma);

}  // namespace mfvdm
