#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "mfvdm/embedding.hpp"

namespace mfvdm {

/// z(k) = <phi_k(i), phi_k(j)> for k = 1..k_max, stored at index k - 1.
/// Frequencies absent from the embedding contribute zero.
struct AlignmentSequence {
    std::size_t i = 0;
    std::size_t j = 0;
    std::vector<Complex> z;
};

struct AngleEstimate {
    double alpha = 0.0;      ///< in [0, 2*pi)
    double objective = 0.0;  ///< interpolated peak of Re sum_k z(k) exp(-i k alpha)
    std::size_t grid = 0;    ///< FFT length T
};

AlignmentSequence alignment_sequence(const EmbeddingSet& emb, std::size_t i, std::size_t j);

/// Maximizes f(alpha) = Re sum_k z(k) exp(-i k alpha) on a zero-padded
/// length-T FFT grid, then refines the peak with a 3-point parabola.
/// Holds the FFT plan and buffers; one instance per thread.
class AngleEstimator {
public:
    explicit AngleEstimator(std::size_t grid);
    ~AngleEstimator();
    AngleEstimator(const AngleEstimator&) = delete;
    AngleEstimator& operator=(const AngleEstimator&) = delete;

    std::size_t grid() const { return grid_; }
    AngleEstimate estimate(const std::vector<Complex>& z);
    /// Objective samples on the grid from the last estimate() call.
    std::vector<double> last_objective() const;

private:
    struct Impl;
    std::size_t grid_;
    std::unique_ptr<Impl> impl_;
};

/// Throws ParameterError unless T is a power of two with T >= 4 k_max;
/// NumericalError when z is identically zero.
AngleEstimate estimate_angle(const AlignmentSequence& z, std::size_t grid);

struct PairAlignment {
    Index i;
    Index j;
    AngleEstimate estimate;
};

/// One estimate per (node, neighbor) entry, in neighbor-list order. Each pair is
/// evaluated in its i < j orientation and negated for the reverse direction.
std::vector<PairAlignment> align_neighbors(const EmbeddingSet& emb, const NeighborList& neighbors, std::size_t grid,
                                           Execution exec = Execution::Parallel);

}  // namespace mfvdm
