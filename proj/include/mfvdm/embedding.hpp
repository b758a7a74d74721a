#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mfvdm/graph.hpp"
#include "mfvdm/graph_core.hpp"
#include "mfvdm/kernels.hpp"
#include "mfvdm/spectral.hpp"

namespace mfvdm {

/// Compact frequency-k features phi_k(i)_l = lambda_l^t u_l(i), stored as split
/// real/imaginary n x m matrices (column l contiguous over nodes).
///
/// The rank-one m^2-dimensional map is never materialized:
/// <V_t^(k)(i), V_t^(k)(j)> = |<phi_k(i), phi_k(j)>|^2.
struct FrequencyFeatures {
    int k = 0;
    int t = 1;
    Eigen::MatrixXd re;
    Eigen::MatrixXd im;

    std::size_t n() const { return static_cast<std::size_t>(re.rows()); }
    std::size_t m() const { return static_cast<std::size_t>(re.cols()); }
    Complex value(std::size_t i, std::size_t l) const;
    /// <phi(i), phi(j)> = sum_l phi(i)_l conj(phi(j)_l)
    Complex inner(std::size_t i, std::size_t j) const;
};

FrequencyFeatures build_features(const SpectralBundle& bundle, int t);

/// |<phi_k(i), phi_k(j)>|^2, the truncated |S_k^{2t}(i,j)|^2.
double affinity_k(const FrequencyFeatures& features, std::size_t i, std::size_t j);

enum class EmbeddingKind {
    /// Sum over frequencies of squared moduli (MFVDM; VDM when only k = 1).
    MultiFrequency,
    /// Real eigenvector features of S_0 with a linear inner product (DM).
    DiffusionMap,
};

/// Concatenated per-node embedding with cached self-affinities.
class EmbeddingSet {
public:
    EmbeddingSet(EmbeddingKind kind, std::vector<FrequencyFeatures> features);

    EmbeddingKind kind() const { return kind_; }
    const std::vector<FrequencyFeatures>& features() const { return features_; }
    std::size_t size() const { return n_; }
    /// Largest frequency present.
    int k_max() const;

    /// Unnormalized affinity <V(i), V(j)>.
    double affinity(std::size_t i, std::size_t j) const;
    /// ||V(i)||^2, evaluated with the same arithmetic as affinity(i, i).
    double self_affinity(std::size_t i) const { return self_[i]; }
    double norm(std::size_t i) const;

    /// Features restricted to the listed frequencies (in the given order).
    EmbeddingSet select(const std::vector<int>& ks) const;

private:
    EmbeddingKind kind_;
    std::vector<FrequencyFeatures> features_;
    std::size_t n_ = 0;
    std::vector<double> self_;
};

/// MFVDM embedding from bundles for k = 1..k_max.
EmbeddingSet build_embedding(const std::vector<SpectralBundle>& bundles, int t);

/// DM baseline (bundle at k = 0) or VDM baseline (bundle at k = 1).
EmbeddingSet baseline_embedding(const SpectralBundle& bundle, int t);

double mfvdm_affinity(const EmbeddingSet& emb, std::size_t i, std::size_t j);
/// Affinity divided by the product of norms; 1 on the diagonal.
double normalized_affinity(const EmbeddingSet& emb, std::size_t i, std::size_t j);
/// Squared distance 2 - 2 N_t(i, j).
double mfvdm_distance(const EmbeddingSet& emb, std::size_t i, std::size_t j);

/// Per node, the kappa nearest other nodes by ascending squared distance
/// (ties to the lower index).
struct NeighborList {
    std::size_t n = 0;
    std::size_t kappa = 0;
    std::vector<Index> ids;         ///< row-major n x kappa
    std::vector<double> distances;  ///< squared distances, same layout

    Index neighbor(std::size_t i, std::size_t rank) const { return ids[i * kappa + rank]; }
    double distance(std::size_t i, std::size_t rank) const { return distances[i * kappa + rank]; }
};

NeighborList nn_search(const EmbeddingSet& emb, std::size_t kappa, Execution exec = Execution::Parallel);

}  // namespace mfvdm
