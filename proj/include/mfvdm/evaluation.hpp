#pragma once

#include <string>
#include <vector>

#include "mfvdm/alignment.hpp"
#include "mfvdm/embedding.hpp"
#include "mfvdm/manifold.hpp"
#include "mfvdm/spectral.hpp"

namespace mfvdm {

struct Histogram {
    std::vector<double> edges;  ///< bins + 1 edges
    std::vector<std::size_t> counts;

    std::size_t total() const;
};

/// Uniform bins over [lo, hi]; values outside are clamped into the end bins.
Histogram make_histogram(const std::vector<double>& values, double lo, double hi, std::size_t bins);

double mean_of(const std::vector<double>& values);
double median_of(std::vector<double> values);

struct EvalReport {
    std::string method;            ///< MFVDM | VDM | DM | k<N>
    std::vector<double> values;    ///< geodesic distances (NN) or wrapped errors in degrees (alignment)
    Histogram histogram;
    double mean = 0.0;
    double median = 0.0;           ///< of values (NN) or of |values| (alignment)
    std::size_t unscored = 0;      ///< alignment pairs whose truth angle is undefined

    /// Fraction of values within [-limit, limit].
    double fraction_within(double limit) const;
};

/// Geodesic distance of every (node, neighbor) pair; 50 bins over [0, max range].
EvalReport score_nn(const NeighborList& neighbors, const GroundTruth& truth, const std::string& method);

/// Signed wrapped errors alpha_ij - alpha_hat_ij in degrees; 72 bins over [-180, 180].
EvalReport score_alignment(const std::vector<PairAlignment>& estimates, const GroundTruth& truth,
                           const std::string& method);

/// Two-term small-cap expansion h/2 - (k + (l-1)(l+2k)) h^2 / 8.
double theoretical_eigenvalue(int k, int l, double h);
/// 2(l + k) - 1
int theoretical_multiplicity(int k, int l);

struct EigenCluster {
    std::size_t start = 0;
    std::size_t size = 0;
    double mean = 0.0;
    double spread = 0.0;   ///< standard deviation of the members
    double range = 0.0;    ///< max - min
    bool complete = true;  ///< false for a cluster cut off by the end of the list
};

/// Splits ascending values into clusters at every consecutive gap larger than
/// four times the median consecutive gap (never below 1e-8 of the largest
/// magnitude, so exactly degenerate lists stay whole).
std::vector<EigenCluster> detect_clusters(const std::vector<double>& ascending);

struct SpectralReport {
    int k = 0;
    double h = 0.0;                       ///< cap parameter 2 kappa / n
    std::vector<double> laplacian_values; ///< 1 - lambda, ascending
    std::vector<EigenCluster> clusters;
    std::vector<int> theory_multiplicities;     ///< per cluster index l = 1, 2, ...
    std::vector<double> theory_laplacian;       ///< 1 - lambda_l(h)/(h/2) per cluster
    double leading_relative_gap = 0.0;          ///< (lambda_1 - lambda_2) / lambda_1 over cluster means
    double leading_correction = 0.0;            ///< lambda_1 - 1 (numerical)
    double theory_correction = 0.0;             ///< -k h / 4

    std::vector<std::size_t> complete_sizes() const;
    /// Largest ratio of within-cluster spread to the smaller distance between
    /// its mean and an adjacent cluster mean, over the first `count` clusters.
    double worst_spread_to_gap(std::size_t count) const;
};

SpectralReport spectral_report(const SpectralBundle& bundle, std::size_t kappa_build, std::size_t n,
                               Manifold manifold);

}  // namespace mfvdm
