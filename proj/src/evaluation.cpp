#include "mfvdm/evaluation.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <numeric>

#include "mfvdm/error.hpp"

namespace mfvdm {

namespace {
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
}

std::size_t Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

Histogram make_histogram(const std::vector<double>& values, double lo, double hi, std::size_t bins) {
    if (bins == 0 || !(hi > lo)) throw ParameterError("make_histogram: need bins > 0 and hi > lo");
    Histogram h;
    h.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b)
        h.edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
    h.counts.assign(bins, 0);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (double v : values) {
        auto b = static_cast<std::ptrdiff_t>(std::floor((v - lo) / width));
        b = std::clamp<std::ptrdiff_t>(b, 0, static_cast<std::ptrdiff_t>(bins) - 1);
        ++h.counts[static_cast<std::size_t>(b)];
    }
    return h;
}

double mean_of(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double median_of(std::vector<double> values) {
    if (values.empty()) return 0.0;
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double EvalReport::fraction_within(double limit) const {
    if (values.empty()) return 0.0;
    const auto inside = std::count_if(values.begin(), values.end(), [limit](double v) { return std::abs(v) <= limit; });
    return static_cast<double>(inside) / static_cast<double>(values.size());
}

EvalReport score_nn(const NeighborList& neighbors, const GroundTruth& truth, const std::string& method) {
    if (neighbors.n != truth.size()) throw ParameterError("score_nn: neighbor list and ground truth disagree on n");
    EvalReport r;
    r.method = method;
    r.values.reserve(neighbors.ids.size());
    for (std::size_t i = 0; i < neighbors.n; ++i)
        for (std::size_t rank = 0; rank < neighbors.kappa; ++rank)
            r.values.push_back(truth.geodesic(i, neighbors.neighbor(i, rank)));
    r.histogram = make_histogram(r.values, 0.0, truth.max_geodesic(), 50);
    r.mean = mean_of(r.values);
    r.median = median_of(r.values);
    return r;
}

EvalReport score_alignment(const std::vector<PairAlignment>& estimates, const GroundTruth& truth,
                           const std::string& method) {
    EvalReport r;
    r.method = method;
    r.values.reserve(estimates.size());
    for (const auto& pa : estimates) {
        double truth_alpha = 0.0;
        try {
            truth_alpha = truth.alpha(pa.i, pa.j);
        } catch (const NumericalError&) {
            ++r.unscored;
            continue;
        }
        r.values.push_back(wrap_pi(truth_alpha - pa.estimate.alpha) * kRadToDeg);
    }
    r.histogram = make_histogram(r.values, -180.0, 180.0, 72);
    r.mean = mean_of(r.values);
    std::vector<double> magnitudes(r.values.size());
    std::transform(r.values.begin(), r.values.end(), magnitudes.begin(), [](double v) { return std::abs(v); });
    r.median = median_of(std::move(magnitudes));
    return r;
}

double theoretical_eigenvalue(int k, int l, double h) {
    if (k < 1 || l < 1) throw ParameterError("theoretical_eigenvalue: need k >= 1 and l >= 1");
    if (!(h > 0.0 && h <= 2.0)) throw ParameterError("theoretical_eigenvalue: cap parameter h must lie in (0, 2]");
    const double c = static_cast<double>(k + (l - 1) * (l + 2 * k));
    return 0.5 * h - c * h * h / 8.0;
}

int theoretical_multiplicity(int k, int l) { return 2 * (l + k) - 1; }

std::vector<EigenCluster> detect_clusters(const std::vector<double>& ascending) {
    std::vector<EigenCluster> clusters;
    if (ascending.empty()) return clusters;
    double scale = 0.0;
    for (double v : ascending) scale = std::max(scale, std::abs(v));
    std::vector<double> gaps;
    for (std::size_t a = 1; a < ascending.size(); ++a) gaps.push_back(ascending[a] - ascending[a - 1]);
    const double threshold = gaps.empty() ? 0.0 : std::max(4.0 * median_of(gaps), 1e-8 * scale);

    auto close = [&](EigenCluster c, std::size_t end, bool complete) {
        c.size = end - c.start;
        c.complete = complete;
        double sum = 0.0;
        for (std::size_t a = c.start; a < end; ++a) sum += ascending[a];
        c.mean = sum / static_cast<double>(c.size);
        double var = 0.0;
        for (std::size_t a = c.start; a < end; ++a) var += (ascending[a] - c.mean) * (ascending[a] - c.mean);
        c.spread = std::sqrt(var / static_cast<double>(c.size));
        c.range = ascending[end - 1] - ascending[c.start];
        clusters.push_back(c);
    };

    EigenCluster current;
    for (std::size_t a = 1; a < ascending.size(); ++a) {
        if (gaps[a - 1] > threshold) {
            close(current, a, true);
            current = EigenCluster{};
            current.start = a;
        }
    }
    close(current, ascending.size(), false);
    return clusters;
}

std::vector<std::size_t> SpectralReport::complete_sizes() const {
    std::vector<std::size_t> out;
    for (const auto& c : clusters)
        if (c.complete) out.push_back(c.size);
    return out;
}

double SpectralReport::worst_spread_to_gap(std::size_t count) const {
    double worst = 0.0;
    for (std::size_t c = 0; c < std::min(count, clusters.size()); ++c) {
        double gap = std::numeric_limits<double>::infinity();
        if (c + 1 < clusters.size()) gap = clusters[c + 1].mean - clusters[c].mean;
        if (c > 0) gap = std::min(gap, clusters[c].mean - clusters[c - 1].mean);
        worst = std::max(worst, clusters[c].spread / gap);
    }
    return worst;
}

SpectralReport spectral_report(const SpectralBundle& bundle, std::size_t kappa_build, std::size_t n,
                               Manifold manifold) {
    if (manifold != Manifold::Sphere) throw ParameterError("spectral_report: unsupported manifold (sphere only)");
    if (n == 0 || kappa_build == 0 || kappa_build >= n) throw ParameterError("spectral_report: need 0 < kappa < n");
    if (bundle.k < 1) throw ParameterError("spectral_report: frequency must be >= 1");

    SpectralReport rep;
    rep.k = bundle.k;
    rep.h = 2.0 * static_cast<double>(kappa_build) / static_cast<double>(n);
    for (double lam : bundle.eigenvalues) rep.laplacian_values.push_back(1.0 - lam);
    std::sort(rep.laplacian_values.begin(), rep.laplacian_values.end());
    rep.clusters = detect_clusters(rep.laplacian_values);

    for (std::size_t c = 0; c < rep.clusters.size(); ++c) {
        const int l = static_cast<int>(c) + 1;
        rep.theory_multiplicities.push_back(theoretical_multiplicity(rep.k, l));
        if (rep.h <= 2.0) rep.theory_laplacian.push_back(1.0 - theoretical_eigenvalue(rep.k, l, rep.h) / (0.5 * rep.h));
    }
    const double lambda1 = 1.0 - rep.clusters.front().mean;
    rep.leading_correction = lambda1 - 1.0;
    rep.theory_correction = -static_cast<double>(rep.k) * rep.h / 4.0;
    if (rep.clusters.size() >= 2) {
        const double lambda2 = 1.0 - rep.clusters[1].mean;
        rep.leading_relative_gap = (lambda1 - lambda2) / lambda1;
    }
    return rep;
}

}  // namespace mfvdm
