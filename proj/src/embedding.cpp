#include "mfvdm/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mfvdm/error.hpp"

namespace mfvdm {

namespace {

using Ix = Eigen::Index;

double integer_power(double base, int exponent) {
    double out = 1.0;
    for (int e = 0; e < exponent; ++e) out *= base;
    return out;
}

double normalize(double affinity, double self_i, double self_j) {
    return std::clamp(affinity / std::sqrt(self_i * self_j), -1.0, 1.0);
}

// Affinity of node i against every node, written into row[0..n).
// Same per-element arithmetic as EmbeddingSet::affinity.
void affinity_row(const EmbeddingSet& emb, std::size_t i, std::vector<double>& row, std::vector<double>& acc_re,
                  std::vector<double>& acc_im) {
    const std::size_t n = emb.size();
    std::fill(row.begin(), row.end(), 0.0);
    const bool linear = emb.kind() == EmbeddingKind::DiffusionMap;
    for (const FrequencyFeatures& f : emb.features()) {
        std::fill(acc_re.begin(), acc_re.end(), 0.0);
        std::fill(acc_im.begin(), acc_im.end(), 0.0);
        for (Ix l = 0; l < static_cast<Ix>(f.m()); ++l) {
            const double ar = f.re(static_cast<Ix>(i), l);
            const double ai = f.im(static_cast<Ix>(i), l);
            const double* br = f.re.col(l).data();
            const double* bi = f.im.col(l).data();
            double* cr = acc_re.data();
            double* ci = acc_im.data();
            for (std::size_t j = 0; j < n; ++j) {
                cr[j] += ar * br[j] + ai * bi[j];
                ci[j] += ai * br[j] - ar * bi[j];
            }
        }
        if (linear) {
            for (std::size_t j = 0; j < n; ++j) row[j] += acc_re[j];
        } else {
            for (std::size_t j = 0; j < n; ++j) row[j] += acc_re[j] * acc_re[j] + acc_im[j] * acc_im[j];
        }
    }
}

void select_row(const EmbeddingSet& emb, std::size_t i, std::size_t kappa, std::vector<double>& row,
                std::vector<std::pair<double, Ix>>& order, NeighborList& out) {
    const std::size_t n = emb.size();
    const double self_i = emb.self_affinity(i);
    order.clear();
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double d2 = std::max(0.0, 2.0 - 2.0 * normalize(row[j], self_i, emb.self_affinity(j)));
        order.emplace_back(d2, static_cast<Ix>(j));
    }
    const auto kth = order.begin() + static_cast<std::ptrdiff_t>(kappa);
    std::nth_element(order.begin(), kth, order.end());
    std::sort(order.begin(), kth);
    for (std::size_t r = 0; r < kappa; ++r) {
        out.ids[i * kappa + r] = order[r].second;
        out.distances[i * kappa + r] = order[r].first;
    }
}

}  // namespace

Complex FrequencyFeatures::value(std::size_t i, std::size_t l) const {
    return {re(static_cast<Ix>(i), static_cast<Ix>(l)), im(static_cast<Ix>(i), static_cast<Ix>(l))};
}

Complex FrequencyFeatures::inner(std::size_t i, std::size_t j) const {
    double sr = 0.0;
    double si = 0.0;
    const auto ii = static_cast<Ix>(i);
    const auto jj = static_cast<Ix>(j);
    for (Ix l = 0; l < re.cols(); ++l) {
        const double ar = re(ii, l);
        const double ai = im(ii, l);
        const double br = re(jj, l);
        const double bi = im(jj, l);
        sr += ar * br + ai * bi;
        si += ai * br - ar * bi;
    }
    return {sr, si};
}

FrequencyFeatures build_features(const SpectralBundle& bundle, int t) {
    if (t < 1) throw ParameterError("build_features: diffusion time t must be >= 1");
    FrequencyFeatures f;
    f.k = bundle.k;
    f.t = t;
    const Ix n = bundle.vectors.rows();
    const Ix m = bundle.vectors.cols();
    f.re.resize(n, m);
    f.im.resize(n, m);
    for (Ix l = 0; l < m; ++l) {
        const double scale = integer_power(bundle.eigenvalues[static_cast<std::size_t>(l)], t);
        for (Ix r = 0; r < n; ++r) {
            f.re(r, l) = scale * bundle.vectors(r, l).real();
            f.im(r, l) = scale * bundle.vectors(r, l).imag();
        }
    }
    return f;
}

double affinity_k(const FrequencyFeatures& features, std::size_t i, std::size_t j) {
    if (i >= features.n() || j >= features.n()) throw ParameterError("affinity_k: index out of range");
    return std::norm(features.inner(i, j));
}

EmbeddingSet::EmbeddingSet(EmbeddingKind kind, std::vector<FrequencyFeatures> features)
    : kind_(kind), features_(std::move(features)) {
    if (features_.empty()) throw ParameterError("EmbeddingSet: no frequency features");
    n_ = features_.front().n();
    for (const auto& f : features_)
        if (f.n() != n_) throw ParameterError("EmbeddingSet: frequency features disagree on node count");
    if (kind_ == EmbeddingKind::DiffusionMap && features_.size() != 1)
        throw ParameterError("EmbeddingSet: diffusion-map embedding takes exactly one feature block");
    self_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) self_[i] = affinity(i, i);
}

int EmbeddingSet::k_max() const {
    int k = 0;
    for (const auto& f : features_) k = std::max(k, f.k);
    return k;
}

double EmbeddingSet::affinity(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw ParameterError("affinity: index out of range");
    double total = 0.0;
    for (const auto& f : features_) {
        const Complex z = f.inner(i, j);
        if (kind_ == EmbeddingKind::DiffusionMap)
            total += z.real();
        else
            total += z.real() * z.real() + z.imag() * z.imag();
    }
    return total;
}

double EmbeddingSet::norm(std::size_t i) const { return std::sqrt(self_[i]); }

EmbeddingSet EmbeddingSet::select(const std::vector<int>& ks) const {
    std::vector<FrequencyFeatures> picked;
    for (int k : ks) {
        auto it = std::find_if(features_.begin(), features_.end(), [k](const auto& f) { return f.k == k; });
        if (it == features_.end()) throw ParameterError("EmbeddingSet::select: frequency " + std::to_string(k) + " absent");
        picked.push_back(*it);
    }
    return EmbeddingSet(kind_, std::move(picked));
}

EmbeddingSet build_embedding(const std::vector<SpectralBundle>& bundles, int t) {
    std::vector<FrequencyFeatures> features;
    features.reserve(bundles.size());
    for (const auto& b : bundles) {
        if (b.k < 1) throw ParameterError("build_embedding: MFVDM frequencies start at k = 1");
        features.push_back(build_features(b, t));
    }
    return EmbeddingSet(EmbeddingKind::MultiFrequency, std::move(features));
}

EmbeddingSet baseline_embedding(const SpectralBundle& bundle, int t) {
    if (bundle.k == 0) return EmbeddingSet(EmbeddingKind::DiffusionMap, {build_features(bundle, t)});
    if (bundle.k == 1) return EmbeddingSet(EmbeddingKind::MultiFrequency, {build_features(bundle, t)});
    throw ParameterError("baseline_embedding: expects the k = 0 (DM) or k = 1 (VDM) bundle");
}

double mfvdm_affinity(const EmbeddingSet& emb, std::size_t i, std::size_t j) { return emb.affinity(i, j); }

double normalized_affinity(const EmbeddingSet& emb, std::size_t i, std::size_t j) {
    const double a = emb.affinity(i, j);
    if (!(emb.self_affinity(i) > 0.0)) throw DegenerateEmbeddingError(i);
    if (!(emb.self_affinity(j) > 0.0)) throw DegenerateEmbeddingError(j);
    if (i == j) return 1.0;
    return normalize(a, emb.self_affinity(i), emb.self_affinity(j));
}

double mfvdm_distance(const EmbeddingSet& emb, std::size_t i, std::size_t j) {
    return std::max(0.0, 2.0 - 2.0 * normalized_affinity(emb, i, j));
}

NeighborList nn_search(const EmbeddingSet& emb, std::size_t kappa, Execution exec) {
    const std::size_t n = emb.size();
    if (kappa == 0 || kappa >= n)
        throw ParameterError("nn_search: need 1 <= kappa < n (kappa=" + std::to_string(kappa) +
                             ", n=" + std::to_string(n) + ")");
    for (std::size_t i = 0; i < n; ++i)
        if (!(emb.self_affinity(i) > 0.0)) throw DegenerateEmbeddingError(i);

    NeighborList out;
    out.n = n;
    out.kappa = kappa;
    out.ids.resize(n * kappa);
    out.distances.resize(n * kappa);

    const bool parallel = exec == Execution::Parallel;
#pragma omp parallel if (parallel)
    {
        std::vector<double> row(n), acc_re(n), acc_im(n);
        std::vector<std::pair<double, Ix>> order;
        order.reserve(n);
#pragma omp for schedule(dynamic, 8)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
            affinity_row(emb, static_cast<std::size_t>(i), row, acc_re, acc_im);
            select_row(emb, static_cast<std::size_t>(i), kappa, row, order, out);
        }
    }
    return out;
}

}  // namespace mfvdm
