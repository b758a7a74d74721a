#include "mfvdm/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_map>

#include "mfvdm/error.hpp"
#include "mfvdm/rng.hpp"

namespace mfvdm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::Matrix3d quaternion_to_matrix(double w, double x, double y, double z) {
    Eigen::Matrix3d r;
    r << 1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w),  //
        2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w),    //
        2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y);
    return r;
}

std::uint64_t edge_key(Index a, Index b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

std::vector<RotationSample> sample_so3_uniform(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw ParameterError("sample_so3_uniform: n must be >= 1");
    std::vector<RotationSample> out(n);
    for (std::size_t s = 0; s < n; ++s) {
        // Normalized 4D Gaussian = Haar-uniform unit quaternion.
        CounterRng rng = CounterRng::stream(seed, "so3", s);
        double q[4];
        double norm = 0.0;
        do {
            norm = 0.0;
            for (double& c : q) {
                c = rng.normal();
                norm += c * c;
            }
        } while (norm < 1e-20);
        norm = std::sqrt(norm);
        out[s].matrix = quaternion_to_matrix(q[0] / norm, q[1] / norm, q[2] / norm, q[3] / norm);
    }
    return out;
}

double optimal_inplane_angle(const Eigen::Matrix3d& ri, const Eigen::Matrix3d& rj) {
    const Eigen::Matrix2d q = (ri.transpose() * rj).topLeftCorner<2, 2>();
    const double c = q(0, 0) + q(1, 1);
    const double s = q(1, 0) - q(0, 1);
    if (std::hypot(c, s) < 1e-12) throw NumericalError("optimal_inplane_angle: degenerate alignment (antipodal views)");
    return wrap_2pi(std::atan2(s, c));
}

Eigen::Vector3d torus_point(const TorusGeometry& geom, double u, double v) {
    const double ring = geom.major_radius + geom.minor_radius * std::cos(u);
    return {ring * std::cos(v), ring * std::sin(v), geom.minor_radius * std::sin(u)};
}

std::vector<TorusSample> sample_torus_uniform(std::size_t n, const TorusGeometry& geom, std::uint64_t seed,
                                              TorusSampling mode) {
    if (n == 0) throw ParameterError("sample_torus_uniform: n must be >= 1");
    if (!(geom.minor_radius > 0.0) || !(geom.major_radius > geom.minor_radius))
        throw ParameterError("sample_torus_uniform: requires R > r > 0");
    std::vector<TorusSample> out(n);
    const double bound = geom.major_radius + geom.minor_radius;
    for (std::size_t s = 0; s < n; ++s) {
        CounterRng rng = CounterRng::stream(seed, "torus", s);
        double u = 0.0;
        for (;;) {
            u = kTwoPi * rng.uniform();
            if (mode == TorusSampling::ParameterUniform) break;
            // Area element is proportional to R + r cos(u).
            if (rng.uniform() * bound < geom.major_radius + geom.minor_radius * std::cos(u)) break;
        }
        const double v = kTwoPi * rng.uniform();
        out[s] = TorusSample{u, v, torus_point(geom, u, v), kTwoPi * rng.uniform()};
    }
    return out;
}

GroundTruth GroundTruth::sphere(std::vector<RotationSample> rotations) {
    GroundTruth t;
    t.manifold_ = Manifold::Sphere;
    t.rotations_ = std::move(rotations);
    return t;
}

GroundTruth GroundTruth::torus(std::vector<TorusSample> samples, TorusGeometry geom) {
    GroundTruth t;
    t.manifold_ = Manifold::Torus;
    t.torus_ = std::move(samples);
    t.geom_ = geom;
    return t;
}

std::size_t GroundTruth::size() const {
    return manifold_ == Manifold::Sphere ? rotations_.size() : torus_.size();
}

double GroundTruth::alpha(std::size_t i, std::size_t j) const {
    if (i >= size() || j >= size()) throw ParameterError("GroundTruth::alpha: index out of range");
    if (i == j) return 0.0;
    if (manifold_ == Manifold::Sphere) return optimal_inplane_angle(rotations_[i].matrix, rotations_[j].matrix);
    return wrap_2pi(torus_[i].frame_angle - torus_[j].frame_angle);
}

double GroundTruth::geodesic(std::size_t i, std::size_t j) const {
    if (i >= size() || j >= size()) throw ParameterError("geodesic_distance: index out of range");
    if (i == j) return 0.0;
    if (manifold_ == Manifold::Sphere) {
        const double dot = rotations_[i].view().dot(rotations_[j].view());
        return std::acos(std::clamp(dot, -1.0, 1.0));
    }
    const double du = wrap_pi(torus_[i].u - torus_[j].u);
    const double dv = wrap_pi(torus_[i].v - torus_[j].v);
    const double r = geom_.minor_radius;
    const double big_r = geom_.major_radius;
    return std::sqrt(r * r * du * du + big_r * big_r * dv * dv);
}

double GroundTruth::max_geodesic() const {
    if (manifold_ == Manifold::Sphere) return kPi;
    return kPi * std::hypot(geom_.minor_radius, geom_.major_radius);
}

double geodesic_distance(const GroundTruth& truth, std::size_t i, std::size_t j) { return truth.geodesic(i, j); }

AlignmentGraph build_clean_knn_graph(const GroundTruth& truth, std::size_t kappa, Execution exec) {
    const std::size_t n = truth.size();
    if (kappa == 0 || kappa >= n)
        throw ParameterError("build_clean_knn_graph: need 1 <= kappa < n (kappa=" + std::to_string(kappa) +
                             ", n=" + std::to_string(n) + ")");

    std::vector<std::vector<Index>> nearest(n);
    auto row = [&](std::size_t i, std::vector<std::pair<double, Index>>& scratch) {
        scratch.clear();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) scratch.emplace_back(truth.geodesic(i, j), static_cast<Index>(j));
        std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(kappa), scratch.end());
        std::sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(kappa));
        nearest[i].resize(kappa);
        for (std::size_t r = 0; r < kappa; ++r) nearest[i][r] = scratch[r].second;
    };

    const bool parallel = exec == Execution::Parallel;
#pragma omp parallel if (parallel)
    {
        std::vector<std::pair<double, Index>> scratch;
        scratch.reserve(n);
#pragma omp for schedule(dynamic, 16)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) row(static_cast<std::size_t>(i), scratch);
    }

    std::vector<std::uint64_t> keys;
    keys.reserve(n * kappa);
    for (std::size_t i = 0; i < n; ++i)
        for (Index j : nearest[i]) keys.push_back(edge_key(static_cast<Index>(i), j));
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    std::vector<Edge> edges;
    edges.reserve(keys.size());
    for (std::uint64_t key : keys) {
        const auto a = static_cast<Index>(key >> 32);
        const auto b = static_cast<Index>(key & 0xffffffffULL);
        edges.push_back(Edge{a, b, 1.0, truth.alpha(a, b)});
    }
    AlignmentGraph g(n, std::move(edges));
    g.validate();
    return g;
}

RewireResult rewire_graph(const AlignmentGraph& graph, double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("rewire_graph: p must lie in [0, 1]");
    const std::size_t n = graph.size();
    RewireResult result;

    std::unordered_map<std::uint64_t, Edge> live;
    live.reserve(graph.edge_count() * 2);
    std::vector<std::size_t> degree(n, 0);
    for (const Edge& e : graph.edges()) {
        live.emplace(edge_key(e.i, e.j), e);
        ++degree[e.i];
        ++degree[e.j];
    }

    CounterRng rng = CounterRng::stream(seed, "rewire");
    auto connected = [&](Index a, Index b) { return live.count(edge_key(a, b)) != 0; };

    for (const Edge& e : graph.edges()) {
        if (rng.uniform() < p) {
            ++result.kept;
            continue;
        }
        live.erase(edge_key(e.i, e.j));
        --degree[e.i];
        --degree[e.j];

        // Candidates: every v other than i, the dropped endpoint j, and i's current neighbors.
        const std::size_t candidates = n - 2 - degree[e.i];
        if (candidates == 0) {
            ++result.skipped;
            continue;
        }
        Index target = 0;
        if (candidates * 4 >= n) {
            do {
                target = static_cast<Index>(rng.below(n));
            } while (target == e.i || target == e.j || connected(e.i, target));
        } else {
            std::uint64_t pick = rng.below(candidates);
            for (Index v = 0; v < n; ++v) {
                if (v == e.i || v == e.j || connected(e.i, v)) continue;
                if (pick-- == 0) {
                    target = v;
                    break;
                }
            }
        }
        const double angle = kTwoPi * rng.uniform();
        const Edge fresh = oriented_edge(e.i, target, e.weight, angle);
        live.emplace(edge_key(fresh.i, fresh.j), fresh);
        ++degree[e.i];
        ++degree[target];
        ++result.rewired;
    }

    if (n >= 2) {
        for (Index v = 0; v < n; ++v) {
            if (degree[v] != 0) continue;
            Index target = static_cast<Index>(rng.below(n - 1));
            if (target >= v) ++target;
            const Edge fresh = oriented_edge(v, target, 1.0, kTwoPi * rng.uniform());
            live.emplace(edge_key(fresh.i, fresh.j), fresh);
            ++degree[v];
            ++degree[target];
            ++result.repaired;
        }
    }

    std::vector<Edge> edges;
    edges.reserve(live.size());
    for (const auto& kv : live) edges.push_back(kv.second);
    result.graph = AlignmentGraph(n, std::move(edges));
    return result;
}

}  // namespace mfvdm
