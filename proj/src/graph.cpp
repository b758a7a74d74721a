#include "mfvdm/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mfvdm/error.hpp"

namespace mfvdm {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string edge_name(const Edge& e) {
    return "(" + std::to_string(e.i) + "," + std::to_string(e.j) + ")";
}
}  // namespace

double wrap_2pi(double angle) {
    double r = std::fmod(angle, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    // fmod of a tiny negative can round back up to exactly 2*pi.
    if (r >= kTwoPi) r = 0.0;
    return r;
}

double wrap_pi(double angle) {
    double r = wrap_2pi(angle + std::numbers::pi) - std::numbers::pi;
    return r;
}

Edge oriented_edge(Index a, Index b, double weight, double alpha_ab) {
    if (a < b) return Edge{a, b, weight, wrap_2pi(alpha_ab)};
    return Edge{b, a, weight, wrap_2pi(-alpha_ab)};
}

AlignmentGraph::AlignmentGraph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
}

void AlignmentGraph::validate() const {
    if (n_ == 0) throw ParameterError("graph has no nodes");
    std::vector<std::size_t> degree(n_, 0);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const Edge& edge = edges_[e];
        if (edge.i >= n_ || edge.j >= n_) throw ParameterError("edge " + edge_name(edge) + " index out of range");
        if (edge.i == edge.j) throw ParameterError("self-loop at node " + std::to_string(edge.i));
        if (edge.i > edge.j) throw ParameterError("edge " + edge_name(edge) + " not stored with i < j");
        if (e > 0 && edges_[e - 1].i == edge.i && edges_[e - 1].j == edge.j)
            throw ParameterError("duplicate edge " + edge_name(edge));
        if (!(edge.weight > 0.0) || !std::isfinite(edge.weight))
            throw ParameterError("edge " + edge_name(edge) + " has non-positive weight");
        if (!(edge.alpha >= 0.0 && edge.alpha < kTwoPi))
            throw ParameterError("edge " + edge_name(edge) + " angle outside [0, 2pi)");
        ++degree[edge.i];
        ++degree[edge.j];
    }
    for (std::size_t v = 0; v < n_; ++v)
        if (degree[v] == 0) throw ParameterError("node " + std::to_string(v) + " is isolated");
}

std::vector<std::vector<Index>> AlignmentGraph::adjacency() const {
    std::vector<std::vector<Index>> adj(n_);
    for (const Edge& e : edges_) {
        adj[e.i].push_back(e.j);
        adj[e.j].push_back(e.i);
    }
    for (auto& list : adj) std::sort(list.begin(), list.end());
    return adj;
}

}  // namespace mfvdm
