#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mfvdm {

using Index = std::uint32_t;

/// Wrap an angle into [0, 2*pi).
double wrap_2pi(double angle);
/// Wrap an angle into [-pi, pi).
double wrap_pi(double angle);

/// Undirected edge stored with i < j. The reverse direction carries the same
/// weight and the angle -alpha (mod 2*pi).
struct Edge {
    Index i;
    Index j;
    double weight;
    double alpha;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected weighted graph carrying an SO(2) angle on every edge.
///
/// Edges are kept sorted by (i, j). Construction does not validate; call
/// validate() (or use the factory helpers, which do) before handing the graph
/// to the spectral machinery.
class AlignmentGraph {
public:
    AlignmentGraph() = default;
    AlignmentGraph(std::size_t n, std::vector<Edge> edges);

    std::size_t size() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t edge_count() const { return edges_.size(); }

    /// Throws ParameterError describing the first violated invariant:
    /// self-loop, i >= j orientation, duplicate, out-of-range index,
    /// non-positive weight, angle outside [0, 2*pi), isolated node.
    void validate() const;

    /// Per-node sorted neighbor lists.
    std::vector<std::vector<Index>> adjacency() const;

    friend bool operator==(const AlignmentGraph&, const AlignmentGraph&) = default;

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
};

/// Normalizes orientation (i < j, alpha negated when flipped) and sorts.
Edge oriented_edge(Index a, Index b, double weight, double alpha_ab);

}  // namespace mfvdm
