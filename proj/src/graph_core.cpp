#include "mfvdm/graph_core.hpp"

#include <algorithm>
#include <cmath>

#include "mfvdm/error.hpp"

namespace mfvdm {

SparseHermitian SparseHermitian::from_upper(std::size_t n, const std::vector<Edge>& pattern,
                                            const std::vector<Complex>& upper_values) {
    SparseHermitian m;
    m.n_ = n;
    std::vector<std::size_t> counts(n + 1, 0);
    for (const Edge& e : pattern) {
        ++counts[e.i + 1];
        ++counts[e.j + 1];
    }
    for (std::size_t r = 0; r < n; ++r) counts[r + 1] += counts[r];
    m.row_ptr_ = counts;
    m.cols_.resize(counts[n]);
    m.values_.resize(counts[n]);

    // Rows are filled in column order: the edges are sorted by (i, j), so for row r
    // the entries coming from the lower triangle (edges (c, r), c < r) arrive in
    // increasing c before any entry of the upper triangle (edges (r, c), c > r).
    std::vector<std::size_t> cursor(counts.begin(), counts.end() - 1);
    std::vector<std::pair<std::size_t, std::size_t>> lower_fill;  // (row, edge index)
    lower_fill.reserve(pattern.size());
    for (std::size_t e = 0; e < pattern.size(); ++e) lower_fill.emplace_back(pattern[e].j, e);
    std::stable_sort(lower_fill.begin(), lower_fill.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [row, e] : lower_fill) {
        const std::size_t slot = cursor[row]++;
        m.cols_[slot] = pattern[e].i;
        m.values_[slot] = std::conj(upper_values[e]);
    }
    for (std::size_t e = 0; e < pattern.size(); ++e) {
        const std::size_t slot = cursor[pattern[e].i]++;
        m.cols_[slot] = pattern[e].j;
        m.values_[slot] = upper_values[e];
    }
    return m;
}

Complex SparseHermitian::entry(std::size_t i, std::size_t j) const {
    const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
    const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
    const auto it = std::lower_bound(first, last, static_cast<Index>(j));
    if (it == last || *it != j) return {0.0, 0.0};
    return values_[static_cast<std::size_t>(it - cols_.begin())];
}

Eigen::MatrixXcd SparseHermitian::to_dense() const {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t s = row_ptr_[r]; s < row_ptr_[r + 1]; ++s)
            d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols_[s])) = values_[s];
    return d;
}

SparseHermitian build_wk(const AlignmentGraph& graph, int k) {
    if (k < 0) throw ParameterError("build_wk: frequency must be >= 0");
    std::vector<Complex> vals;
    vals.reserve(graph.edge_count());
    for (const Edge& e : graph.edges()) {
        if (k == 0) {
            vals.emplace_back(e.weight, 0.0);
        } else {
            const double phase = static_cast<double>(k) * e.alpha;
            vals.push_back(e.weight * Complex(std::cos(phase), std::sin(phase)));
        }
    }
    return SparseHermitian::from_upper(graph.size(), graph.edges(), vals);
}

DegreeVector degrees(const AlignmentGraph& graph) {
    DegreeVector deg(graph.size(), 0.0);
    for (const Edge& e : graph.edges()) {
        deg[e.i] += e.weight;
        deg[e.j] += e.weight;
    }
    for (std::size_t v = 0; v < deg.size(); ++v)
        if (!(deg[v] > 0.0)) throw ZeroDegreeError(v);
    return deg;
}

SparseHermitian build_sk(const AlignmentGraph& graph, int k) {
    if (k < 0) throw ParameterError("build_sk: frequency must be >= 0");
    const DegreeVector deg = degrees(graph);
    std::vector<Complex> vals;
    vals.reserve(graph.edge_count());
    for (const Edge& e : graph.edges()) {
        const double scale = e.weight / std::sqrt(deg[e.i] * deg[e.j]);
        if (k == 0) {
            vals.emplace_back(scale, 0.0);
        } else {
            const double phase = static_cast<double>(k) * e.alpha;
            vals.push_back(scale * Complex(std::cos(phase), std::sin(phase)));
        }
    }
    return SparseHermitian::from_upper(graph.size(), graph.edges(), vals);
}

AlignmentGraph with_gaussian_weights(const AlignmentGraph& graph,
                                     const std::function<double(std::size_t, std::size_t)>& distance, double sigma) {
    if (!(sigma > 0.0)) throw ParameterError("gaussian kernel width sigma must be > 0");
    std::vector<Edge> edges = graph.edges();
    for (Edge& e : edges) {
        const double d = distance(e.i, e.j);
        e.weight = std::exp(-d * d / sigma);
    }
    AlignmentGraph out(graph.size(), std::move(edges));
    out.validate();
    return out;
}

}  // namespace mfvdm
