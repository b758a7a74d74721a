#include "mfvdm/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

#include "mfvdm/error.hpp"
#include "mfvdm/rng.hpp"

namespace mfvdm {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << content;
    if (!f) throw IoError("write failed for " + path.string());
}

std::string read_text(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string graph_to_text(const AlignmentGraph& graph) {
    std::string out = "n " + std::to_string(graph.size()) + "\n";
    for (const Edge& e : graph.edges()) {
        out += std::to_string(e.i);
        out += ' ';
        out += std::to_string(e.j);
        out += ' ';
        out += format_double(e.weight);
        out += ' ';
        out += format_double(e.alpha);
        out += '\n';
    }
    return out;
}

AlignmentGraph graph_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::size_t n = 0;
    bool have_header = false;
    std::vector<Edge> edges;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        if (!have_header) {
            std::string tag;
            long long count = -1;
            if (!(ls >> tag >> count) || tag != "n" || count <= 0)
                throw IoError("graph file line " + std::to_string(lineno) + ": expected header 'n <count>'");
            n = static_cast<std::size_t>(count);
            have_header = true;
            continue;
        }
        long long i = -1;
        long long j = -1;
        double w = 0.0;
        double alpha = 0.0;
        std::string extra;
        if (!(ls >> i >> j >> w >> alpha) || (ls >> extra))
            throw IoError("graph file line " + std::to_string(lineno) + ": expected 'i j w alpha'");
        if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= n || static_cast<std::size_t>(j) >= n)
            throw IoError("graph file line " + std::to_string(lineno) + ": node index out of range");
        if (i >= j)
            throw IoError("graph file line " + std::to_string(lineno) + (i == j ? ": self-loop" : ": requires i < j"));
        edges.push_back(Edge{static_cast<Index>(i), static_cast<Index>(j), w, alpha});
    }
    if (!have_header) throw IoError("graph file: missing header");
    AlignmentGraph g(n, std::move(edges));
    try {
        g.validate();
    } catch (const ParameterError& e) {
        throw IoError(std::string("graph file: ") + e.what());
    }
    return g;
}

void write_graph(const fs::path& path, const AlignmentGraph& graph) { write_text(path, graph_to_text(graph)); }

AlignmentGraph read_graph(const fs::path& path) { return graph_from_text(read_text(path)); }

std::uint64_t graph_hash(const AlignmentGraph& graph) { return hash_name(graph_to_text(graph)); }

void write_truth(const fs::path& path, const GroundTruth& truth) {
    std::string out;
    if (truth.manifold() == Manifold::Sphere) {
        out = "sphere " + std::to_string(truth.size()) + "\n";
        for (const auto& r : truth.rotations()) {
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    out += format_double(r.matrix(a, b));
                    out += (a == 2 && b == 2) ? '\n' : ' ';
                }
        }
    } else {
        const auto& g = truth.torus_geometry();
        out = "torus " + std::to_string(truth.size()) + " " + format_double(g.major_radius) + " " +
              format_double(g.minor_radius) + "\n";
        for (const auto& s : truth.torus_samples())
            out += format_double(s.u) + " " + format_double(s.v) + " " + format_double(s.frame_angle) + "\n";
    }
    write_text(path, out);
}

GroundTruth read_truth(const fs::path& path) {
    std::istringstream in(read_text(path));
    std::string tag;
    std::size_t n = 0;
    if (!(in >> tag >> n) || n == 0) throw IoError("truth file " + path.string() + ": bad header");
    if (tag == "sphere") {
        std::vector<RotationSample> rots(n);
        for (auto& r : rots)
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    if (!(in >> r.matrix(a, b))) throw IoError("truth file " + path.string() + ": truncated");
        return GroundTruth::sphere(std::move(rots));
    }
    if (tag == "torus") {
        TorusGeometry g;
        if (!(in >> g.major_radius >> g.minor_radius)) throw IoError("truth file " + path.string() + ": bad header");
        std::vector<TorusSample> samples(n);
        for (auto& s : samples) {
            if (!(in >> s.u >> s.v >> s.frame_angle)) throw IoError("truth file " + path.string() + ": truncated");
            s.position = torus_point(g, s.u, s.v);
        }
        return GroundTruth::torus(std::move(samples), g);
    }
    throw IoError("truth file " + path.string() + ": unknown manifold '" + tag + "'");
}

namespace {

constexpr char kMagic[8] = {'M', 'F', 'V', 'D', 'M', 'S', 'B', '1'};

template <typename T>
void put(std::ofstream& f, const T& v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& f, const fs::path& path) {
    T v{};
    if (!f.read(reinterpret_cast<char*>(&v), sizeof(T))) throw IoError("bundle file " + path.string() + ": truncated");
    return v;
}

}  // namespace

void write_bundle(const fs::path& path, const SpectralBundle& bundle) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f.write(kMagic, sizeof kMagic);
    put<std::int32_t>(f, bundle.k);
    put<std::uint64_t>(f, bundle.n());
    put<std::uint64_t>(f, bundle.m());
    put<double>(f, bundle.max_residual);
    for (double v : bundle.eigenvalues) put<double>(f, v);
    for (Eigen::Index c = 0; c < bundle.vectors.cols(); ++c)
        for (Eigen::Index r = 0; r < bundle.vectors.rows(); ++r) {
            put<double>(f, bundle.vectors(r, c).real());
            put<double>(f, bundle.vectors(r, c).imag());
        }
    if (!f) throw IoError("write failed for " + path.string());
}

SpectralBundle read_bundle(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string());
    char magic[8];
    if (!f.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw IoError("bundle file " + path.string() + ": bad magic");
    SpectralBundle b;
    b.k = get<std::int32_t>(f, path);
    const auto n = get<std::uint64_t>(f, path);
    const auto m = get<std::uint64_t>(f, path);
    b.max_residual = get<double>(f, path);
    b.eigenvalues.resize(m);
    for (auto& v : b.eigenvalues) v = get<double>(f, path);
    b.vectors.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    for (Eigen::Index c = 0; c < b.vectors.cols(); ++c)
        for (Eigen::Index r = 0; r < b.vectors.rows(); ++r) {
            const double re = get<double>(f, path);
            const double im = get<double>(f, path);
            b.vectors(r, c) = Complex(re, im);
        }
    return b;
}

std::string neighbors_csv(const NeighborList& nl) {
    std::string out = "node,rank,neighbor,squared_distance\n";
    for (std::size_t i = 0; i < nl.n; ++i)
        for (std::size_t r = 0; r < nl.kappa; ++r)
            out += std::to_string(i) + "," + std::to_string(r) + "," + std::to_string(nl.neighbor(i, r)) + "," +
                   format_double(nl.distance(i, r)) + "\n";
    return out;
}

std::string alignment_csv(const std::vector<PairAlignment>& pairs) {
    std::string out = "i,j,alpha_hat_radians,objective_value\n";
    for (const auto& p : pairs)
        out += std::to_string(p.i) + "," + std::to_string(p.j) + "," + format_double(p.estimate.alpha) + "," +
               format_double(p.estimate.objective) + "\n";
    return out;
}

std::string histogram_csv(const Histogram& h) {
    std::string out = "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b)
        out += format_double(h.edges[b]) + "," + format_double(h.edges[b + 1]) + "," + std::to_string(h.counts[b]) + "\n";
    return out;
}

std::string spectrum_csv(const SpectralReport& rep) {
    std::string out = "index,one_minus_lambda,cluster\n";
    std::size_t cluster = 0;
    for (std::size_t a = 0; a < rep.laplacian_values.size(); ++a) {
        while (cluster + 1 < rep.clusters.size() && a >= rep.clusters[cluster + 1].start) ++cluster;
        out += std::to_string(a) + "," + format_double(rep.laplacian_values[a]) + "," + std::to_string(cluster) + "\n";
    }
    return out;
}

}  // namespace mfvdm
