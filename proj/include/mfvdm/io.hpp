#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mfvdm/alignment.hpp"
#include "mfvdm/evaluation.hpp"
#include "mfvdm/graph.hpp"
#include "mfvdm/manifold.hpp"
#include "mfvdm/spectral.hpp"

namespace mfvdm {

/// Shortest decimal that round-trips a double (17 significant digits).
std::string format_double(double v);

/// Edge-list text: a header line "n <count>" then one "i j w alpha" line per
/// undirected edge, 0-based, i < j, alpha in radians in [0, 2*pi).
std::string graph_to_text(const AlignmentGraph& graph);
AlignmentGraph graph_from_text(const std::string& text);
void write_graph(const std::filesystem::path& path, const AlignmentGraph& graph);
AlignmentGraph read_graph(const std::filesystem::path& path);
/// FNV-1a over the canonical edge-list text.
std::uint64_t graph_hash(const AlignmentGraph& graph);

/// Ground truth text: "sphere <n>" followed by 9 row-major rotation entries per
/// line, or "torus <n> <R> <r>" followed by "u v frame_angle" per line.
void write_truth(const std::filesystem::path& path, const GroundTruth& truth);
GroundTruth read_truth(const std::filesystem::path& path);

/// Little-endian binary dump: magic "MFVDMSB1", k (i32), n, m (u64), m
/// eigenvalues, then n*m complex entries column-major (re, im pairs).
void write_bundle(const std::filesystem::path& path, const SpectralBundle& bundle);
SpectralBundle read_bundle(const std::filesystem::path& path);

std::string neighbors_csv(const NeighborList& neighbors);
std::string alignment_csv(const std::vector<PairAlignment>& pairs);
std::string histogram_csv(const Histogram& h);
std::string spectrum_csv(const SpectralReport& report);

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

}  // namespace mfvdm
