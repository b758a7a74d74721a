#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mfvdm/alignment.hpp"
#include "mfvdm/config.hpp"
#include "mfvdm/embedding.hpp"
#include "mfvdm/error.hpp"
#include "mfvdm/evaluation.hpp"
#include "mfvdm/manifold.hpp"
#include "mfvdm/spectral.hpp"

namespace mfvdm {

/// Error tagged with the pipeline stage that raised it; keeps the original kind.
class StageError : public Error {
public:
    StageError(std::string stage, const Error& cause)
        : Error(cause.kind(), "[" + stage + "] " + cause.what()), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

/// Named substream of the config seed.
std::uint64_t derive_seed(std::uint64_t seed, const std::string& name);

/// Collects log lines and counts eigensolves versus cache hits.
struct RunLog {
    std::function<void(const std::string&)> sink;
    std::size_t solves = 0;
    std::size_t cache_hits = 0;
    void info(const std::string& line) const;
};

struct Dataset {
    GroundTruth truth;
    AlignmentGraph clean;
};

Dataset generate_dataset(const ExperimentConfig& cfg);
RewireResult noisy_graph(const ExperimentConfig& cfg, const AlignmentGraph& clean, double p);

/// Bundle cache directory: $MFVDM_CACHE_DIR if set, else <out>/cache.
std::filesystem::path cache_dir(const ExperimentConfig& cfg);

/// Top-m bundles of S_k for each requested k, served from the cache when
/// present (keyed by graph hash, k, m). Frequencies are solved in parallel.
std::vector<SpectralBundle> compute_bundles(const AlignmentGraph& graph, const std::vector<int>& ks, std::size_t m,
                                            const ExperimentConfig& cfg, RunLog& log);

struct MethodResult {
    std::string method;  ///< mfvdm | vdm | dm
    NeighborList neighbors;
    std::vector<PairAlignment> alignments;  ///< empty for dm
    std::optional<EvalReport> nn_report;
    std::optional<EvalReport> alignment_report;
};

/// NN search + alignment (+ scoring when truth is given) for MFVDM and any
/// requested baselines on one graph.
std::vector<MethodResult> run_methods(const ExperimentConfig& cfg, const AlignmentGraph& graph,
                                      const GroundTruth* truth, RunLog& log, bool align = true);

/// Subcommands. Each writes its artifacts under cfg.out_dir.
void cmd_generate(const ExperimentConfig& cfg, RunLog& log);
std::vector<SpectralBundle> cmd_embed(const ExperimentConfig& cfg, RunLog& log);
void cmd_nn(const ExperimentConfig& cfg, RunLog& log);
void cmd_align(const ExperimentConfig& cfg, RunLog& log);
void cmd_pipeline(const ExperimentConfig& cfg, RunLog& log);
std::vector<SpectralReport> cmd_spectrum(const ExperimentConfig& cfg, RunLog& log);

/// Directory name for one noise level, e.g. "p_0.4".
std::string p_dir_name(double p);

}  // namespace mfvdm
