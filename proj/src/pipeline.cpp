#include "mfvdm/pipeline.hpp"

#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <sstream>

#include "mfvdm/graph_core.hpp"
#include "mfvdm/io.hpp"
#include "mfvdm/kernels.hpp"
#include "mfvdm/rng.hpp"

namespace mfvdm {

namespace fs = std::filesystem;

namespace {

template <typename F>
auto in_stage(const std::string& stage, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(stage, e);
    } catch (const std::filesystem::filesystem_error& e) {
        throw StageError(stage, IoError(e.what()));
    }
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

nlohmann::ordered_json report_json(const EvalReport& r) {
    nlohmann::ordered_json j;
    j["count"] = r.values.size();
    j["mean"] = r.mean;
    j["median"] = r.median;
    j["unscored"] = r.unscored;
    return j;
}

EigenOptions eigen_options(const ExperimentConfig& cfg) {
    EigenOptions opt;
    opt.tol = cfg.eig_tol;
    opt.dense_threshold = cfg.dense_threshold;
    opt.seed = derive_seed(cfg.seed, "eigen");
    return opt;
}

AlignmentGraph input_graph(const ExperimentConfig& cfg, const Dataset* data) {
    if (!cfg.graph_path.empty()) return in_stage("load", [&] { return read_graph(cfg.graph_path); });
    return in_stage("generate", [&] { return noisy_graph(cfg, data->clean, cfg.p.front()).graph; });
}

std::optional<Dataset> maybe_dataset(const ExperimentConfig& cfg) {
    if (cfg.manifold == "external") return std::nullopt;
    return in_stage("generate", [&] { return generate_dataset(cfg); });
}

void write_method_outputs(const fs::path& dir, const MethodResult& res) {
    write_text(dir / ("nn_" + res.method + ".csv"), neighbors_csv(res.neighbors));
    if (!res.alignments.empty()) write_text(dir / ("align_" + res.method + ".csv"), alignment_csv(res.alignments));
    if (res.nn_report) write_text(dir / ("nn_hist_" + res.method + ".csv"), histogram_csv(res.nn_report->histogram));
    if (res.alignment_report)
        write_text(dir / ("align_hist_" + res.method + ".csv"), histogram_csv(res.alignment_report->histogram));
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, const std::string& name) { return mix64(seed ^ mix64(hash_name(name))); }

void RunLog::info(const std::string& line) const {
    if (sink) sink(line);
}

std::string p_dir_name(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "p_%g", p);
    return buf;
}

Dataset generate_dataset(const ExperimentConfig& cfg) {
    cfg.validate();
    Dataset d;
    if (cfg.manifold == "sphere") {
        d.truth = GroundTruth::sphere(sample_so3_uniform(cfg.n, derive_seed(cfg.seed, "so3")));
    } else if (cfg.manifold == "torus") {
        const TorusGeometry geom{cfg.torus_major, cfg.torus_minor};
        const auto mode = cfg.torus_sampling == "parameter" ? TorusSampling::ParameterUniform : TorusSampling::AreaUniform;
        d.truth = GroundTruth::torus(sample_torus_uniform(cfg.n, geom, derive_seed(cfg.seed, "torus"), mode), geom);
    } else {
        throw ParameterError("generate: manifold '" + cfg.manifold + "' has no synthetic generator");
    }
    d.clean = build_clean_knn_graph(d.truth, cfg.kappa_build);
    if (cfg.weights == "gaussian") {
        const GroundTruth& truth = d.truth;
        d.clean = with_gaussian_weights(d.clean, [&truth](std::size_t i, std::size_t j) { return truth.geodesic(i, j); },
                                        cfg.sigma);
    }
    return d;
}

RewireResult noisy_graph(const ExperimentConfig& cfg, const AlignmentGraph& clean, double p) {
    return rewire_graph(clean, p, derive_seed(cfg.seed, "rewire:" + format_double(p)));
}

fs::path cache_dir(const ExperimentConfig& cfg) {
    if (const char* env = std::getenv("MFVDM_CACHE_DIR"); env != nullptr && *env != '\0') return fs::path(env);
    return fs::path(cfg.out_dir) / "cache";
}

std::vector<SpectralBundle> compute_bundles(const AlignmentGraph& graph, const std::vector<int>& ks, std::size_t m,
                                            const ExperimentConfig& cfg, RunLog& log) {
    const fs::path dir = cache_dir(cfg);
    ensure_dir(dir);
    const std::string hash = hex64(graph_hash(graph));
    const EigenOptions opt = eigen_options(cfg);

    std::vector<SpectralBundle> out(ks.size());
    std::vector<fs::path> paths(ks.size());
    std::vector<std::ptrdiff_t> missing;
    for (std::size_t a = 0; a < ks.size(); ++a) {
        paths[a] = dir / ("bundle_" + hash + "_k" + std::to_string(ks[a]) + "_m" + std::to_string(m) + ".bin");
        if (fs::exists(paths[a])) {
            out[a] = read_bundle(paths[a]);
            ++log.cache_hits;
            log.info("cache hit: k=" + std::to_string(ks[a]) + " m=" + std::to_string(m));
        } else {
            missing.push_back(static_cast<std::ptrdiff_t>(a));
        }
    }

    ParallelErrors errors;
    std::vector<std::string> failures(ks.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(missing.size()); ++idx) {
        const auto a = static_cast<std::size_t>(missing[static_cast<std::size_t>(idx)]);
        errors.capture([&] {
            try {
                SpectralBundle b = top_eigenpairs(build_sk(graph, ks[a]), m, opt);
                b.k = ks[a];
                out[a] = std::move(b);
            } catch (const ConvergenceError& e) {
                throw ConvergenceError("frequency k=" + std::to_string(ks[a]) + ": " + e.what(), e.worst_residual());
            }
        });
    }
    errors.rethrow();

    for (std::ptrdiff_t a : missing) {
        const auto s = static_cast<std::size_t>(a);
        write_bundle(paths[s], out[s]);
        ++log.solves;
        log.info("solved: k=" + std::to_string(ks[s]) + " m=" + std::to_string(m) +
                 " residual=" + format_double(out[s].max_residual));
    }
    return out;
}

std::vector<MethodResult> run_methods(const ExperimentConfig& cfg, const AlignmentGraph& graph,
                                      const GroundTruth* truth, RunLog& log, bool align) {
    std::vector<int> ks;
    for (int k = 1; k <= cfg.k_max; ++k) ks.push_back(k);
    const auto bundles = in_stage("embed", [&] { return compute_bundles(graph, ks, cfg.m_k, cfg, log); });

    std::vector<MethodResult> results;
    auto run_one = [&](const std::string& method, const EmbeddingSet& emb, bool with_alignment) {
        MethodResult res;
        res.method = method;
        res.neighbors = in_stage("nn", [&] { return nn_search(emb, cfg.kappa_search); });
        if (with_alignment)
            res.alignments = in_stage("align", [&] { return align_neighbors(emb, res.neighbors, cfg.fft_length); });
        if (truth != nullptr) {
            in_stage("score", [&] {
                res.nn_report = score_nn(res.neighbors, *truth, method);
                if (with_alignment) res.alignment_report = score_alignment(res.alignments, *truth, method);
            });
        }
        log.info("method " + method + " done");
        results.push_back(std::move(res));
    };

    run_one("mfvdm", in_stage("embed", [&] { return build_embedding(bundles, cfg.t); }), align);
    if (cfg.wants_baseline("vdm"))
        run_one("vdm", in_stage("embed", [&] { return baseline_embedding(bundles.front(), cfg.t); }), align);
    if (cfg.wants_baseline("dm")) {
        const auto dm = in_stage("embed", [&] { return compute_bundles(graph, {0}, cfg.m_k, cfg, log); });
        run_one("dm", in_stage("embed", [&] { return baseline_embedding(dm.front(), cfg.t); }), false);
    }
    return results;
}

void cmd_generate(const ExperimentConfig& cfg, RunLog& log) {
    in_stage("config", [&] { cfg.validate(); });
    const fs::path out(cfg.out_dir);
    in_stage("io", [&] { ensure_dir(out); });
    const Dataset data = in_stage("generate", [&] { return generate_dataset(cfg); });
    in_stage("io", [&] {
        write_truth(out / "truth.txt", data.truth);
        write_graph(out / "graph_clean.txt", data.clean);
    });
    log.info("clean graph: " + std::to_string(data.clean.edge_count()) + " edges");
    for (double p : cfg.p) {
        if (p >= 1.0) continue;
        const RewireResult noisy = in_stage("generate", [&] { return noisy_graph(cfg, data.clean, p); });
        in_stage("io", [&] { write_graph(out / ("graph_" + p_dir_name(p) + ".txt"), noisy.graph); });
        log.info(p_dir_name(p) + ": kept " + std::to_string(noisy.kept) + ", rewired " + std::to_string(noisy.rewired) +
                 ", skipped " + std::to_string(noisy.skipped) + ", repaired " + std::to_string(noisy.repaired));
    }
}

std::vector<SpectralBundle> cmd_embed(const ExperimentConfig& cfg, RunLog& log) {
    in_stage("config", [&] { cfg.validate(); });
    const fs::path out(cfg.out_dir);
    in_stage("io", [&] { ensure_dir(out); });
    const auto data = cfg.graph_path.empty() ? maybe_dataset(cfg) : std::nullopt;
    const AlignmentGraph graph = input_graph(cfg, data ? &*data : nullptr);

    std::vector<int> ks;
    if (cfg.wants_baseline("dm")) ks.push_back(0);
    for (int k = 1; k <= cfg.k_max; ++k) ks.push_back(k);
    auto bundles = in_stage("embed", [&] { return compute_bundles(graph, ks, cfg.m_k, cfg, log); });

    std::string csv = "k,index,lambda\n";
    for (const auto& b : bundles)
        for (std::size_t l = 0; l < b.m(); ++l)
            csv += std::to_string(b.k) + "," + std::to_string(l) + "," + format_double(b.eigenvalues[l]) + "\n";
    in_stage("io", [&] { write_text(out / "eigenvalues.csv", csv); });
    return bundles;
}

namespace {

void nn_or_align(const ExperimentConfig& cfg, RunLog& log, bool align) {
    in_stage("config", [&] { cfg.validate(); });
    const fs::path out(cfg.out_dir);
    in_stage("io", [&] { ensure_dir(out); });
    const auto data = maybe_dataset(cfg);
    const AlignmentGraph graph = input_graph(cfg, data ? &*data : nullptr);
    // Scoring against synthetic truth only makes sense for the generated graph.
    const GroundTruth* truth = (data && (cfg.graph_path.empty() || data->truth.size() == graph.size())) ? &data->truth
                                                                                                       : nullptr;
    const auto results = run_methods(cfg, graph, truth, log, align);
    in_stage("io", [&] {
        for (const auto& res : results) {
            write_text(out / ("nn_" + res.method + ".csv"), neighbors_csv(res.neighbors));
            if (align && !res.alignments.empty())
                write_text(out / ("align_" + res.method + ".csv"), alignment_csv(res.alignments));
        }
    });
}

}  // namespace

void cmd_nn(const ExperimentConfig& cfg, RunLog& log) { nn_or_align(cfg, log, false); }

void cmd_align(const ExperimentConfig& cfg, RunLog& log) { nn_or_align(cfg, log, true); }

void cmd_pipeline(const ExperimentConfig& cfg, RunLog& log) {
    in_stage("config", [&] { cfg.validate(); });
    const fs::path out(cfg.out_dir);
    in_stage("io", [&] { ensure_dir(out); });
    const auto data = maybe_dataset(cfg);
    if (data) {
        in_stage("io", [&] {
            write_truth(out / "truth.txt", data->truth);
            write_graph(out / "graph_clean.txt", data->clean);
        });
    }

    const std::vector<double> levels = cfg.graph_path.empty() ? cfg.p : std::vector<double>{1.0};
    for (double p : levels) {
        const fs::path dir = out / p_dir_name(p);
        in_stage("io", [&] { ensure_dir(dir); });
        nlohmann::ordered_json rewire;
        AlignmentGraph graph;
        if (!cfg.graph_path.empty()) {
            graph = in_stage("load", [&] { return read_graph(cfg.graph_path); });
        } else {
            const RewireResult noisy = in_stage("generate", [&] { return noisy_graph(cfg, data->clean, p); });
            rewire["kept"] = noisy.kept;
            rewire["rewired"] = noisy.rewired;
            rewire["skipped"] = noisy.skipped;
            rewire["repaired"] = noisy.repaired;
            graph = noisy.graph;
            in_stage("io", [&] { write_graph(dir / "graph.txt", graph); });
        }
        const GroundTruth* truth = data && data->truth.size() == graph.size() ? &data->truth : nullptr;
        const auto results = run_methods(cfg, graph, truth, log, true);
        in_stage("io", [&] {
            for (const auto& res : results) {
                write_method_outputs(dir, res);
                nlohmann::ordered_json rep;
                rep["method"] = res.method;
                rep["p"] = p;
                rep["config"] = cfg.to_json();
                rep["edges"] = graph.edge_count();
                if (!rewire.empty()) rep["rewire"] = rewire;
                if (res.nn_report) rep["nn"] = report_json(*res.nn_report);
                if (res.alignment_report) {
                    auto a = report_json(*res.alignment_report);
                    a["median_abs_error_deg"] = res.alignment_report->median;
                    a["fraction_within_10deg"] = res.alignment_report->fraction_within(10.0);
                    rep["alignment"] = a;
                }
                write_text(dir / ("report_" + res.method + ".json"), rep.dump(2) + "\n");
            }
        });
        log.info(p_dir_name(p) + " done");
    }
}

std::vector<SpectralReport> cmd_spectrum(const ExperimentConfig& cfg, RunLog& log) {
    in_stage("config", [&] {
        cfg.validate();
        if (cfg.manifold != "sphere") throw ParameterError("spectrum: unsupported manifold '" + cfg.manifold + "'");
    });
    const fs::path out(cfg.out_dir);
    in_stage("io", [&] { ensure_dir(out); });
    const Dataset data = in_stage("generate", [&] { return generate_dataset(cfg); });

    std::vector<SpectralReport> reports;
    for (double p : cfg.p) {
        const fs::path dir = out / p_dir_name(p);
        in_stage("io", [&] { ensure_dir(dir); });
        const AlignmentGraph graph = in_stage("generate", [&] { return noisy_graph(cfg, data.clean, p).graph; });
        const auto bundles =
            in_stage("embed", [&] { return compute_bundles(graph, cfg.spectrum_ks, cfg.spectrum_m, cfg, log); });
        for (const auto& b : bundles) {
            SpectralReport rep =
                in_stage("spectrum", [&] { return spectral_report(b, cfg.kappa_build, cfg.n, Manifold::Sphere); });
            nlohmann::ordered_json j;
            j["k"] = rep.k;
            j["p"] = p;
            j["h"] = rep.h;
            j["config"] = cfg.to_json();
            nlohmann::ordered_json clusters = nlohmann::ordered_json::array();
            for (std::size_t c = 0; c < rep.clusters.size(); ++c) {
                const auto& cl = rep.clusters[c];
                clusters.push_back({{"size", cl.size},
                                    {"mean", cl.mean},
                                    {"spread", cl.spread},
                                    {"range", cl.range},
                                    {"complete", cl.complete},
                                    {"theory_multiplicity", rep.theory_multiplicities[c]},
                                    {"theory_value", rep.theory_laplacian[c]}});
            }
            j["clusters"] = clusters;
            j["leading_relative_gap"] = rep.leading_relative_gap;
            j["leading_correction"] = rep.leading_correction;
            j["theory_correction"] = rep.theory_correction;
            in_stage("io", [&] {
                write_text(dir / ("spectrum_k" + std::to_string(rep.k) + ".csv"), spectrum_csv(rep));
                write_text(dir / ("spectrum_k" + std::to_string(rep.k) + ".json"), j.dump(2) + "\n");
            });
            reports.push_back(std::move(rep));
        }
    }
    return reports;
}

}  // namespace mfvdm
