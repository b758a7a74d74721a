// Command-line front end: generate, embed, nn, align, pipeline, spectrum.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "mfvdm/io.hpp"
#include "mfvdm/kernels.hpp"
#include "mfvdm/pipeline.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kIo = 2, kNumerical = 3 };

int exit_code(mfvdm::ErrorKind kind) {
    switch (kind) {
        case mfvdm::ErrorKind::Config: return kConfig;
        case mfvdm::ErrorKind::Io: return kIo;
        case mfvdm::ErrorKind::Numerical: return kNumerical;
    }
    return kNumerical;
}

// Flags shared by every subcommand. Only flags the user actually passed are
// forwarded, so a config file value survives unless overridden.
struct Flags {
    std::string config;
    std::map<std::string, std::string> given;
};

void add_flag(CLI::App* sub, Flags& flags, const std::string& name, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(
        name, [&flags, key](const std::string& v) { flags.given[key] = v; }, help);
}

void add_common(CLI::App* sub, Flags& flags) {
    sub->add_option("--config", flags.config, "key = value configuration file");
    add_flag(sub, flags, "--seed", "seed", "master RNG seed");
    add_flag(sub, flags, "--p", "p", "edge retention probability, comma list allowed");
    add_flag(sub, flags, "--kmax", "k_max", "largest angular frequency");
    add_flag(sub, flags, "--mk", "m_k", "eigenvectors kept per frequency");
    add_flag(sub, flags, "--t", "t", "diffusion time");
    add_flag(sub, flags, "--kappa", "kappa_search", "neighbors returned per node");
    add_flag(sub, flags, "--manifold", "manifold", "sphere | torus | external");
    add_flag(sub, flags, "--graph", "graph", "read the alignment graph from this file");
    add_flag(sub, flags, "--out", "out_dir", "output directory");
    add_flag(sub, flags, "--workers", "workers", "OpenMP threads (0 = runtime default)");
    add_flag(sub, flags, "--baselines", "baselines", "comma list of dm, vdm");
    add_flag(sub, flags, "--n", "n", "number of samples");
    add_flag(sub, flags, "--kappa-build", "kappa_build", "clean graph neighbor count");
    add_flag(sub, flags, "--fft-length", "fft_length", "zero-padded FFT length for alignment");
    add_flag(sub, flags, "--ks", "spectrum_ks", "frequencies examined by spectrum");
}

mfvdm::ExperimentConfig resolve(const Flags& flags) {
    mfvdm::ExperimentConfig cfg;
    if (!flags.config.empty()) {
        std::string text;
        try {
            text = mfvdm::read_text(flags.config);
        } catch (const mfvdm::IoError& e) {
            throw mfvdm::ParameterError(std::string("cannot read config file: ") + e.what());
        }
        cfg.apply(mfvdm::parse_config_text(text));
    }
    cfg.apply(flags.given);
    if (!cfg.graph_path.empty() && !flags.given.count("manifold") && flags.config.empty()) cfg.manifold = "external";
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-frequency vector diffusion maps"};
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "suppress progress lines");

    Flags flags;
    std::map<std::string, CLI::App*> subs;
    for (const char* name : {"generate", "embed", "nn", "align", "pipeline", "spectrum"}) {
        const std::map<std::string, std::string> help = {
            {"generate", "sample a manifold and write clean and rewired graphs"},
            {"embed", "compute and cache the eigenvector bundles"},
            {"nn", "nearest neighbor search"},
            {"align", "nearest neighbors plus in-plane angle estimates"},
            {"pipeline", "full run over every noise level with baselines and reports"},
            {"spectrum", "eigenvalue clusters against the sphere asymptotics"}};
        CLI::App* sub = app.add_subcommand(name, help.at(name));
        add_common(sub, flags);
        subs[name] = sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    mfvdm::RunLog log;
    if (!quiet) log.sink = [](const std::string& line) { std::cerr << line << '\n'; };

    try {
        const mfvdm::ExperimentConfig cfg = [&] {
            try {
                return resolve(flags);
            } catch (const mfvdm::Error& e) {
                throw mfvdm::StageError("config", e);
            }
        }();
        if (cfg.workers > 0) mfvdm::set_worker_count(cfg.workers);

        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "generate") {
            mfvdm::cmd_generate(cfg, log);
        } else if (cmd == "embed") {
            mfvdm::cmd_embed(cfg, log);
        } else if (cmd == "nn") {
            mfvdm::cmd_nn(cfg, log);
        } else if (cmd == "align") {
            mfvdm::cmd_align(cfg, log);
        } else if (cmd == "pipeline") {
            mfvdm::cmd_pipeline(cfg, log);
        } else if (cmd == "spectrum") {
            mfvdm::cmd_spectrum(cfg, log);
        }
        log.info("eigensolves: " + std::to_string(log.solves) + ", cache hits: " + std::to_string(log.cache_hits));
        return kOk;
    } catch (const mfvdm::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return kNumerical;
    }
}
