#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace mfvdm {

/// Resolved run configuration. Defaults follow the synthetic experiments
/// (k_max = m_k = kappa_search = 50, t = 1, kappa_build = 150, n = 10^4).
struct ExperimentConfig {
    std::string manifold = "sphere";  ///< sphere | torus | external
    std::size_t n = 10000;
    std::size_t kappa_build = 150;
    std::size_t kappa_search = 50;
    std::vector<double> p = {1.0};
    std::uint64_t seed = 1;
    int k_max = 50;
    std::size_t m_k = 50;
    int t = 1;
    std::size_t fft_length = 1024;
    std::string weights = "unit";  ///< unit | gaussian
    double sigma = 0.0;
    std::vector<std::string> baselines;  ///< subset of {dm, vdm}
    std::string out_dir = "out";
    std::string graph_path;
    int workers = 0;
    double torus_major = 1.0;
    double torus_minor = 0.2;
    std::string torus_sampling = "area";  ///< area | parameter
    std::vector<int> spectrum_ks = {1, 2, 5};
    std::size_t spectrum_m = 30;
    double eig_tol = 1e-8;
    std::size_t dense_threshold = 500;

    /// Sets one field from its textual key; throws ParameterError on unknown
    /// keys or unparsable values.
    void set(const std::string& key, const std::string& value);
    /// Applies settings in order.
    void apply(const std::map<std::string, std::string>& settings);
    /// Throws ParameterError naming the first violated constraint.
    void validate() const;

    bool wants_baseline(const std::string& name) const;
    nlohmann::ordered_json to_json() const;
};

/// Parses "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> parse_config_text(const std::string& text);

}  // namespace mfvdm
