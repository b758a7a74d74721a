#include "mfvdm/config.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "mfvdm/error.hpp"

namespace mfvdm {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    T out{};
    const std::string v = trim(value);
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw ParameterError("config: cannot parse '" + value + "' for key '" + key + "'");
    return out;
}

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParameterError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (key == "manifold") manifold = v;
    else if (key == "n") n = parse_number<std::size_t>(key, v);
    else if (key == "kappa_build") kappa_build = parse_number<std::size_t>(key, v);
    else if (key == "kappa_search" || key == "kappa") kappa_search = parse_number<std::size_t>(key, v);
    else if (key == "p") {
        p.clear();
        for (const auto& item : split_list(v)) p.push_back(parse_number<double>(key, item));
    } else if (key == "seed") seed = parse_number<std::uint64_t>(key, v);
    else if (key == "k_max" || key == "kmax") k_max = parse_number<int>(key, v);
    else if (key == "m_k" || key == "mk") m_k = parse_number<std::size_t>(key, v);
    else if (key == "t") t = parse_number<int>(key, v);
    else if (key == "fft_length" || key == "T") fft_length = parse_number<std::size_t>(key, v);
    else if (key == "weights") weights = v;
    else if (key == "sigma") sigma = parse_number<double>(key, v);
    else if (key == "baselines") baselines = split_list(v);
    else if (key == "out" || key == "out_dir") out_dir = v;
    else if (key == "graph") graph_path = v;
    else if (key == "workers") workers = parse_number<int>(key, v);
    else if (key == "torus_R") torus_major = parse_number<double>(key, v);
    else if (key == "torus_r") torus_minor = parse_number<double>(key, v);
    else if (key == "torus_sampling") torus_sampling = v;
    else if (key == "spectrum_ks" || key == "ks") {
        spectrum_ks.clear();
        for (const auto& item : split_list(v)) spectrum_ks.push_back(parse_number<int>(key, item));
    } else if (key == "spectrum_m") spectrum_m = parse_number<std::size_t>(key, v);
    else if (key == "eig_tol") eig_tol = parse_number<double>(key, v);
    else if (key == "dense_threshold") dense_threshold = parse_number<std::size_t>(key, v);
    else throw ParameterError("config: unknown key '" + key + "'");
}

void ExperimentConfig::apply(const std::map<std::string, std::string>& settings) {
    for (const auto& [k, v] : settings) set(k, v);
}

void ExperimentConfig::validate() const {
    if (manifold != "sphere" && manifold != "torus" && manifold != "external")
        throw ParameterError("config: manifold must be sphere, torus, or external");
    if (manifold == "external" && graph_path.empty())
        throw ParameterError("config: external manifold requires a graph path");
    if (n < 2) throw ParameterError("config: n must be >= 2");
    if (manifold != "external" && (kappa_build == 0 || kappa_build >= n))
        throw ParameterError("config: need 1 <= kappa_build < n");
    if (kappa_search == 0 || (manifold != "external" && kappa_search >= n))
        throw ParameterError("config: need 1 <= kappa_search < n");
    if (p.empty()) throw ParameterError("config: p list is empty");
    for (double v : p)
        if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("config: p must lie in [0, 1]");
    if (k_max < 1) throw ParameterError("config: k_max must be >= 1");
    if (m_k < 1) throw ParameterError("config: m_k must be >= 1");
    if (t < 1) throw ParameterError("config: t must be >= 1");
    if (!is_power_of_two(fft_length) || fft_length < 4 * static_cast<std::size_t>(k_max))
        throw ParameterError("config: fft_length must be a power of two >= 4 * k_max");
    if (weights != "unit" && weights != "gaussian") throw ParameterError("config: weights must be unit or gaussian");
    if (weights == "gaussian" && !(sigma > 0.0)) throw ParameterError("config: gaussian weights need sigma > 0");
    if (weights == "gaussian" && manifold == "external")
        throw ParameterError("config: gaussian weights need synthetic ground truth distances");
    for (const auto& b : baselines)
        if (b != "dm" && b != "vdm") throw ParameterError("config: unknown baseline '" + b + "'");
    if (workers < 0) throw ParameterError("config: workers must be >= 0");
    if (!(torus_minor > 0.0) || !(torus_major > torus_minor)) throw ParameterError("config: torus needs R > r > 0");
    if (torus_sampling != "area" && torus_sampling != "parameter")
        throw ParameterError("config: torus_sampling must be area or parameter");
    for (int k : spectrum_ks)
        if (k < 1) throw ParameterError("config: spectrum frequencies must be >= 1");
    if (spectrum_m < 2) throw ParameterError("config: spectrum_m must be >= 2");
    if (!(eig_tol > 0.0)) throw ParameterError("config: eig_tol must be > 0");
}

bool ExperimentConfig::wants_baseline(const std::string& name) const {
    return std::find(baselines.begin(), baselines.end(), name) != baselines.end();
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
    nlohmann::ordered_json j;
    j["manifold"] = manifold;
    j["n"] = n;
    j["kappa_build"] = kappa_build;
    j["kappa_search"] = kappa_search;
    j["p"] = p;
    j["seed"] = seed;
    j["k_max"] = k_max;
    j["m_k"] = m_k;
    j["t"] = t;
    j["fft_length"] = fft_length;
    j["weights"] = weights;
    j["sigma"] = sigma;
    j["baselines"] = baselines;
    j["out_dir"] = out_dir;
    j["graph"] = graph_path;
    j["workers"] = workers;
    j["torus_R"] = torus_major;
    j["torus_r"] = torus_minor;
    j["torus_sampling"] = torus_sampling;
    j["spectrum_ks"] = spectrum_ks;
    j["spectrum_m"] = spectrum_m;
    j["eig_tol"] = eig_tol;
    j["dense_threshold"] = dense_threshold;
    return j;
}

}  // namespace mfvdm
