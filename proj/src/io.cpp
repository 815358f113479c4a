#include "polylab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace polylab {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

static std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "geometry") {
            cfg.geometry = val;
        } else if (key == "body") {
            cfg.body = val;
        } else if (key == "weight_phi") {
            cfg.weight_phi = val;
        } else if (key == "weight_psi") {
            cfg.weight_psi = val;
        } else if (key == "hilbert_domain") {
            cfg.hilbert_domain = val;
        } else if (key == "dual_j") {
            cfg.dual_j = std::stoi(val);
        } else if (key == "replications") {
            cfg.replications = std::stoi(val);
        } else if (key == "workers") {
            cfg.workers = std::stoi(val);
        } else if (key == "hilbert_grid_alpha") {
            cfg.hilbert_grid_alpha = std::stoi(val);
        } else if (key == "hilbert_grid_s") {
            cfg.hilbert_grid_s = std::stoi(val);
        } else if (key == "hilbert_direction_m") {
            cfg.hilbert_direction_m = std::stoi(val);
        } else if (key == "schema_version") {
            if (val != kSchemaVersion)
                throw std::invalid_argument("config schema_version " + val + " unsupported (expected "
                                            + kSchemaVersion + ")");
        } else if (key == "n_grid") {
            cfg.n_grid.clear();
            std::istringstream ns(val);
            std::string tok;
            while (std::getline(ns, tok, ',')) cfg.n_grid.push_back(std::stoi(trim(tok)));
        } else {
            throw std::invalid_argument("unknown config key: " + key);
        }
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string records_csv(const ExperimentResult& r) {
    std::ostringstream os;
    os << "geometry,body,weight_phi,weight_psi,n,rep,seed,psi_value,hull_vertices\n";
    for (const auto& rec : r.records) {
        os << r.config.geometry << ',' << r.config.body << ',' << r.phi_id << ',' << r.psi_id << ','
           << rec.n << ',' << rec.rep << ',' << rec.seed << ',' << format_double(rec.psi_value) << ','
           << rec.hull_vertices << '\n';
    }
    return os.str();
}

std::string summary_json(const ExperimentResult& r) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["geometry"] = r.config.geometry;
    j["body"] = r.config.body;
    j["weight_phi"] = r.phi_id;
    j["weight_psi"] = r.psi_id;
    j["seed"] = r.config.master_seed;
    j["replications"] = r.config.replications;
    nlohmann::json per = nlohmann::json::array();
    for (const auto& p : r.summary.per_n) {
        per.push_back({{"n", p.n},
                       {"mean", p.mean},
                       {"var", p.variance},
                       {"ks", p.ks},
                       {"skew", p.skewness},
                       {"kurt", p.excess_kurtosis},
                       {"w1", p.w1}});
    }
    j["per_n"] = per;
    j["global"] = {{"deficit_slope", r.summary.deficit.slope},
                   {"deficit_intercept", r.summary.deficit.intercept},
                   {"deficit_residual", r.summary.deficit.residual},
                   {"variance_slope", r.summary.variance.slope},
                   {"variance_intercept", r.summary.variance.intercept},
                   {"variance_residual", r.summary.variance.residual},
                   {"limit_rhs", r.summary.limit_rhs},
                   {"limit_empirical", r.summary.limit_empirical},
                   {"discarded", r.summary.discarded}};
    return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

}  // namespace polylab
