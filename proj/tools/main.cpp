// polylab: a simulation laboratory for random polytopes in Euclidean,
// spherical, hyperbolic and Hilbert geometries, reduced to weighted random
// polytopes in the plane.
#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "polylab/experiments.hpp"
#include "polylab/floating.hpp"
#include "polylab/io.hpp"
#include "polylab/special.hpp"
#include "polylab/stein.hpp"
#include "polylab/verify.hpp"

using namespace polylab;

namespace {

uint64_t resolve_seed(const std::optional<uint64_t>& seed, bool required, const char* mode) {
    if (seed) return *seed;
    if (required) throw CLI::ValidationError(std::string("--seed is required in ") + mode + " mode");
    const auto auto_seed =
        static_cast<uint64_t>(std::chrono::steady_clock::now().time_since_epoch().count());
    std::cerr << "note: auto-generated seed " << auto_seed << " (pass --seed to reproduce)\n";
    return auto_seed;
}

std::string out_path(const std::string& out_dir, const std::string& name) {
    std::filesystem::create_directories(out_dir);
    return (std::filesystem::path(out_dir) / name).string();
}

int run_simulate(const std::string& config_path, const ExperimentConfig& overrides,
                 const std::vector<std::string>& overridden, std::optional<uint64_t> seed,
                 int workers, const std::string& out_dir, bool repeat_check) {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : parse_config_file(config_path);
    for (const auto& key : overridden) {
        if (key == "geometry") cfg.geometry = overrides.geometry;
        if (key == "body") cfg.body = overrides.body;
        if (key == "weight-phi") cfg.weight_phi = overrides.weight_phi;
        if (key == "weight-psi") cfg.weight_psi = overrides.weight_psi;
        if (key == "hilbert-domain") cfg.hilbert_domain = overrides.hilbert_domain;
        if (key == "dual-j") cfg.dual_j = overrides.dual_j;
        if (key == "n-grid") cfg.n_grid = overrides.n_grid;
        if (key == "replications") cfg.replications = overrides.replications;
    }
    cfg.master_seed = resolve_seed(seed, false, "simulate");
    cfg.workers = workers;
    auto result = run_experiment(cfg);
    const std::string csv = records_csv(result);
    if (repeat_check) {
        const auto again = run_experiment(cfg);
        const uint64_t h1 = fnv1a64(csv), h2 = fnv1a64(records_csv(again));
        if (h1 != h2) {
            std::cerr << "nondeterminism detected in stage simulate: hash mismatch " << h1 << " vs " << h2 << "\n";
            return 1;
        }
        std::cout << "repeat-check: simulate hashes match (" << h1 << ")\n";
    }
    write_file(out_path(out_dir, "records.csv"), csv);
    write_file(out_path(out_dir, "summary.json"), summary_json(result));
    std::cout << "wrote " << out_path(out_dir, "records.csv") << " and summary.json"
              << " (deficit slope " << result.summary.deficit.slope << ", variance slope "
              << result.summary.variance.slope << ")\n";
    return 0;
}

int run_floating(const std::string& body_id, const std::string& weight_id, std::vector<double> deltas,
                 int directions, const std::string& out_dir) {
    auto K = std::make_shared<SmoothBody>(SmoothBody::parse(body_id));
    auto w = WeightFunction::parse(weight_id, K);
    FloatingBodySolver solver(K, w, directions);
    FloatingBodySolver classical(K, WeightFunction::uniform(K), directions);
    std::ostringstream csv;
    csv << "delta,wet_part_area,floating_area,sandwich_c\n";
    for (double d : deltas) {
        const auto fb = solver.floating_body(d);
        const double wet = K->proxy_area() - (fb.empty() ? 0.0 : fb.area());
        const double sandwich = weight_id == "uniform" ? 1.0 : sandwich_constant(solver, classical, d);
        csv << format_double(d) << ',' << format_double(wet) << ','
            << format_double(fb.empty() ? 0.0 : fb.area()) << ',' << format_double(sandwich) << '\n';
        std::cout << "delta=" << d << " wet=" << wet << " sandwich_c=" << sandwich << "\n";
    }
    write_file(out_path(out_dir, "floating.csv"), csv.str());
    std::cout << "wrote " << out_path(out_dir, "floating.csv") << "\n";
    return 0;
}

int run_stein(const std::string& body_id, std::vector<int> ns, int moments_reps, int recomb_reps, int tuples,
              double restriction_c, std::optional<uint64_t> seed, const std::string& out_dir, bool repeat_check) {
    const uint64_t master = resolve_seed(seed, false, "diagnose-stein");
    auto K = std::make_shared<SmoothBody>(SmoothBody::parse(body_id));
    auto uni = WeightFunction::uniform(K);
    FloatingBodySolver solver(K, uni, 240);
    const auto render = [&]() {
        std::ostringstream csv;
        csv << "n,gamma3,gamma4,gamma1,gamma2,se3,se4,se1,se2\n";
        // One region for the whole grid (nested floating bodies keep it valid).
        const auto restriction = restriction_c > 0.0
                                     ? make_wet_restriction(solver, *std::min_element(ns.begin(), ns.end()),
                                                            restriction_c)
                                     : std::nullopt;
        for (int n : ns) {
            Functional f{K, &uni, &uni, n, 0.0};
            const auto gm = gamma_moments(f, moments_reps, derive_seed(master, "stein-m", n, 0),
                                          restriction ? &*restriction : nullptr);
            const auto gr = gamma_recombination_estimates(f, recomb_reps, tuples,
                                                          derive_seed(master, "stein-r", n, 0),
                                                          restriction ? &*restriction : nullptr);
            if (gm.g3.std_error > 0.2 * gm.g3.value)
                std::cerr << "warning: gamma3 standard error above 20% of the estimate at n=" << n << "\n";
            csv << n << ',' << format_double(gm.g3.value) << ',' << format_double(gm.g4.value) << ','
                << format_double(gr.g1.value) << ',' << format_double(gr.g2.value) << ','
                << format_double(gm.g3.std_error) << ',' << format_double(gm.g4.std_error) << ','
                << format_double(gr.g1.std_error) << ',' << format_double(gr.g2.std_error) << '\n';
        }
        return csv.str();
    };
    const std::string csv = render();
    if (repeat_check) {
        const uint64_t h1 = fnv1a64(csv), h2 = fnv1a64(render());
        if (h1 != h2) {
            std::cerr << "nondeterminism detected in stage diagnose-stein: hash mismatch\n";
            return 1;
        }
        std::cout << "repeat-check: diagnose-stein hashes match (" << h1 << ")\n";
    }
    write_file(out_path(out_dir, "stein.csv"), csv);
    std::cout << "wrote " << out_path(out_dir, "stein.csv") << "\n";
    return 0;
}

int run_constants(int d, const std::string& out_dir) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["d"] = d;
    j["ball_volume"] = ball_volume(d);
    std::cout << "ball_volume(" << d << ") = " << ball_volume(d) << "\n";
    nlohmann::json bb = nlohmann::json::array(), cj = nlohmann::json::array(), ct = nlohmann::json::array();
    for (int k = 0; k <= d; ++k) {
        bb.push_back(ball_binomial(d, k));
        std::cout << "ball_binomial(" << d << "," << k << ") = " << ball_binomial(d, k) << "\n";
    }
    for (int k = 1; k <= d; ++k) {
        cj.push_back(limit_constant_c(d, k));
        ct.push_back(limit_constant_c_tilde(d, k));
        std::cout << "c(" << d << "," << k << ") = " << limit_constant_c(d, k) << "   c~(" << d << "," << k
                  << ") = " << limit_constant_c_tilde(d, k) << "\n";
    }
    j["ball_binomial"] = bb;
    j["c"] = cj;
    j["c_tilde"] = ct;
    write_file(out_path(out_dir, "constants.json"), j.dump(2) + "\n");
    std::cout << "wrote " << out_path(out_dir, "constants.json") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polylab: random polytope simulation laboratory"};
    app.require_subcommand(1);

    std::optional<uint64_t> seed;
    int workers = 0;
    std::string out_dir = ".";
    bool repeat_check = false;
    app.add_option("--seed", seed, "master seed (all randomness flows from it)");
    app.add_option("--workers", workers, "worker threads (0 = hardware)");
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--repeat-check", repeat_check, "run stochastic stages twice and compare output hashes");

    auto* sim = app.add_subcommand("simulate", "replicated weighted random polytope experiment");
    std::string config_path;
    ExperimentConfig ov;
    sim->add_option("--config", config_path, "config file (key = value)")->check(CLI::ExistingFile);
    sim->add_option("--geometry", ov.geometry, "euclidean|spherical|hyperbolic|hilbert-bu|hilbert-ht|dual");
    sim->add_option("--body", ov.body, "body id, e.g. disc:1");
    sim->add_option("--weight-phi", ov.weight_phi, "sampling weight override");
    sim->add_option("--weight-psi", ov.weight_psi, "measuring weight override");
    sim->add_option("--hilbert-domain", ov.hilbert_domain, "ambient body C for hilbert geometries");
    sim->add_option("--dual-j", ov.dual_j, "dual volume index j");
    sim->add_option("--n-grid", ov.n_grid, "sample sizes")->delimiter(',');
    sim->add_option("--replications", ov.replications, "replications per n");

    auto* flo = app.add_subcommand("floating", "floating body / wet part sweep");
    std::string flo_body = "disc:1", flo_weight = "uniform";
    std::vector<double> flo_deltas{1e-4, 1e-3, 1e-2};
    int flo_dirs = 720;
    flo->add_option("--body", flo_body, "body id");
    flo->add_option("--weight", flo_weight, "weight id");
    flo->add_option("--deltas", flo_deltas, "levels")->delimiter(',');
    flo->add_option("--directions", flo_dirs, "direction grid size");

    auto* st = app.add_subcommand("diagnose-stein", "difference-operator moment diagnostics");
    std::string st_body = "disc:1";
    std::vector<int> st_ns{128, 256, 512, 1024, 2048};
    int st_m = 2000, st_r = 200, st_tuples = 16;
    double st_c = 2.0;
    st->add_option("--body", st_body, "body id");
    st->add_option("--n-grid", st_ns, "sample sizes")->delimiter(',');
    st->add_option("--moment-replications", st_m, "replications for gamma3/gamma4");
    st->add_option("--recomb-replications", st_r, "replications per recombination tuple");
    st->add_option("--tuples", st_tuples, "sampled recombination tuples");
    st->add_option("--restriction-c", st_c, "wet-part restriction constant (0 disables)");

    auto* co = app.add_subcommand("constants", "limit constants and ball binomials");
    int co_d = 2;
    co->add_option("--d", co_d, "dimension");

    auto* ve = app.add_subcommand("verify", "run the acceptance suite");
    bool quick = false;
    ve->add_flag("--quick", quick, "reduced smoke variant (wider stochastic tolerances)");

    for (auto* sub : {sim, flo, st, co, ve}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            std::vector<std::string> overridden;
            for (const char* key : {"geometry", "body", "weight-phi", "weight-psi", "hilbert-domain", "dual-j",
                                    "n-grid", "replications"})
                if (sim->count(std::string("--") + key) > 0) overridden.push_back(key);
            return run_simulate(config_path, ov, overridden, seed, workers, out_dir, repeat_check);
        }
        if (flo->parsed()) return run_floating(flo_body, flo_weight, flo_deltas, flo_dirs, out_dir);
        if (st->parsed())
            return run_stein(st_body, st_ns, st_m, st_r, st_tuples, st_c, seed, out_dir, repeat_check);
        if (co->parsed()) return run_constants(co_d, out_dir);
        if (ve->parsed()) {
            AcceptanceOptions opt;
            opt.seed = resolve_seed(seed, true, "verify");
            opt.quick = quick;
            opt.workers = workers;
            const auto results = run_acceptance(opt, std::cout);
            return all_passed(results) ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
