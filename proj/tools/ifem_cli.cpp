#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ifem/experiments.hpp"

namespace {

void print_table(const ifem::Table& t) {
    for (size_t i = 0; i < t.columns.size(); ++i) std::cout << (i ? "," : "") << t.columns[i];
    std::cout << '\n';
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < t.columns.size(); ++i) {
            if (i) std::cout << ',';
            auto tag = row.tags.find(t.columns[i]);
            if (tag != row.tags.end()) {
                std::cout << tag->second;
            } else {
                auto v = row.values.find(t.columns[i]);
                if (v != row.values.end() && !std::isnan(v->second)) std::cout << v->second;
            }
        }
        std::cout << '\n';
    }
    for (const auto& [k, v] : t.summary) std::cout << "# " << k << " = " << v << '\n';
}

void emit(const ifem::Table& t, const ifem::ExperimentConfig& cfg, const std::string& name) {
    print_table(t);
    if (!cfg.out.empty()) {
        t.write_csv(cfg.out + "/" + name + ".csv");
        t.write_summary_json(cfg.out + "/" + name + "_summary.json");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interface-problem GFEM/SGFEM experiment driver"};
    app.require_subcommand(1);

    // the config file seeds the defaults; explicit flags override it
    ifem::ExperimentConfig cfg;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") {
            try {
                cfg = ifem::parse_config_file(argv[i + 1]);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << '\n';
                return 1;
            }
        }

    std::string config_path;
    std::vector<std::string> scheme_names;
    std::vector<int> ms;
    app.add_option("--config", config_path, "key=value config file");
    app.add_option("--problem", cfg.problem, "straight | circle | oned");
    app.add_option("--scheme", scheme_names, "fem|topological|geometric|mgfem|sgfem (repeatable)");
    app.add_option("--m", ms, "mesh subdivisions (repeatable)");
    app.add_option("--a0", cfg.a0, "coefficient on side 0");
    app.add_option("--a1", cfg.a1, "coefficient on side 1");
    app.add_option("--alpha", cfg.alpha, "straight-solution exponent");
    app.add_option("--d0", cfg.d0, "straight interface offset");
    app.add_option("--theta0", cfg.theta0, "straight interface angle");
    app.add_option("--xc", cfg.xc, "circle center x");
    app.add_option("--yc", cfg.yc, "circle center y");
    app.add_option("--rc", cfg.rc, "circle radius");
    app.add_option("--R", cfg.R, "geometric enrichment radius");
    app.add_option("--k", cfg.k, "outer stopping safety factor");
    app.add_option("--kprime", cfg.kprime, "inner stopping safety factor");
    app.add_option("--gamma", cfg.gamma, "1-D interface position");
    app.add_option("--out", cfg.out, "output directory for CSV/JSON");
    app.add_option("--direct-verify-max-m", cfg.direct_verify_max_m,
                   "largest m solved directly for delta verification");
    app.add_option("--seed", cfg.seed, "seed for randomized checks");

    auto* conv = app.add_subcommand("convergence", "energy-error convergence table");
    auto* cond = app.add_subcommand("conditioning", "condition-number table");
    auto* angle = app.add_subcommand("angle", "subspace-angle table");
    auto* prox = app.add_subcommand("proximity", "interface-near-meshline sweep");
    auto* solver = app.add_subcommand("solver", "iterative solver profiles");
    auto* oned = app.add_subcommand("oned", "1-D reference suite");

    CLI11_PARSE(app, argc, argv);

    if (!scheme_names.empty()) {
        cfg.schemes.clear();
        for (const auto& n : scheme_names) cfg.schemes.push_back(ifem::scheme_from_name(n));
    }
    if (!ms.empty()) cfg.ms = ms;

    try {
        if (conv->parsed()) emit(ifem::run_convergence(cfg), cfg, "convergence");
        if (cond->parsed()) emit(ifem::run_conditioning(cfg), cfg, "conditioning");
        if (angle->parsed()) emit(ifem::run_angle(cfg), cfg, "angle");
        if (prox->parsed()) emit(ifem::run_proximity(cfg), cfg, "proximity");
        if (solver->parsed()) emit(ifem::run_solver(cfg), cfg, "solver");
        if (oned->parsed()) {
            cfg.problem = "oned";
            emit(ifem::run_oned(cfg), cfg, "oned");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
