#include "ifem/experiments.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/SparseCholesky>
#include <json.hpp>

namespace ifem {

namespace {

std::vector<Scheme> all_schemes() {
    return {Scheme::None, Scheme::Topological, Scheme::Geometric, Scheme::MGfem, Scheme::Sgfem};
}

std::vector<Scheme> schemes_or_default(const ExperimentConfig& cfg) {
    return cfg.schemes.empty() ? all_schemes() : cfg.schemes;
}

std::vector<int> ms_or_default(const ExperimentConfig& cfg) {
    return cfg.ms.empty() ? std::vector<int>{8, 16, 32, 64, 128} : cfg.ms;
}

std::string fmt(double v) {
    if (std::isnan(v)) return "";
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    ExperimentConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        if (key == "problem") cfg.problem = val;
        else if (key == "scheme") cfg.schemes.push_back(scheme_from_name(val));
        else if (key == "m") cfg.ms.push_back(std::stoi(val));
        else if (key == "a0") cfg.a0 = std::stod(val);
        else if (key == "a1") cfg.a1 = std::stod(val);
        else if (key == "alpha") cfg.alpha = std::stod(val);
        else if (key == "d0") cfg.d0 = std::stod(val);
        else if (key == "theta0") cfg.theta0 = std::stod(val);
        else if (key == "xc") cfg.xc = std::stod(val);
        else if (key == "yc") cfg.yc = std::stod(val);
        else if (key == "rc") cfg.rc = std::stod(val);
        else if (key == "R") cfg.R = std::stod(val);
        else if (key == "k") cfg.k = std::stod(val);
        else if (key == "kprime") cfg.kprime = std::stod(val);
        else if (key == "gamma") cfg.gamma = std::stod(val);
        else if (key == "direct-verify-max-m") cfg.direct_verify_max_m = std::stoi(val);
        else if (key == "seed") cfg.seed = static_cast<unsigned>(std::stoul(val));
        else if (key == "out") cfg.out = val;
        else throw std::runtime_error("unknown config key " + key);
    }
    return cfg;
}

InterfaceGeometry config_geometry(const ExperimentConfig& cfg) {
    if (cfg.problem == "circle") return InterfaceGeometry::circle(cfg.xc, cfg.yc, cfg.rc);
    return InterfaceGeometry::straight(cfg.d0, cfg.theta0);
}

std::unique_ptr<ManufacturedSolution> config_solution(const ExperimentConfig& cfg) {
    if (cfg.problem == "circle")
        return std::make_unique<CircleSolution>(cfg.a0, cfg.a1, cfg.xc, cfg.yc, cfg.rc);
    return std::make_unique<StraightSolution>(cfg.a0, cfg.a1, cfg.alpha, cfg.d0, cfg.theta0);
}

ProblemSetup build_setup(const ExperimentConfig& cfg, Scheme scheme, int m) {
    ProblemSetup s;
    s.u = config_solution(cfg);
    const InterfaceGeometry& geom = s.u->geometry();
    s.mesh = build_mesh(m);
    s.cut = classify_elements(s.mesh, geom);
    s.sub = subtriangulate(s.mesh, geom, s.cut);
    s.basis = build_enrichment(scheme, s.mesh, geom, s.cut, s.sub, cfg.R);
    s.sys = assemble(s.mesh, s.sub, s.basis, cfg.a0, cfg.a1);
    assemble_load(s.mesh, s.cut, s.basis,
                  [&u = *s.u](const Vec2& p, const Vec2& n) { return u.neumann(p, n); }, s.sys);
    s.exact_energy2 = s.u->exact_energy_squared();
    return s;
}

VecX direct_solve(const BlockSystem& sys) {
    Eigen::SimplicialLDLT<SpMat> solver(sys.full());
    if (solver.info() != Eigen::Success) throw std::runtime_error("direct factorization failed");
    return solver.solve(sys.rhs());
}

void Table::write_csv(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    for (size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& row : rows) {
        for (size_t i = 0; i < columns.size(); ++i) {
            if (i) os << ',';
            auto t = row.tags.find(columns[i]);
            if (t != row.tags.end()) {
                os << t->second;
            } else {
                auto v = row.values.find(columns[i]);
                if (v != row.values.end()) os << fmt(v->second);
            }
        }
        os << '\n';
    }
}

void Table::write_summary_json(const std::string& path) const {
    nlohmann::json j;
    for (const auto& [k, v] : summary)
        if (!std::isnan(v)) j[k] = v;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << j.dump(2) << '\n';
}

Table run_convergence(const ExperimentConfig& cfg) {
    Table t;
    t.columns = {"problem", "scheme", "m", "h", "epsilon", "relative_error", "exact_energy2",
                 "discrete_energy2"};
    for (Scheme scheme : schemes_or_default(cfg)) {
        std::vector<std::pair<double, double>> fit;
        for (int m : ms_or_default(cfg)) {
            ProblemSetup s = build_setup(cfg, scheme, m);
            const VecX c = direct_solve(s.sys);
            const ErrorReport err = discretization_error(s.exact_energy2, s.sys, c);
            RunRecord r;
            r.tags = {{"problem", cfg.problem}, {"scheme", scheme_name(scheme)}};
            r.values = {{"m", double(m)},
                        {"h", s.mesh.h},
                        {"epsilon", err.epsilon},
                        {"relative_error", err.epsilon / std::sqrt(s.exact_energy2)},
                        {"exact_energy2", err.exact_energy2},
                        {"discrete_energy2", err.discrete_energy2}};
            t.rows.push_back(std::move(r));
            fit.emplace_back(s.mesh.h, err.epsilon);
        }
        if (fit.size() >= 2)
            t.summary[std::string("slope_") + scheme_name(scheme)] = fit_rate(fit);
    }
    return t;
}

Table run_conditioning(const ExperimentConfig& cfg) {
    Table t;
    t.columns = {"problem", "scheme", "m", "h", "kappaA", "kappaA22"};
    for (Scheme scheme : schemes_or_default(cfg)) {
        std::vector<std::pair<double, double>> fitA, fit22;
        for (int m : ms_or_default(cfg)) {
            ProblemSetup s = build_setup(cfg, scheme, m);
            const ScaledSystem sc = scale(s.sys);
            RunRecord r;
            r.tags = {{"problem", cfg.problem}, {"scheme", scheme_name(scheme)}};
            r.values = {{"m", double(m)}, {"h", s.mesh.h}};
            r.values["kappaA"] = condition_number(sc.A).kappa;
            fitA.emplace_back(s.mesh.h, r.values["kappaA"]);
            if (s.sys.dofs.n2 > 0) {
                r.values["kappaA22"] = condition_number(sc.A22).kappa;
                fit22.emplace_back(s.mesh.h, r.values["kappaA22"]);
            } else {
                r.values["kappaA22"] = std::numeric_limits<double>::quiet_NaN();
            }
            t.rows.push_back(std::move(r));
        }
        const std::string name = scheme_name(scheme);
        if (fitA.size() >= 2) t.summary["slope_kappaA_" + name] = fit_rate(fitA);
        if (fit22.size() >= 2) t.summary["slope_kappaA22_" + name] = fit_rate(fit22);
    }
    return t;
}

Table run_angle(const ExperimentConfig& cfg) {
    Table t;
    t.columns = {"problem", "scheme", "m", "h", "theta_deg", "lambda_max"};
    for (Scheme scheme : schemes_or_default(cfg)) {
        if (scheme == Scheme::None) continue;
        for (int m : ms_or_default(cfg)) {
            ProblemSetup s = build_setup(cfg, scheme, m);
            const AngleReport a = subspace_angle(s.sys);
            RunRecord r;
            r.tags = {{"problem", cfg.problem}, {"scheme", scheme_name(scheme)}};
            r.values = {{"m", double(m)},
                        {"h", s.mesh.h},
                        {"theta_deg", a.theta_deg},
                        {"lambda_max", a.lambda_max}};
            t.rows.push_back(std::move(r));
        }
    }
    return t;
}

Table run_proximity(const ExperimentConfig& cfg) {
    Table t;
    t.columns = {"scheme", "m", "t", "d0", "theta_deg", "kappaA"};
    const int m = cfg.ms.empty() ? 16 : cfg.ms.front();
    const double h = 1.0 / m;
    for (Scheme scheme : schemes_or_default(cfg)) {
        if (scheme == Scheme::None) continue;
        for (int dec = 1; dec <= 8; ++dec) {
            const double tt = std::pow(10.0, -dec);
            ExperimentConfig c = cfg;
            c.problem = "straight";
            c.theta0 = M_PI / 4.0;  // interface parallel to the diagonal mesh lines
            c.d0 = 0.5 - tt * h;
            c.R = 1.0 / 6.0;
            ProblemSetup s = build_setup(c, scheme, m);
            RunRecord r;
            r.tags = {{"scheme", scheme_name(scheme)}};
            r.values = {{"m", double(m)}, {"t", tt}, {"d0", c.d0}};
            r.values["theta_deg"] = subspace_angle(s.sys).theta_deg;
            r.values["kappaA"] = condition_number(scale(s.sys).A).kappa;
            t.rows.push_back(std::move(r));
        }
    }
    return t;
}

Table run_solver(const ExperimentConfig& cfg) {
    Table t;
    t.columns = {"problem", "scheme",  "m",     "outer",   "inner_fem", "inner_enr",
                 "seconds", "epsilon", "delta", "ratio",   "norm_vh",   "eta",
                 "err_bar", "efficiency", "converged"};
    for (Scheme scheme : schemes_or_default(cfg)) {
        std::map<int, double> norms;  // m -> ||v_h||_E for extrapolation
        for (int m : ms_or_default(cfg)) {
            ProblemSetup s = build_setup(cfg, scheme, m);
            const ScaledSystem sc = scale(s.sys);
            const MeshHierarchy hier =
                MeshHierarchy::build(m, s.u->geometry(), cfg.a0, cfg.a1);
            StoppingConfig stop;
            stop.k = cfg.k;
            stop.kprime = cfg.kprime;
            const SolveReport rep = scheme == Scheme::None
                                        ? solve_fem(sc, hier, s.mesh.h, stop)
                                        : solve_enriched(sc, hier, s.mesh.h, stop);

            RunRecord r;
            r.tags = {{"problem", cfg.problem},
                      {"scheme", scheme_name(scheme)},
                      {"converged", rep.converged ? "1" : "0"}};
            r.values = {{"m", double(m)},
                        {"outer", double(rep.outer)},
                        {"inner_fem", double(rep.inner_fem)},
                        {"inner_enr", double(rep.inner_enr)},
                        {"seconds", rep.seconds}};
            const double norm_vh = std::sqrt(std::abs(block_energy(s.sys, rep.c, rep.c)));
            r.values["norm_vh"] = norm_vh;

            const double nan = std::numeric_limits<double>::quiet_NaN();
            double eps = nan, delta = nan, ratio = nan, ehat = nan;
            if (m <= cfg.direct_verify_max_m) {
                const VecX cd = direct_solve(s.sys);
                eps = discretization_error(s.exact_energy2, s.sys, cd).epsilon;
                const VecX diff = cd - rep.c;
                delta = std::sqrt(std::abs(block_energy(s.sys, diff, diff)));
                const ErrorDecomposition dec = total_error_decomposition(eps, delta);
                ratio = dec.ratio;
                ehat = dec.epsilon_hat;
            }
            r.values["epsilon"] = eps;
            r.values["delta"] = delta;
            r.values["ratio"] = ratio;

            double eta = nan, err_bar = nan, eff = nan;
            if (norms.count(m / 2)) {
                // ||v_h|| approaches ||u|| at twice the energy-error order
                const Extrapolation ex =
                    extrapolated_error(norm_vh, norms[m / 2], s.mesh.h, 2.0 * scheme_order(scheme));
                eta = ex.eta;
                err_bar = ex.error_estimate;
                if (!std::isnan(ehat) && ehat > 0.0) eff = err_bar / ehat;
            }
            r.values["eta"] = eta;
            r.values["err_bar"] = err_bar;
            r.values["efficiency"] = eff;
            norms[m] = norm_vh;
            t.rows.push_back(std::move(r));
        }
    }
    return t;
}

Table run_oned(const ExperimentConfig& cfg) {
    Table t;
    t.columns = {"dimension", "scheme", "m",        "h",       "epsilon", "kappaA",
                 "kappaA22",  "theta_deg", "n_enr", "dropped"};
    const std::vector<int> default_ms = {10, 20, 40, 80, 160, 320};
    const std::vector<int>& ms = cfg.ms.empty() ? default_ms : cfg.ms;
    for (Scheme scheme : schemes_or_default(cfg)) {
        std::vector<std::pair<double, double>> fit, fitk;
        for (int m : ms) {
            OneDProblem p;
            p.gamma = cfg.gamma;
            p.a0 = cfg.a0;
            p.a1 = cfg.a1;
            p.m = m;
            p.R = cfg.problem == "oned" && cfg.R != 1.0 / 3.0 ? cfg.R : 0.2;
            const OneDResult res = solve_1d(p, scheme);
            RunRecord r;
            r.tags = {{"dimension", "1"},
                      {"scheme", scheme_name(scheme)},
                      {"dropped", res.enrichment_dropped ? "1" : "0"}};
            r.values = {{"m", double(m)},        {"h", 1.0 / m},
                        {"epsilon", res.epsilon}, {"kappaA", res.kappa_full},
                        {"kappaA22", res.n_enr ? res.kappa22
                                               : std::numeric_limits<double>::quiet_NaN()},
                        {"theta_deg", res.theta_deg}, {"n_enr", double(res.n_enr)}};
            t.rows.push_back(std::move(r));
            fit.emplace_back(1.0 / m, res.epsilon);
            fitk.emplace_back(1.0 / m, res.kappa_full);
        }
        const std::string name = scheme_name(scheme);
        if (fit.size() >= 2) t.summary["slope_" + name] = fit_rate(fit);
        if (fitk.size() >= 2) t.summary["slope_kappaA_" + name] = fit_rate(fitk);
    }
    return t;
}

}  // namespace ifem
