// Acceptance harness: one pass/fail line per criterion, exit code 0 only if
// every criterion holds.  Runs at desk scale (m <= 256) in a few minutes.
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ifem/diagnostics.hpp"
#include "ifem/experiments.hpp"
#include "ifem/solvers.hpp"

using namespace ifem;

namespace {

int failures = 0;

void report(int id, const std::string& what, bool ok, const std::string& detail) {
    std::printf("criterion %2d (%s): %s%s%s\n", id, what.c_str(), ok ? "PASS" : "FAIL",
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

bool in_band(double v, double lo, double hi) { return v >= lo && v <= hi; }

std::map<std::string, std::vector<std::pair<int, double>>> by_scheme(const Table& t,
                                                                     const std::string& key) {
    std::map<std::string, std::vector<std::pair<int, double>>> out;
    for (const auto& r : t.rows)
        out[r.tags.at("scheme")].emplace_back(int(r.values.at("m")), r.values.at(key));
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// --- criteria -------------------------------------------------------------

void criterion_1() {
    ExperimentConfig cfg;
    cfg.ms = {8, 16, 32, 64, 128};
    const Table t = run_convergence(cfg);
    bool ok = true;
    std::string detail;
    for (const auto& [name, lo, hi] :
         std::vector<std::tuple<std::string, double, double>>{{"fem", 0.40, 0.65},
                                                              {"topological", 0.40, 0.65},
                                                              {"geometric", 0.85, 1.15},
                                                              {"mgfem", 0.85, 1.15},
                                                              {"sgfem", 0.85, 1.15}}) {
        const double s = t.summary.at("slope_" + name);
        ok = ok && in_band(s, lo, hi);
        detail += name + "=" + fmt(s) + " ";
    }
    report(1, "straight convergence rates", ok, detail);
}

void criterion_2() {
    ExperimentConfig cfg;
    cfg.problem = "circle";
    cfg.ms = {8, 16, 32, 64, 128};
    cfg.schemes = {Scheme::None, Scheme::MGfem, Scheme::Sgfem};
    const Table t = run_convergence(cfg);
    const double f = t.summary.at("slope_fem");
    const double m = t.summary.at("slope_mgfem");
    const double s = t.summary.at("slope_sgfem");
    const bool ok = in_band(f, 0.40, 0.65) && in_band(m, 0.85, 1.15) && in_band(s, 0.85, 1.15);
    report(2, "circle convergence rates", ok,
           "fem=" + fmt(f) + " mgfem=" + fmt(m) + " sgfem=" + fmt(s));
}

void criterion_3() {
    ExperimentConfig cfg;
    cfg.ms = {8, 16, 32, 64, 128};
    cfg.schemes = {Scheme::Topological, Scheme::Geometric, Scheme::MGfem, Scheme::Sgfem};
    const Table t = run_conditioning(cfg);
    bool ok = true;
    std::string detail;
    for (const char* name : {"topological", "mgfem", "sgfem"}) {
        const double sA = t.summary.at(std::string("slope_kappaA_") + name);
        const double s22 = t.summary.at(std::string("slope_kappaA22_") + name);
        ok = ok && in_band(sA, -2.4, -1.7) && in_band(s22, -0.3, 0.3);
        detail += std::string(name) + "=(" + fmt(sA) + "," + fmt(s22) + ") ";
    }
    const double gA = t.summary.at("slope_kappaA_geometric");
    const double g22 = t.summary.at("slope_kappaA22_geometric");
    ok = ok && gA <= -3.3 && g22 <= -1.6;
    detail += "geometric=(" + fmt(gA) + "," + fmt(g22) + ")";
    report(3, "conditioning laws", ok, detail);
}

void criterion_4() {
    bool ok = true;
    std::string detail;
    for (const char* problem : {"straight", "circle"}) {
        ExperimentConfig cfg;
        cfg.problem = problem;
        cfg.ms = {8, 16, 32, 64, 128};
        cfg.schemes = {Scheme::Topological, Scheme::Geometric, Scheme::MGfem, Scheme::Sgfem};
        const auto angles = by_scheme(run_angle(cfg), "theta_deg");

        for (const char* bounded : {"sgfem", "topological"}) {
            double lo = 1e300, hi = 0.0;
            for (const auto& [m, v] : angles.at(bounded)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            ok = ok && lo >= 0.5 * hi;
        }
        const auto& geo = angles.at("geometric");
        for (size_t i = 1; i < geo.size(); ++i) ok = ok && geo[i].second < geo[i - 1].second;
        ok = ok && geo.back().second < 0.5 * geo.front().second;
        for (size_t i = 0; i < angles.at("sgfem").size(); ++i)
            ok = ok && angles.at("sgfem")[i].second > angles.at("mgfem")[i].second;
        detail += std::string(problem) + ": sgfem " + fmt(angles.at("sgfem").front().second) +
                  "..." + fmt(angles.at("sgfem").back().second) + " geo->" +
                  fmt(geo.back().second) + "  ";
    }
    report(4, "angle behavior", ok, detail);
}

void criterion_5() {
    ExperimentConfig cfg;
    const Table t = run_proximity(cfg);
    const auto angles = by_scheme(t, "theta_deg");
    const auto kappas = by_scheme(t, "kappaA");

    auto minmax = [](const std::vector<std::pair<int, double>>& v) {
        double lo = 1e300, hi = 0.0;
        for (const auto& [m, x] : v) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        return std::pair<double, double>{lo, hi};
    };
    const auto [mg_alo, mg_ahi] = minmax(angles.at("mgfem"));
    const auto [mg_klo, mg_khi] = minmax(kappas.at("mgfem"));
    const auto [sg_alo, sg_ahi] = minmax(angles.at("sgfem"));
    const auto [sg_klo, sg_khi] = minmax(kappas.at("sgfem"));

    const bool ok = mg_ahi / mg_alo >= 100.0 && mg_khi / mg_klo >= 100.0 &&
                    sg_alo / sg_ahi >= 0.5 && sg_khi / sg_klo <= 10.0;
    report(5, "proximity pathology", ok,
           "mgfem angle x" + fmt(mg_ahi / mg_alo) + " kappa x" + fmt(mg_khi / mg_klo) +
               "; sgfem angle min/max " + fmt(sg_alo / sg_ahi) + " kappa x" +
               fmt(sg_khi / sg_klo));
}

void criterion_6() {
    bool ok = true;
    std::string detail;
    for (double deg : {15.0, 30.0, 60.0}) {
        const double c = std::cos(deg * M_PI / 180.0);
        Eigen::Matrix2d A;
        A << 1, c, c, 1;
        Eigen::Vector2d x(1.0, 1.0);
        double prev = 0.0, ratio = 0.0;
        for (int sweep = 0; sweep < 3; ++sweep) {
            x[0] = -c * x[1];
            x[1] = -c * x[0];
            const double e = std::sqrt(x.dot(A * x));
            if (sweep >= 1) ratio = e / prev;
            prev = e;
        }
        ok = ok && std::abs(ratio - c * c) <= 1e-6;
        detail += fmt(deg) + "deg:" + fmt(ratio) + " ";
    }
    report(6, "block-GS contraction oracle", ok, detail);
}

Table solver_table(const std::string& problem) {
    ExperimentConfig cfg;
    cfg.problem = problem;
    cfg.ms = {4, 8, 16, 32, 64, 128, 256};
    cfg.schemes = {Scheme::None, Scheme::MGfem, Scheme::Sgfem};
    return run_solver(cfg);
}

void criterion_7(const Table& straight, const Table& circle) {
    bool ok = true;
    std::string detail;
    for (const auto* t : {&straight, &circle}) {
        const auto outer = by_scheme(*t, "outer");
        const auto& sg = outer.at("sgfem");
        const auto& mg = outer.at("mgfem");
        for (size_t i = 0; i < sg.size(); ++i) {
            ok = ok && sg[i].second <= 0.5 * mg[i].second;
            ok = ok && sg[i].second <= 30.0;
            // the paper's columns grow with m; allow the sub-asymptotic m=4 dip
            if (i >= 2) ok = ok && mg[i].second >= mg[i - 1].second;
        }
        ok = ok && mg.back().second > mg.front().second;
        detail += t->rows.front().tags.at("problem") + ": sgfem<=" +
                  fmt(sg.back().second) + " mgfem->" + fmt(mg.back().second) + "  ";
    }
    report(7, "solver iteration profiles", ok, detail);
}

void criterion_8(const Table& straight, const Table& circle) {
    bool ok = true;
    double worst_fs = 0.0, worst_mg = 0.0;
    for (const auto* t : {&straight, &circle})
        for (const auto& r : t->rows) {
            const double eps = r.values.at("epsilon");
            if (std::isnan(eps)) continue;  // no direct verification at this m
            const double delta = r.values.at("delta");
            const double ratio = r.values.at("ratio");
            ok = ok && delta <= eps;
            if (r.tags.at("scheme") == "mgfem") {
                ok = ok && ratio <= 1.2;
                worst_mg = std::max(worst_mg, ratio);
            } else {
                ok = ok && ratio <= 1.05;
                worst_fs = std::max(worst_fs, ratio);
            }
        }
    report(8, "stopping quality", ok,
           "max ratio fem/sgfem=" + fmt(worst_fs) + " mgfem=" + fmt(worst_mg));
}

void criterion_9(const Table& circle) {
    bool ok = true;
    std::string detail;
    for (const auto& r : circle.rows) {
        const int m = int(r.values.at("m"));
        if (m < 32 || m > 128) continue;  // extrapolation pairs inside {16..128}
        const double eff = r.values.at("efficiency");
        if (std::isnan(eff)) continue;
        const std::string& sc = r.tags.at("scheme");
        if (sc == "mgfem")
            ok = ok && in_band(eff, 0.6, 1.6);
        else
            ok = ok && in_band(eff, 0.9, 1.1);
        detail += sc + "/" + std::to_string(m) + "=" + fmt(eff) + " ";
    }
    report(9, "extrapolated-estimator efficiency", ok, detail);
}

void criterion_10() {
    ExperimentConfig cfg;
    cfg.problem = "circle";
    bool ok = true;
    std::string detail;
    for (Scheme sc : {Scheme::None, Scheme::Sgfem}) {
        std::vector<std::pair<double, double>> fit;
        for (int m : {8, 16, 32, 64}) {
            ProblemSetup s = build_setup(cfg, sc, m);
            const VecX c = direct_solve(s.sys);
            const auto er = discretization_error(s.exact_energy2, s.sys, c);
            const double t2 =
                true_error_squared(s.mesh, s.cut, s.sub, s.basis, s.sys.dofs, c, *s.u, 7, 2);
            fit.emplace_back(s.mesh.h, perturbation_gap(t2, s.exact_energy2, er.discrete_energy2));
        }
        const double slope = fit_rate(fit);
        const double need = sc == Scheme::None ? 1.3 : 1.7;
        ok = ok && slope >= need;
        detail += std::string(scheme_name(sc)) + "=" + fmt(slope) + " ";
    }
    report(10, "perturbation gap decay", ok, detail);
}

void criterion_11() {
    ExperimentConfig cfg;
    cfg.schemes = {Scheme::Topological, Scheme::Geometric, Scheme::MGfem, Scheme::Sgfem};
    const Table t = run_oned(cfg);
    bool ok = true;
    const double st = t.summary.at("slope_topological");
    const double sm = t.summary.at("slope_mgfem");
    const double ss = t.summary.at("slope_sgfem");
    ok = ok && in_band(st, 0.4, 0.6) && in_band(sm, 0.9, 1.1) && in_band(ss, 0.9, 1.1);

    // geometric kappa in its asymptotic range {80, 160, 320}
    std::vector<std::pair<double, double>> fitk;
    for (const auto& r : t.rows)
        if (r.tags.at("scheme") == "geometric" && r.values.at("m") >= 80)
            fitk.emplace_back(r.values.at("h"), r.values.at("kappaA"));
    const double gk = fit_rate(fitk);
    ok = ok && gk <= -3.3;

    OneDProblem p;
    p.gamma = (2.0 + 1.0 / M_PI) / 5.0;
    p.m = 10;
    const int n_sg = solve_1d(p, Scheme::Sgfem).n_enr;
    const int n_mg = solve_1d(p, Scheme::MGfem).n_enr;
    ok = ok && n_sg == 2 && n_mg == 4;

    report(11, "1-d oracle suite", ok,
           "slopes top=" + fmt(st) + " mgfem=" + fmt(sm) + " sgfem=" + fmt(ss) +
               " geo-kappa=" + fmt(gk) + " blocks " + std::to_string(n_sg) + "/" +
               std::to_string(n_mg));
}

void criterion_12() {
    bool ok = true;
    std::string detail;
    int checked = 0;
    for (const char* problem : {"straight", "circle"}) {
        ExperimentConfig cfg;
        cfg.problem = problem;

        // boundary-data compatibility per problem
        const auto u = config_solution(cfg);
        const double compat = boundary_integral(
            [&](const Vec2& p, const Vec2& n) { return u->neumann(p, n); }, &u->geometry());
        ok = ok && std::abs(compat) <= 1e-8;

        for (int m : {8, 16, 32})
            for (Scheme sc : {Scheme::Topological, Scheme::Geometric, Scheme::MGfem,
                              Scheme::Sgfem}) {
                ProblemSetup s = build_setup(cfg, sc, m);
                const double half_cell = 0.5 * s.mesh.h * s.mesh.h;
                for (int e = 0; e < s.mesh.element_count(); ++e) {
                    double area = 0.0;
                    for (const auto& t : s.sub.per_element[e]) area += t.area;
                    ok = ok && std::abs(area - half_cell) <= 1e-12 * half_cell;
                }
                if (sc == Scheme::Sgfem)
                    for (int v = 0; v < s.mesh.node_count(); ++v)
                        ok = ok && s.basis.w[v] == 0.0;
                const AngleReport ar = subspace_angle(s.sys);
                ok = ok && ar.lambda_max >= 0.0 && ar.lambda_max <= 1.0 + 1e-10;
                ++checked;
            }

        // transfer operators on the hierarchy
        const MeshHierarchy hier = MeshHierarchy::build(16, config_geometry(cfg), cfg.a0, cfg.a1);
        for (size_t l = 1; l < hier.levels.size(); ++l) {
            const auto& lvl = hier.levels[l];
            const VecX ones = VecX::Ones(lvl.P_full.cols());
            ok = ok &&
                 ((lvl.P_full * ones) - VecX::Ones(lvl.P_full.rows())).cwiseAbs().maxCoeff() <=
                     1e-12;
            const SpMat G = SpMat(lvl.P.transpose() * lvl.A * lvl.P);
            ok = ok && (SpMat(G - hier.levels[l - 1].A)).norm() <= 1e-12 * G.norm();
        }
    }
    report(12, "property suites", ok, std::to_string(checked) + " grid cells checked");
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();

    const Table straight = solver_table("straight");
    const Table circle = solver_table("circle");
    criterion_7(straight, circle);
    criterion_8(straight, circle);
    criterion_9(circle);

    criterion_10();
    criterion_11();
    criterion_12();

    std::printf("%s\n", failures == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED");
    return failures == 0 ? 0 : 1;
}
