#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ifem/experiments.hpp"

using namespace ifem;

namespace {

std::string write_temp(const std::string& text) {
    std::string path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                       "/ifem_test_cfg.txt";
    std::ofstream out(path);
    out << text;
    return path;
}

// csv text with the wall-time columns blanked, for determinism comparisons
std::string stable_csv(const Table& t) {
    std::ostringstream os;
    for (size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < t.columns.size(); ++i) {
            if (i) os << ",";
            if (t.columns[i] == "seconds") continue;
            auto tag = row.tags.find(t.columns[i]);
            if (tag != row.tags.end()) {
                os << tag->second;
            } else {
                auto v = row.values.find(t.columns[i]);
                if (v != row.values.end() && v->second == v->second) os << v->second;
            }
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace

TEST_CASE("config file parsing") {
    const std::string path = write_temp(
        "# comment line\n"
        "problem = circle\n"
        "m = 8\n"
        "m = 16   # repeatable\n"
        "scheme = sgfem\n"
        "alpha = 1.25\n"
        "rc = 0.25\n"
        "seed = 7\n");
    const ExperimentConfig cfg = parse_config_file(path);
    CHECK(cfg.problem == "circle");
    REQUIRE(cfg.ms.size() == 2);
    CHECK(cfg.ms[1] == 16);
    REQUIRE(cfg.schemes.size() == 1);
    CHECK(cfg.schemes[0] == Scheme::Sgfem);
    CHECK(cfg.alpha == doctest::Approx(1.25));
    CHECK(cfg.rc == doctest::Approx(0.25));
    CHECK(cfg.seed == 7u);

    write_temp("wat = 3\n");
    CHECK_THROWS(parse_config_file(write_temp("wat = 3\n")));
    CHECK_THROWS(parse_config_file("/nonexistent/nope.cfg"));
}

TEST_CASE("config geometry and solution selection") {
    ExperimentConfig cfg;
    CHECK(config_geometry(cfg).kind == InterfaceGeometry::Kind::Straight);
    cfg.problem = "circle";
    CHECK(config_geometry(cfg).kind == InterfaceGeometry::Kind::Circle);
    const auto u = config_solution(cfg);
    CHECK(u->geometry().kind == InterfaceGeometry::Kind::Circle);
    CHECK(u->a1() == doctest::Approx(10.0));
}

TEST_CASE("experiment tables are deterministic") {
    ExperimentConfig cfg;
    cfg.ms = {4, 8};
    cfg.schemes = {Scheme::None, Scheme::Sgfem};
    CHECK(stable_csv(run_convergence(cfg)) == stable_csv(run_convergence(cfg)));
    CHECK(stable_csv(run_solver(cfg)) == stable_csv(run_solver(cfg)));
}

TEST_CASE("convergence table carries per-scheme slopes") {
    ExperimentConfig cfg;
    cfg.ms = {8, 16, 32};
    cfg.schemes = {Scheme::Sgfem};
    const Table t = run_convergence(cfg);
    CHECK(t.rows.size() == 3);
    REQUIRE(t.summary.count("slope_sgfem") == 1);
    CHECK(t.summary.at("slope_sgfem") > 0.5);
    for (const auto& row : t.rows) {
        CHECK(row.tags.at("scheme") == "sgfem");
        CHECK(row.values.at("epsilon") > 0.0);
    }
}

TEST_CASE("csv and summary files are written when an output directory is set") {
    ExperimentConfig cfg;
    cfg.ms = {4, 8};
    cfg.schemes = {Scheme::None};
    const Table t = run_convergence(cfg);
    const std::string csv = "/tmp/ifem_test_out.csv";
    const std::string json = "/tmp/ifem_test_out.json";
    t.write_csv(csv);
    t.write_summary_json(json);
    std::ifstream c(csv), j(json);
    std::string line;
    REQUIRE(std::getline(c, line));
    CHECK(line.find("epsilon") != std::string::npos);
    std::stringstream js;
    js << j.rdbuf();
    CHECK(js.str().find("slope_fem") != std::string::npos);
    std::remove(csv.c_str());
    std::remove(json.c_str());
}
