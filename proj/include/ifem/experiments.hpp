#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "ifem/diagnostics.hpp"
#include "ifem/manufactured.hpp"
#include "ifem/oned.hpp"
#include "ifem/solvers.hpp"

namespace ifem {

struct ExperimentConfig {
    std::string problem = "straight";  // straight | circle | oned
    std::vector<Scheme> schemes;
    std::vector<int> ms;
    double a0 = 1.0, a1 = 10.0;
    double alpha = 1.5;
    double d0 = 1.0 - 1.0 / std::sqrt(2.0);
    double theta0 = M_PI / 6.0;
    double xc = 1.0 / std::sqrt(5.0), yc = 1.0 / std::sqrt(3.0);
    double rc = 1.0 / std::sqrt(10.0);
    double R = 1.0 / 3.0;
    double k = 100.0, kprime = 4.0;
    double gamma = (2.0 + 1.0 / M_PI) / 5.0;  // 1-D interface
    int direct_verify_max_m = 128;
    unsigned seed = 0;
    std::string out;  // output directory; empty = no files
};

ExperimentConfig parse_config_file(const std::string& path);

InterfaceGeometry config_geometry(const ExperimentConfig& cfg);
std::unique_ptr<ManufacturedSolution> config_solution(const ExperimentConfig& cfg);

/// Everything assembled for one (scheme, m) cell.
struct ProblemSetup {
    UniformMesh mesh;
    CutClassification cut;
    SubTriangulation sub;
    EnrichedBasis basis;
    BlockSystem sys;
    std::unique_ptr<ManufacturedSolution> u;
    double exact_energy2 = 0.0;
};

ProblemSetup build_setup(const ExperimentConfig& cfg, Scheme scheme, int m);

/// Sparse Cholesky on the full pinned system.
VecX direct_solve(const BlockSystem& sys);

/// One row of any experiment table; unset fields stay NaN and print empty.
struct RunRecord {
    std::map<std::string, std::string> tags;    // scheme, problem, ...
    std::map<std::string, double> values;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<RunRecord> rows;
    std::map<std::string, double> summary;  // e.g. fitted slopes per scheme

    void write_csv(const std::string& path) const;
    void write_summary_json(const std::string& path) const;
};

Table run_convergence(const ExperimentConfig& cfg);
Table run_conditioning(const ExperimentConfig& cfg);
Table run_angle(const ExperimentConfig& cfg);
Table run_proximity(const ExperimentConfig& cfg);
Table run_solver(const ExperimentConfig& cfg);
Table run_oned(const ExperimentConfig& cfg);

}  // namespace ifem
