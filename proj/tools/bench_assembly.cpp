// Compares the serial and OpenMP element-kernel paths: they must agree
// bitwise, and the timing ratio is reported.
#include <chrono>
#include <cstdio>
#include <cstring>

#include "ifem/experiments.hpp"

int main(int argc, char** argv) {
    int m = 192;
    int reps = 5;
    if (argc > 1) m = std::atoi(argv[1]);
    if (argc > 2) reps = std::atoi(argv[2]);

    ifem::ExperimentConfig cfg;
    cfg.problem = "circle";
    const ifem::InterfaceGeometry geom = ifem::config_geometry(cfg);
    const ifem::UniformMesh mesh = ifem::build_mesh(m);
    const ifem::CutClassification cut = ifem::classify_elements(mesh, geom);
    const ifem::SubTriangulation sub = ifem::subtriangulate(mesh, geom, cut);
    const ifem::EnrichedBasis basis =
        ifem::build_enrichment(ifem::Scheme::Sgfem, mesh, geom, cut, sub, cfg.R);

    using clock = std::chrono::steady_clock;
    auto time_path = [&](bool parallel) {
        double best = 1e300;
        for (int r = 0; r < reps; ++r) {
            const auto t0 = clock::now();
            auto locals = ifem::element_matrices(mesh, sub, basis, cfg.a0, cfg.a1, parallel);
            const double dt = std::chrono::duration<double>(clock::now() - t0).count();
            if (dt < best) best = dt;
        }
        return best;
    };

    const auto serial = ifem::element_matrices(mesh, sub, basis, cfg.a0, cfg.a1, false);
    const auto parallel = ifem::element_matrices(mesh, sub, basis, cfg.a0, cfg.a1, true);
    double max_diff = 0.0;
    for (size_t e = 0; e < serial.size(); ++e) {
        max_diff = std::max(max_diff, (serial[e].K11 - parallel[e].K11).cwiseAbs().maxCoeff());
        max_diff = std::max(max_diff, (serial[e].K12 - parallel[e].K12).cwiseAbs().maxCoeff());
        max_diff = std::max(max_diff, (serial[e].K22 - parallel[e].K22).cwiseAbs().maxCoeff());
    }

    const double ts = time_path(false);
    const double tp = time_path(true);
    std::printf("m=%d elements=%d reps=%d\n", m, mesh.element_count(), reps);
    std::printf("serial   %.4f s\n", ts);
    std::printf("parallel %.4f s (speedup %.2fx)\n", tp, ts / tp);
    std::printf("max |serial - parallel| = %.3e\n", max_diff);
    return max_diff == 0.0 ? 0 : 1;
}
