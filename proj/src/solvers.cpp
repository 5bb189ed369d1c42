#include "ifem/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace ifem {

namespace {

bool is_power_of_two(int m) { return m >= 1 && (m & (m - 1)) == 0; }

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

}  // namespace

MeshHierarchy MeshHierarchy::build(int m, const InterfaceGeometry& geom, double a0, double a1) {
    if (!is_power_of_two(m)) throw std::invalid_argument("multigrid needs m = 2^l");

    MeshHierarchy hier;
    for (int mm = 1; mm <= m; mm *= 2) {
        Level lvl;
        lvl.mesh = build_mesh(mm);
        if (!hier.levels.empty()) {
            const Level& coarse = hier.levels.back();
            const int mc = coarse.mesh.m;
            const int nn_f = lvl.mesh.node_count();
            std::vector<Eigen::Triplet<double>> tf;
            auto cid = [&](int i, int j) { return coarse.mesh.node_id(i, j); };
            for (int b = 0; b <= mm; ++b)
                for (int a = 0; a <= mm; ++a) {
                    const int row = lvl.mesh.node_id(a, b);
                    if (a % 2 == 0 && b % 2 == 0) {
                        tf.emplace_back(row, cid(a / 2, b / 2), 1.0);
                    } else if (b % 2 == 0) {
                        tf.emplace_back(row, cid((a - 1) / 2, b / 2), 0.5);
                        tf.emplace_back(row, cid((a + 1) / 2, b / 2), 0.5);
                    } else if (a % 2 == 0) {
                        tf.emplace_back(row, cid(a / 2, (b - 1) / 2), 0.5);
                        tf.emplace_back(row, cid(a / 2, (b + 1) / 2), 0.5);
                    } else {
                        // cell centers sit on the slope -1 diagonal edge
                        tf.emplace_back(row, cid((a + 1) / 2, (b - 1) / 2), 0.5);
                        tf.emplace_back(row, cid((a - 1) / 2, (b + 1) / 2), 0.5);
                    }
                }
            lvl.P_full.resize(nn_f, (mc + 1) * (mc + 1));
            lvl.P_full.setFromTriplets(tf.begin(), tf.end());

            // pinned version: node (0,0) has dof id node-1 on both levels
            std::vector<Eigen::Triplet<double>> tp;
            for (const auto& t : tf)
                if (t.row() > 0 && t.col() > 0)
                    tp.emplace_back(t.row() - 1, t.col() - 1, t.value());
            lvl.P.resize(nn_f - 1, (mc + 1) * (mc + 1) - 1);
            lvl.P.setFromTriplets(tp.begin(), tp.end());
        }
        hier.levels.push_back(std::move(lvl));
    }

    // The finest operator is assembled and scaled to unit diagonal; coarse
    // operators are Galerkin (P^T A P).  Rediscretizing the coarse levels
    // instead makes the V-cycle diverge once the interface stops being
    // resolved (a circle can cross a coarse edge twice), so the coarse side
    // of the transfer no longer sees the same coefficient field.
    {
        Level& fine = hier.levels.back();
        const CutClassification cut = classify_elements(fine.mesh, geom);
        const SubTriangulation sub = subtriangulate(fine.mesh, geom, cut);
        const EnrichedBasis none;  // FEM operator only
        const ScaledSystem scaled = scale(assemble(fine.mesh, sub, none, a0, a1));
        fine.A = scaled.A11;
        fine.Arow = SpMatRow(fine.A);
        fine.D = scaled.D;
    }
    for (int l = static_cast<int>(hier.levels.size()) - 1; l > 0; --l) {
        Level& coarse = hier.levels[l - 1];
        const Level& fine = hier.levels[l];
        coarse.A = SpMat(fine.P.transpose() * fine.A * fine.P);
        coarse.Arow = SpMatRow(coarse.A);
    }
    return hier;
}

static void gs_sweep(const SpMatRow& A, const VecX& b, VecX& x) {
    for (int i = 0; i < A.rows(); ++i) {
        double s = b[i];
        double diag = 0.0;
        for (SpMatRow::InnerIterator it(A, i); it; ++it) {
            if (it.col() == i)
                diag = it.value();
            else
                s -= it.value() * x[it.col()];
        }
        x[i] = s / diag;
    }
}

int gauss_seidel(const SpMatRow& A, const VecX& b, VecX& x, const RelaxConfig& cfg) {
    if (!cfg.adaptive) {
        for (int s = 0; s < cfg.fixed_sweeps; ++s) gs_sweep(A, b, x);
        return cfg.fixed_sweeps;
    }
    double r_prev = (b - A * x).norm();
    if (r_prev == 0.0) return 0;
    int sweeps = 0;
    while (sweeps < cfg.max_sweeps) {
        gs_sweep(A, b, x);
        ++sweeps;
        const double r = (b - A * x).norm();
        if (r >= 0.5 * r_prev) break;
        r_prev = r;
    }
    return sweeps;
}

void v_cycle(const MeshHierarchy& hier, int level, const VecX& rhs, VecX& x,
             const RelaxConfig& cfg) {
    const auto& lvl = hier.levels[level];
    if (level == 0) {
        x = Eigen::MatrixXd(lvl.A).llt().solve(rhs);
        return;
    }
    gauss_seidel(lvl.Arow, rhs, x, cfg);
    const VecX r = rhs - lvl.A * x;
    const VecX rc = lvl.P.transpose() * r;
    VecX xc = VecX::Zero(rc.size());
    v_cycle(hier, level - 1, rc, xc, cfg);
    x += lvl.P * xc;
    gauss_seidel(lvl.Arow, rhs, x, cfg);
}

VecX fmg(const MeshHierarchy& hier, const VecX& rhs, const RelaxConfig& cfg) {
    const int L = static_cast<int>(hier.levels.size()) - 1;
    std::vector<VecX> f(L + 1);
    f[L] = rhs;
    for (int l = L; l > 0; --l) f[l - 1] = hier.levels[l].P.transpose() * f[l];

    VecX x = Eigen::MatrixXd(hier.levels[0].A).llt().solve(f[0]);
    for (int l = 1; l <= L; ++l) {
        VecX xf = hier.levels[l].P * x;
        v_cycle(hier, l, f[l], xf, cfg);
        x = std::move(xf);
    }
    return x;
}

PcgResult pcg(const std::function<VecX(const VecX&)>& apply_A,
              const std::function<VecX(const VecX&)>& apply_M, const VecX& b, VecX& x,
              const std::function<bool(double, int)>& stop, int max_iter) {
    PcgResult res;
    VecX r = b - apply_A(x);
    res.residual_norm = r.norm();
    if (stop(res.residual_norm, 0)) {
        res.converged = true;
        return res;
    }
    VecX z = apply_M(r);
    VecX p = z;
    double rz = r.dot(z);
    for (int k = 1; k <= max_iter; ++k) {
        const VecX Ap = apply_A(p);
        const double pAp = p.dot(Ap);
        if (!(pAp > 0.0)) {
            res.breakdown = true;
            return res;
        }
        const double alpha = rz / pAp;
        x += alpha * p;
        const VecX r_new = r - alpha * Ap;
        res.iterations = k;
        res.residual_norm = r_new.norm();
        if (stop(res.residual_norm, k)) {
            res.converged = true;
            return res;
        }
        // flexible (Polak-Ribiere) update: the adaptive-sweep FMG is not a
        // fixed linear operator
        const VecX z_new = apply_M(r_new);
        const double beta = z_new.dot(r_new - r) / rz;
        p = z_new + beta * p;
        r = r_new;
        z = z_new;
        rz = r.dot(z);
    }
    return res;
}

SolveReport solve_fem(const ScaledSystem& sys, const MeshHierarchy& hier, double h,
                      const StoppingConfig& cfg) {
    SolveReport rep;
    const double t0 = now_seconds();
    const double tol = std::sqrt(h) / cfg.k;  // epsilon = h^(1/2)
    VecX x = VecX::Zero(sys.A.rows());
    auto res = pcg([&](const VecX& v) { return VecX(sys.A * v); },
                   [&](const VecX& r) { return fmg(hier, r, cfg.relax); }, sys.f, x,
                   [&](double rn, int) { return rn / h < tol; });
    rep.x = x;
    rep.c = sys.unscale(x);
    rep.outer = res.iterations;
    rep.inner_fem = res.iterations;
    rep.converged = res.converged;
    rep.final_estimate = res.residual_norm / h;
    rep.seconds = now_seconds() - t0;
    rep.trace.push_back({res.iterations, rep.final_estimate, res.iterations, 0, rep.seconds});
    return rep;
}

double richardson_outer_estimator(double diff_latest, double diff_previous) {
    if (!(diff_latest > 0.0) || !(diff_latest < diff_previous))
        return std::numeric_limits<double>::quiet_NaN();
    return 1.0 / (1.0 / diff_latest - 1.0 / diff_previous);
}

SolveReport solve_enriched(const ScaledSystem& sys, const MeshHierarchy& hier, double h,
                           const StoppingConfig& cfg) {
    SolveReport rep;
    const double t0 = now_seconds();
    const int n1 = sys.n1, n2 = sys.n2;
    const double inf = std::numeric_limits<double>::infinity();

    VecX x1 = VecX::Zero(n1), x2 = VecX::Zero(n2);
    double e = inf;
    double d_prev = 0.0;
    bool have_d_prev = false;
    VecX w_prev = VecX::Zero(n1 + n2);
    int stall = 0;

    auto energy_norm = [&](const VecX& v) { return std::sqrt(v.dot(sys.A * v)); };

    for (int i = 1; i <= 1000; ++i) {
        const double thr = e == inf ? inf : e / cfg.kprime;

        const VecX b1 = sys.f1 - sys.A12 * x2;
        auto res1 = pcg([&](const VecX& v) { return VecX(sys.A11 * v); },
                        [&](const VecX& r) { return fmg(hier, r, cfg.relax); }, b1, x1,
                        [&](double rn, int it) { return it >= 1 && rn / h < thr; });

        const VecX b2 = sys.f2 - sys.A12.transpose() * x1;
        auto res2 = pcg([&](const VecX& v) { return VecX(sys.A22 * v); },
                        [](const VecX& r) { return r; }, b2, x2,
                        [&](double rn, int it) { return it >= 1 && rn < thr; });

        rep.inner_fem += res1.iterations;
        rep.inner_enr += res2.iterations;

        VecX w(n1 + n2);
        w.head(n1) = x1;
        w.tail(n2) = x2;
        const VecX dw = w - w_prev;
        const double d = energy_norm(dw);
        if (i >= 2 && have_d_prev) {
            const double e_new = richardson_outer_estimator(d, d_prev);
            if (std::isnan(e_new)) {
                rep.estimator_stalled = true;
                if (++stall > 3) break;
            } else {
                e = e_new;
                stall = 0;
            }
        }
        d_prev = d;
        have_d_prev = true;
        w_prev = w;

        rep.outer = i;
        rep.trace.push_back({i, e, res1.iterations, res2.iterations, now_seconds() - t0});
        if (e < h / cfg.k) {  // epsilon = h
            rep.converged = true;
            break;
        }
    }

    rep.x = VecX(n1 + n2);
    rep.x.head(n1) = x1;
    rep.x.tail(n2) = x2;
    rep.c = sys.unscale(rep.x);
    rep.final_estimate = e;
    rep.seconds = now_seconds() - t0;
    return rep;
}

Extrapolation extrapolated_error(double norm_h, double norm_2h, double h, double p) {
    Extrapolation out;
    const double C = (norm_h - norm_2h) / ((std::pow(2.0, p) - 1.0) * std::pow(h, p));
    out.eta = norm_h + C * std::pow(h, p);
    out.error_estimate = std::sqrt(std::abs(out.eta * out.eta - norm_h * norm_h));
    out.monotonicity_flag = norm_h < norm_2h;
    return out;
}

ErrorDecomposition total_error_decomposition(double epsilon_h, double delta) {
    ErrorDecomposition out;
    out.epsilon = epsilon_h;
    out.delta = delta;
    out.epsilon_hat = std::sqrt(epsilon_h * epsilon_h + delta * delta);
    out.ratio = epsilon_h > 0.0 ? out.epsilon_hat / epsilon_h : 1.0;
    return out;
}

}  // namespace ifem
