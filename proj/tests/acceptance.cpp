// Acceptance gate: one line per criterion, pass/fail with the measured
// values, exit nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "escurve/density.hpp"
#include "escurve/mc.hpp"
#include "escurve/params.hpp"
#include "escurve/rng.hpp"
#include "escurve/sheets.hpp"
#include "escurve/verify.hpp"

using namespace escurve;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("criterion %2d: %s  %s\n", criterion, pass ? "PASS" : "FAIL",
                detail.c_str());
    if (!pass) ++failures;
}

double now_seconds() {
    using clk = std::chrono::steady_clock;
    static const clk::time_point t0 = clk::now();
    return std::chrono::duration<double>(clk::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

SheetSampler make_sampler(double a) {
    QuarticParameters qp = solve_parameters(a);
    SpectralCurve c = quartic_curve(a, qp.alpha, qp.beta);
    BranchStructure b = branch_points(discriminant_t(c), a);
    return SheetSampler(c, b);
}

// 1. Resultant identity at 100 seeded random points, one global constant,
//    relative error <= 1e-6, under 10 s.
void criterion1() {
    double t0 = now_seconds();
    SplitMix64 rng(20260823);
    int checked = 0;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        double alpha = -2.0 + 4.0 * rng.next_unit();
        double beta = -2.0 + 4.0 * rng.next_unit();
        double a = 0.5 + 2.5 * rng.next_unit();
        IdentityCheck chk = resultant_identity_check(alpha, beta, a);
        if (chk.skipped) continue;
        ++checked;
        worst = std::max(worst, std::abs(chk.ratio - kResultantKappa) /
                                    std::abs(kResultantKappa));
    }
    double dt = now_seconds() - t0;
    bool pass = checked >= 95 && worst <= 1e-6 && dt < 10.0;
    report(1, pass,
           "points=" + std::to_string(checked) + " worst_rel_err=" + fmt(worst) +
               " kappa=" + fmt(kResultantKappa) + " time=" + fmt(dt) + "s");
}

// 2. Parameter expansions for a in {5,10,20,50}: <= 30 Newton steps,
//    truncation brackets a^{-8/3}, under 5 s total.
void criterion2() {
    double t0 = now_seconds();
    bool pass = true;
    std::string detail;
    for (double a : {5.0, 10.0, 20.0, 50.0}) {
        QuarticParameters qp = solve_parameters(a);
        double a43 = std::pow(a, -4.0 / 3.0), a83 = std::pow(a, -8.0 / 3.0);
        double da = std::abs(qp.alpha / (a * a) - (-1.0 + a43));
        double db = std::abs(qp.beta / std::pow(a, 4.0 / 3.0) - (1.0 - a43 / 3.0));
        bool ok = qp.iterations <= 30 && da <= a83 && db <= a83;
        pass = pass && ok;
        detail += "a=" + fmt(a) + "(it=" + std::to_string(qp.iterations) +
                  ",da=" + fmt(da) + ",db=" + fmt(db) + ") ";
    }
    double dt = now_seconds() - t0;
    pass = pass && dt < 5.0;
    report(2, pass, detail + "time=" + fmt(dt) + "s");
}

// 3. Hessian scale: |det Hess B2| in rescaled (u,v) units over
//    C * a^{80/3} lies in [0.8, 1.25] at a = 20 and 50, trending to 1.
//    The limit constant is the measured 14348907 (= 3^15); see README.
void criterion3() {
    const double limit_const = 14348907.0;
    double r20 = 0.0, r50 = 0.0;
    bool pass = true;
    for (double a : {20.0, 50.0}) {
        QuarticParameters qp = solve_parameters(a);
        double ratio =
            std::abs(qp.hessian_det) / (limit_const * std::pow(a, 80.0 / 3.0));
        (a == 20.0 ? r20 : r50) = ratio;
        pass = pass && ratio >= 0.8 && ratio <= 1.25;
    }
    pass = pass && std::abs(r50 - 1.0) < std::abs(r20 - 1.0);
    report(3, pass,
           "ratio(a=20)=" + fmt(r20) + " ratio(a=50)=" + fmt(r50) +
               " limit_const=" + fmt(limit_const));
}

// 4. Branch structure: correct root signature, factorization residual
//    <= 1e-6, gamma2^2 within 5 a^{-2/3} of the expansion, a in {10,20,50}.
void criterion4() {
    bool pass = true;
    std::string detail;
    for (double a : {10.0, 20.0, 50.0}) {
        try {
            QuarticParameters qp = solve_parameters(a);
            BranchStructure b = branch_points(qpoly(qp.alpha, qp.beta, a), a);
            double a23 = std::pow(a, 2.0 / 3.0);
            double want = a23 * (1.0 + 2.0 * std::sqrt(2.0 / 3.0) / a23);
            double dev = std::abs(b.gamma2 * b.gamma2 - want);
            bool ok = b.factor_residual <= 1e-6 && dev <= 5.0 / a23 &&
                      b.gamma1 > 0.0 && b.gamma2 > b.gamma1 &&
                      b.lambda_star.imag() > 0.0;
            pass = pass && ok;
            detail += "a=" + fmt(a) + "(resid=" + fmt(b.factor_residual) +
                      ",dev=" + fmt(dev) + ",bound=" + fmt(5.0 / a23) + ") ";
        } catch (const std::exception& e) {
            pass = false;
            detail += std::string("a=") + fmt(a) + " threw: " + e.what() + " ";
        }
    }
    report(4, pass, detail);
}

// 5. Boundary relations at a = 10: 200 interior points per cut, <= 1e-10.
void criterion5() {
    SheetSampler s = make_sampler(10.0);
    double worst = 0.0;
    bool pass = true;
    for (int j : {1, 2}) {
        CheckRecord r = check_boundary_relation(s, j, 200);
        worst = std::max(worst, r.worst);
        pass = pass && r.pass;
    }
    pass = pass && worst <= 1e-10;
    report(5, pass, "worst_residual=" + fmt(worst));
}

// 6. Signs: 2 Im f_j^+ <= -1e-6 at 1%-inset interior points; all four
//    variational cumulative integrals strictly negative.
void criterion6() {
    SheetSampler s = make_sampler(10.0);
    bool pass = true;
    std::string detail;
    for (int j : {1, 2}) {
        CheckRecord ms = check_measure_sign(s, j, 200);
        CheckRecord var = check_variational(s, j);
        pass = pass && ms.pass && var.pass && ms.worst <= -1e-6 && var.worst < 0.0;
        detail += "j=" + std::to_string(j) + "(2Im_max=" + fmt(ms.worst) +
                  ",var_max=" + fmt(var.worst) + ") ";
    }
    report(6, pass, detail);
}

// 7. Edge exponents in [0.45, 0.55] at all four endpoints, a = 10.
void criterion7() {
    SheetSampler s = make_sampler(10.0);
    const BranchStructure& b = s.branch();
    bool pass = true;
    std::string detail;
    for (double e : {-b.gamma2, -b.gamma1, b.gamma1, b.gamma2}) {
        CheckRecord r = check_edge_exponent(s, e);
        pass = pass && r.pass && r.worst >= 0.45 && r.worst <= 0.55;
        detail += fmt(r.worst) + " ";
    }
    report(7, pass, "slopes= " + detail);
}

// 8. Entirety: pointwise H2/H3 identities at 50 seeded z (incl. near-cut)
//    and cut jumps <= 1e-8.
void criterion8() {
    SheetSampler s = make_sampler(10.0);
    std::vector<CheckRecord> recs = check_entirety(s);
    bool pass = true;
    double worst = 0.0;
    for (const CheckRecord& r : recs) {
        pass = pass && r.pass;
        worst = std::max(worst, r.worst);
    }
    report(8, pass,
           "checks=" + std::to_string(recs.size()) + " worst=" + fmt(worst));
}

// 9. Density: masses 1/2 each and total 1 (1e-6), grid symmetry 1e-10,
//    g decay at 100 gamma2 to 1e-3 (against the measured 1/z coefficient),
//    constancy <= 1e-6, outside margins < 0.
void criterion9() {
    SheetSampler s = make_sampler(10.0);
    const BranchStructure& b = s.branch();
    DensityProfile p = profile(s, 200);
    double m_err = std::max(std::abs(p.masses[0] - 0.5), std::abs(p.masses[1] - 0.5));
    double t_err = std::abs(p.total_mass - 1.0);
    // The grid is Chebyshev-symmetric: rho on I1 reversed equals rho on I2.
    std::size_t n = p.rho.size() / 2;
    double sym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        sym = std::max(sym, std::abs(p.rho[i] - p.rho[2 * n - 1 - i]));
    GFunctionSet gf(s);
    double Z = 100.0 * b.gamma2;
    double decay = 0.0;
    for (int j : {1, 2})
        decay = std::max(decay, std::abs(gf.g_above(Z, j).real() - std::log(Z) -
                                         gf.decay_coef(j) / Z));
    double constancy = 0.0, margin = -1e300;
    for (int j : {1, 2}) {
        GConditions gc = check_g_conditions(gf, j);
        constancy = std::max(constancy, gc.constancy_dev);
        margin = std::max(margin, gc.outside_margin);
    }
    bool pass = m_err <= 1e-6 && t_err <= 1e-6 && sym <= 1e-10 && decay <= 1e-3 &&
                constancy <= 1e-6 && margin < 0.0;
    report(9, pass,
           "mass_err=" + fmt(m_err) + " total_err=" + fmt(t_err) + " sym=" +
               fmt(sym) + " g_decay=" + fmt(decay) + " constancy=" +
               fmt(constancy) + " outside_margin=" + fmt(margin));
}

// 10. Gaussian Monte Carlo at a = 2 and 3: n = 400, 100 samples, 80 bins,
//     cdf sup distance <= 0.02, cluster edges within 0.1, under 5 min.
void criterion10() {
    double t0 = now_seconds();
    bool pass = true;
    std::string detail;
    for (double a : {2.0, 3.0}) {
        SpectrumBatch batch =
            sample_spectrum_gaussian(McConfig{400, 100, 7, 80}, a);
        SpectralCurve curve = gaussian_curve(a, 0.5);
        BranchStructure br = branch_points(discriminant_t(curve), a);
        SheetSampler s(curve, br);
        HistogramComparison cmp = compare_histogram(batch, s);
        auto e = cluster_edges(batch);
        double edge_dev = std::max(
            std::max(std::abs(e[0] + br.gamma2), std::abs(e[1] + br.gamma1)),
            std::max(std::abs(e[2] - br.gamma1), std::abs(e[3] - br.gamma2)));
        bool ok = cmp.cdf_sup_distance <= 0.02 && edge_dev <= 0.1;
        pass = pass && ok;
        detail += "a=" + fmt(a) + "(ks=" + fmt(cmp.cdf_sup_distance) +
                  ",edge_dev=" + fmt(edge_dev) + ") ";
    }
    double dt = now_seconds() - t0;
    pass = pass && dt <= 300.0;
    report(10, pass, detail + "time=" + fmt(dt) + "s");
}

// 11. Determinism: repeated CLI runs with fixed seed are byte-identical.
void criterion11() {
#ifndef ESCURVE_CLI_PATH
    report(11, false, "CLI path not wired into the build");
#else
    auto run_to = [&](const std::string& args, const std::string& path) {
        std::string cmd =
            std::string(ESCURVE_CLI_PATH) + " " + args + " > " + path + " 2>&1";
        return std::system(cmd.c_str());
    };
    auto slurp = [](const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    bool pass = true;
    std::string detail;
    int idx = 0;
    for (const std::string& args :
         {std::string("quartic-solve --a 10"),
          std::string("mc --a 2 --n 200 --samples 20 --seed 7 --bins 40 --format csv"),
          std::string("density --a 10 --grid 100 --format csv"),
          std::string("report --a 10")}) {
        std::string p1 = "acc_cli_" + std::to_string(idx) + "a.txt";
        std::string p2 = "acc_cli_" + std::to_string(idx) + "b.txt";
        ++idx;
        int r1 = run_to(args, p1), r2 = run_to(args, p2);
        std::string s1 = slurp(p1), s2 = slurp(p2);
        bool ok = r1 == 0 && r2 == 0 && !s1.empty() && s1 == s2;
        pass = pass && ok;
        if (!ok) detail += "[mismatch: " + args + "] ";
        std::remove(p1.c_str());
        std::remove(p2.c_str());
    }
    report(11, pass, pass ? "4 subcommands byte-identical across reruns" : detail);
#endif
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    criterion11();
    if (failures == 0)
        std::printf("acceptance: all 11 criteria PASS\n");
    else
        std::printf("acceptance: %d criterion(s) FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
