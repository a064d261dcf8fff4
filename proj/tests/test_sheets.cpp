#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "escurve/params.hpp"
#include "escurve/rng.hpp"
#include "escurve/sheets.hpp"

using namespace escurve;
using Catch::Approx;

namespace {
struct Solved {
    SpectralCurve curve;
    BranchStructure branch;
};
Solved solved_quartic(double a) {
    QuarticParameters qp = solve_parameters(a);
    SpectralCurve c = quartic_curve(a, qp.alpha, qp.beta);
    return {c, branch_points(discriminant_t(c), a)};
}
}  // namespace

TEST_CASE("discriminant in t: explicit coefficients and fallback equivalence") {
    SECTION("coefficients at (0,0,1)") {
        SpectralCurve c = quartic_curve(1.0, 0.0, 0.0);
        RPoly q = discriminant_t(c);
        std::vector<double> want{0.0, 0.0, 0.0, -279.0, -162.0, 9.0, 36.0};
        REQUIRE(q.c.size() == want.size());
        for (std::size_t i = 0; i < want.size(); ++i) CHECK(q.c[i] == Approx(want[i]));
    }
    SECTION("q(z^2) is proportional to the z-discriminant") {
        SpectralCurve c = quartic_curve(1.3, -0.8, 0.5);
        RPoly q = discriminant_t(c);
        RPoly dz = discriminant_z(c);
        SplitMix64 rng(11);
        double ratio0 = 0.0;
        for (int i = 0; i < 20; ++i) {
            double z = -3.0 + 6.0 * rng.next_unit();
            double lhs = q(cplx(z * z)).real();
            double rhs = dz(cplx(z)).real();
            if (std::abs(rhs) < 1e-8) continue;
            double ratio = lhs / rhs;
            if (ratio0 == 0.0) ratio0 = ratio;
            CHECK(ratio == Approx(ratio0).epsilon(1e-8));
        }
        REQUIRE(ratio0 != 0.0);
    }
    SECTION("at the solved parameters q itself is degenerate (double roots)") {
        Solved s = solved_quartic(10.0);
        RPoly q = discriminant_t(s.curve);
        ScaledValue res = resultant_scaled(q, q.derivative());
        // Normalize by the scale of a nearby regular point.
        RPoly qreg = qpoly(s.curve.alpha * 1.05, s.curve.beta, 10.0);
        ScaledValue ref = resultant_scaled(qreg, qreg.derivative());
        CHECK(res.log10_abs() < ref.log10_abs() - 6.0);
    }
}

TEST_CASE("branch points at a = 10 match the expansion brackets") {
    Solved s = solved_quartic(10.0);
    const BranchStructure& b = s.branch;
    CHECK(b.gamma1 > 0.0);
    CHECK(b.gamma2 > b.gamma1);
    CHECK(b.gamma2 * b.gamma2 == Approx(6.27).margin(0.3));
    CHECK(b.gamma1 * b.gamma1 == Approx(3.01).margin(0.3));
    CHECK(b.lambda_star.imag() > 0.0);
    CHECK(b.factor_residual <= 1e-6);
}

TEST_CASE("branch point classification rejects a wrong signature") {
    // Degree-6 q with six simple real roots: no square structure.
    RPoly q{1.0};
    for (double r : {1.0, 2.0, 3.0, 4.0, 5.0, 6.0}) q = q * RPoly{-r, 1.0};
    CHECK_THROWS_AS(branch_points(q, 1.0), ClassifyError);
}

TEST_CASE("roots_at structural values") {
    SECTION("quartic at z=0: {0, +sqrt(-alpha), -sqrt(-alpha)}") {
        SpectralCurve c = quartic_curve(2.0, -9.0, 1.0);
        auto r = roots_at(c, cplx(0.0));
        std::vector<double> re{r[0].real(), r[1].real(), r[2].real()};
        std::sort(re.begin(), re.end());
        CHECK(re[0] == Approx(-3.0));
        CHECK(re[1] == Approx(0.0).margin(1e-12));
        CHECK(re[2] == Approx(3.0));
    }
    SECTION("gaussian a=2 at z=0: {0, +-sqrt(3)}") {
        SpectralCurve c = gaussian_curve(2.0, 0.5);
        auto r = roots_at(c, cplx(0.0));
        std::vector<double> re{r[0].real(), r[1].real(), r[2].real()};
        std::sort(re.begin(), re.end());
        CHECK(re[0] == Approx(-std::sqrt(3.0)));
        CHECK(re[1] == Approx(0.0).margin(1e-12));
        CHECK(re[2] == Approx(std::sqrt(3.0)));
    }
}

TEST_CASE("label_sheets asymptotics and symmetries at a = 10") {
    Solved s = solved_quartic(10.0);
    SECTION("r2 near a + 1/(2z) at z = 10") {
        SheetValues sv = label_sheets(s.curve, s.branch, cplx(10.0, 0.0));
        CHECK(std::abs(sv.r2 - cplx(10.05)) <= 0.05);
    }
    SECTION("Schwarz reflection") {
        cplx z(1.3, 0.8);
        SheetValues up = label_sheets(s.curve, s.branch, z);
        SheetValues dn = label_sheets(s.curve, s.branch, std::conj(z));
        CHECK(std::abs(dn.r1 - std::conj(up.r1)) <= 1e-12 * (1.0 + std::abs(up.r1)));
        CHECK(std::abs(dn.r2 - std::conj(up.r2)) <= 1e-12 * (1.0 + std::abs(up.r2)));
        CHECK(std::abs(dn.r3 - std::conj(up.r3)) <= 1e-12 * (1.0 + std::abs(up.r3)));
    }
    SECTION("r1(-z) = -r2(z) for the symmetric quartic") {
        for (cplx z : {cplx(1.1, 0.9), cplx(-3.0, 0.4), cplx(0.2, 2.0)}) {
            SheetValues p = label_sheets(s.curve, s.branch, z);
            SheetValues m = label_sheets(s.curve, s.branch, -z);
            CHECK(std::abs(m.r1 + p.r2) <= 1e-9 * (1.0 + std::abs(p.r2)));
            CHECK(std::abs(m.r2 + p.r1) <= 1e-9 * (1.0 + std::abs(p.r1)));
        }
    }
    SECTION("|z f_j - 1/2| <= 10/|z| far out") {
        for (double mag : {10.0 * s.branch.gamma2, 40.0 * s.branch.gamma2}) {
            for (double arg : {0.1, 1.2, 2.6}) {
                cplx z = mag * cplx(std::cos(arg), std::sin(arg));
                SheetValues sv = label_sheets(s.curve, s.branch, z);
                CHECK(std::abs(z * sv.f1 - 0.5) <= 10.0 / std::abs(z));
                CHECK(std::abs(z * sv.f2 - 0.5) <= 10.0 / std::abs(z));
            }
        }
    }
    SECTION("Vieta residuals recorded in SheetValues") {
        SheetValues sv = label_sheets(s.curve, s.branch, cplx(0.7, 0.4));
        for (double r : sv.residuals) CHECK(r <= 1e-12);
        cplx sum = sv.r1 + sv.r2 + sv.r3;
        CHECK(std::abs(sum - s.curve.c2(sv.z)) <= 1e-10 * (1.0 + std::abs(sum)));
    }
    SECTION("too close to a real branch point raises") {
        double eps = 0.1 * s.branch.safety_radius();
        CHECK_THROWS_AS(label_sheets(s.curve, s.branch, cplx(s.branch.gamma2 + eps, 0.0)),
                        ContinuationError);
    }
}

TEST_CASE("monodromy around branch points and cuts") {
    Solved s = solved_quartic(10.0);
    const BranchStructure& b = s.branch;
    double g1 = b.gamma1, g2 = b.gamma2, h = 0.4 * (g2 - g1);
    auto run_loop = [&](double lo, double hi, double height) {
        // Rectangle with vertical sides at lo and hi crossing the real
        // axis, traversed from the starting point (lo, height) and back.
        std::array<cplx, 5> corners{cplx(lo, height), cplx(hi, height),
                                    cplx(hi, -height), cplx(lo, -height),
                                    cplx(lo, height)};
        SheetValues sv = label_sheets(s.curve, s.branch, corners[0]);
        std::array<cplx, 3> cur{sv.r1, sv.r2, sv.r3};
        std::array<cplx, 3> start = cur;
        for (int i = 0; i + 1 < 5; ++i)
            cur = detail::continue_segment(s.curve, cur, corners[i], corners[i + 1]);
        return std::pair{start, cur};
    };
    SECTION("a loop around the single endpoint -gamma1 swaps r1 and r3") {
        auto [start, fin] = run_loop(-g1 - 0.5 * h, -g1 + 0.5 * h, 0.5 * h);
        CHECK(std::abs(fin[0] - start[2]) <= 1e-8 * (1.0 + std::abs(start[2])));
        CHECK(std::abs(fin[2] - start[0]) <= 1e-8 * (1.0 + std::abs(start[0])));
        CHECK(std::abs(fin[1] - start[1]) <= 1e-8 * (1.0 + std::abs(start[1])));
    }
    SECTION("a loop around the single endpoint gamma2 swaps r2 and r3") {
        auto [start, fin] = run_loop(g2 - 0.5 * h, g2 + 0.5 * h, 0.5 * h);
        CHECK(std::abs(fin[0] - start[0]) <= 1e-8 * (1.0 + std::abs(start[0])));
        CHECK(std::abs(fin[1] - start[2]) <= 1e-8 * (1.0 + std::abs(start[2])));
        CHECK(std::abs(fin[2] - start[1]) <= 1e-8 * (1.0 + std::abs(start[1])));
    }
    SECTION("a loop around all of I2 returns every sheet to itself") {
        // Both endpoint swaps act on the same pair, so their composition
        // is the identity: r1 (analytic off I1) and the others close up.
        auto [start, fin] = run_loop(0.0, g2 + h, h);
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(fin[k] - start[k]) <= 1e-8 * (1.0 + std::abs(start[k])));
    }
}

TEST_CASE("boundary values on the cuts") {
    Solved s = solved_quartic(10.0);
    const BranchStructure& b = s.branch;
    for (int j : {1, 2}) {
        double lo = (j == 1) ? -b.gamma2 : b.gamma1;
        double hi = (j == 1) ? -b.gamma1 : b.gamma2;
        for (double frac : {0.2, 0.5, 0.8}) {
            double x = lo + frac * (hi - lo);
            BoundaryValues bv = boundary_values(s.curve, b, x, j);
            CHECK(bv.f_minus == std::conj(bv.f_plus));
            CHECK(bv.f_plus.imag() < 0.0);
            CHECK(bv.r3_minus == std::conj(bv.r3_plus));

            // Richardson-extrapolated limit of label_sheets from above.
            std::array<double, 3> deltas{1e-3 * (1.0 + std::abs(x)),
                                         1e-4 * (1.0 + std::abs(x)),
                                         1e-5 * (1.0 + std::abs(x))};
            std::array<cplx, 3> vals;
            for (int k = 0; k < 3; ++k) {
                SheetValues sv = label_sheets(s.curve, b, cplx(x, deltas[k]));
                vals[k] = (j == 1) ? sv.f1 : sv.f2;
            }
            // Quadratic (Lagrange) extrapolation to delta = 0.
            cplx extrap = 0.0;
            for (int k = 0; k < 3; ++k) {
                double w = 1.0;
                for (int m = 0; m < 3; ++m)
                    if (m != k) w *= -deltas[m] / (deltas[k] - deltas[m]);
                extrap += w * vals[k];
            }
            CHECK(std::abs(extrap - bv.f_plus) <= 1e-6);
        }
    }
    SECTION("outside the cut or within the safety radius raises") {
        CHECK_THROWS(boundary_values(s.curve, b, 0.0, 2));
        CHECK_THROWS_AS(
            boundary_values(s.curve, b, b.gamma2 - 0.1 * b.safety_radius(), 2),
            ContinuationError);
    }
}

TEST_CASE("SheetSampler agrees with boundary_values and label_sheets") {
    Solved s = solved_quartic(10.0);
    SheetSampler sampler(s.curve, s.branch);
    const BranchStructure& b = s.branch;
    double x_on = 0.5 * (b.gamma1 + b.gamma2);
    BoundaryValues bv = boundary_values(s.curve, b, x_on, 2);
    CHECK(std::abs(sampler.f_above(x_on, 2) - bv.f_plus) <= 1e-13);
    CHECK(std::abs(sampler.r3_below(x_on) - bv.r3_minus) <= 1e-13);

    for (double x : {-3.2 * b.gamma2, 0.3, 1.9 * b.gamma2}) {
        auto lab = sampler.labeled(x);
        SheetValues sv = label_sheets(s.curve, b, cplx(x, 0.0));
        CHECK(std::abs(lab[0] - sv.r1) <= 1e-9 * (1.0 + std::abs(sv.r1)));
        CHECK(std::abs(lab[1] - sv.r2) <= 1e-9 * (1.0 + std::abs(sv.r2)));
        CHECK(std::abs(lab[2] - sv.r3) <= 1e-9 * (1.0 + std::abs(sv.r3)));
    }
}

TEST_CASE("Cardano auxiliaries and the square-root branch") {
    Solved s = solved_quartic(10.0);
    CardanoAux aux = cardano_aux(s.curve, s.branch);
    CHECK(aux.eta > s.branch.gamma2);
    for (int i = 1; i <= 20; ++i) {
        double z = aux.eta * i / 21.0;
        CHECK(aux.bigR(z) > 0.0);
        CHECK(aux.bigH(z) > 0.0);
    }
    for (int i = 1; i <= 10; ++i) {
        double z = aux.eta * (1.0 + i / 5.0);
        CHECK(aux.bigR(z) < 0.0);
    }
    // sqrt(-q(z^2)) branch: negative real on (gamma1, gamma2), positive
    // imaginary beyond gamma2.
    const BranchStructure& b = s.branch;
    for (double frac : {0.25, 0.5, 0.75}) {
        cplx v = sqrt_minus_q(s.curve, b, cplx(b.gamma1 + frac * (b.gamma2 - b.gamma1)));
        CHECK(v.real() < 0.0);
        CHECK(std::abs(v.imag()) <= 1e-9 * std::abs(v.real()));
    }
    for (double z : {b.gamma2 * 1.2, b.gamma2 * 2.0}) {
        cplx v = sqrt_minus_q(s.curve, b, cplx(z));
        CHECK(v.imag() > 0.0);
        CHECK(std::abs(v.real()) <= 1e-9 * std::abs(v.imag()));
    }
    // The branch squares back to -q(z^2).
    RPoly q = discriminant_t(s.curve);
    for (cplx z : {cplx(1.1, 0.7), cplx(3.0, -0.2)}) {
        cplx v = sqrt_minus_q(s.curve, b, z);
        cplx want = -q(z * z);
        CHECK(std::abs(v * v - want) <= 1e-8 * (1.0 + std::abs(want)));
    }
}
