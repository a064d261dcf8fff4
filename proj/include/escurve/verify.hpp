#pragma once

// Numerical certification of the equilibrium conditions at the f-level:
// boundary relations, measure sign, variational inequalities, edge
// exponents, entirety of the symmetric combinations H2/H3, and the
// Cardano-auxiliary sign table, assembled into a machine-readable report.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "escurve/curve.hpp"
#include "escurve/params.hpp"
#include "escurve/quadrature.hpp"
#include "escurve/rng.hpp"
#include "escurve/sheets.hpp"

namespace escurve {

struct CheckRecord {
    std::string name;
    std::string grid;
    double worst = 0.0;  // worst residual or margin
    double at = 0.0;     // location of the worst case
    bool pass = false;
};

struct VerificationReport {
    double a = 0, alpha = 0, beta = 0, gamma1 = 0, gamma2 = 0;
    std::vector<CheckRecord> checks;
    bool pass = false;
    std::vector<std::string> skipped;

    void add(CheckRecord r) { checks.push_back(std::move(r)); }
    void finalize() {
        pass = true;
        for (const auto& c : checks) pass = pass && c.pass;
        if (!skipped.empty()) pass = false;
    }
};

inline nlohmann::json to_json(const VerificationReport& r) {
    nlohmann::json j;
    j["a"] = r.a;
    j["alpha"] = r.alpha;
    j["beta"] = r.beta;
    j["gamma1"] = r.gamma1;
    j["gamma2"] = r.gamma2;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : r.checks)
        j["checks"].push_back(
            {{"name", c.name}, {"grid", c.grid}, {"worst", c.worst}, {"at", c.at}, {"pass", c.pass}});
    j["skipped"] = r.skipped;
    j["pass"] = r.pass;
    return j;
}

// max over an interior grid of |f_j^+ + f_j^- + f_k - V_j'|.
inline CheckRecord check_boundary_relation(const SheetSampler& s, int j, int grid_size,
                                           double tol = 1e-10) {
    const BranchStructure& b = s.branch();
    const SpectralCurve& c = s.curve();
    const double lo = (j == 1) ? -b.gamma2 : b.gamma1;
    const double hi = (j == 1) ? -b.gamma1 : b.gamma2;
    const int k = 3 - j;
    CheckRecord rec;
    rec.name = "boundary_relation_I" + std::to_string(j);
    rec.grid = std::to_string(grid_size) + " interior points";
    for (int i = 0; i < grid_size; ++i) {
        double x = lo + (hi - lo) * (i + 1.0) / (grid_size + 1.0);
        BoundaryValues bv = boundary_values(c, b, x, j);
        cplx fk = s.f_above(x, k);
        double vjp = c.c2(x) + (j == 1 ? c.a : -c.a);
        double res = std::abs(bv.f_plus + bv.f_minus + fk - vjp);
        if (res > rec.worst) {
            rec.worst = res;
            rec.at = x;
        }
    }
    rec.pass = rec.worst <= tol;
    return rec;
}

// (i) 2 Im f_j^+ strictly negative inside each cut.
inline CheckRecord check_measure_sign(const SheetSampler& s, int j, int grid_size) {
    const BranchStructure& b = s.branch();
    const double lo = (j == 1) ? -b.gamma2 : b.gamma1;
    const double hi = (j == 1) ? -b.gamma1 : b.gamma2;
    const double off = 0.01 * (hi - lo);
    CheckRecord rec;
    rec.name = "measure_sign_I" + std::to_string(j);
    rec.grid = std::to_string(grid_size) + " points, 1% inset";
    bool first = true;
    for (int i = 0; i < grid_size; ++i) {
        double x = (lo + off) + (hi - lo - 2.0 * off) * i / (grid_size - 1.0);
        double v = 2.0 * s.f_above(x, j).imag();
        if (first || v > rec.worst) {
            rec.worst = v;
            rec.at = x;
            first = false;
        }
    }
    rec.pass = rec.worst <= -1e-6;
    return rec;
}

namespace detail {

// Variational integrand for sheet j: Re(r_j - r3^-).
inline double variational_integrand(const SheetSampler& s, double x, int j) {
    std::array<cplx, 3> r = s.labeled(x);
    cplx rj = (j == 1) ? r[0] : r[1];
    return (rj - s.r3_below(x)).real();
}

}  // namespace detail

// (ii) cumulative variational integrals, strictly negative at every
// checkpoint on the complementary intervals (truncated at 10 gamma2).
inline CheckRecord check_variational(const SheetSampler& s, int j, int per_interval = 8) {
    const BranchStructure& b = s.branch();
    const double g1 = b.gamma1, g2 = b.gamma2, far = 10.0 * b.gamma2;
    auto w = [&](double x) { return detail::variational_integrand(s, x, j); };
    CheckRecord rec;
    rec.name = "variational_j" + std::to_string(j);
    rec.grid = std::to_string(per_interval) + " checkpoints per interval";
    bool first = true;
    auto note = [&](double x, double v) {
        if (first || v > rec.worst) {
            rec.worst = v;
            rec.at = x;
            first = false;
        }
    };
    const double sgn = (j == 1) ? 1.0 : -1.0;  // j=2 mirrors j=1 under x -> -x
    // Interval A: from the outer endpoint of I_j away from the origin.
    // Interval B: the gap; C: the other cut; D: beyond the other cut.
    // Coordinates below are for j=1; mirror by sgn for j=2.
    auto W = [&](double x) { return w(sgn * x); };
    double eps = b.safety_radius();
    for (int i = 1; i <= per_interval; ++i) {
        double x = -g2 - (far - g2) * i / per_interval;  // leftward from -gamma2
        double v = -sgn * integrate(W, x, -g2, 4, false, true);
        note(sgn * x, v);
    }
    double acc = 0.0, cur = -g1 + eps;
    for (int i = 1; i <= per_interval; ++i) {  // across the gap
        double x = -g1 + (g1 - (-g1)) * i / per_interval - (i == per_interval ? eps : 0.0);
        acc += sgn * integrate(W, cur, x, 3, i == 1, i == per_interval);
        cur = x;
        note(sgn * x, acc);
    }
    for (int i = 1; i <= per_interval; ++i) {  // across the other cut
        double x = g1 + (g2 - g1) * i / per_interval - (i == per_interval ? eps : 0.0);
        acc += sgn * integrate(W, cur, x, 3, i == 1, i == per_interval);
        cur = x;
        note(sgn * x, acc);
    }
    for (int i = 1; i <= per_interval; ++i) {  // beyond the other cut
        double x = g2 + (far - g2) * i / per_interval;
        acc += sgn * integrate(W, cur, x, 3, i == 1, false);
        cur = x;
        note(sgn * x, acc);
    }
    rec.pass = rec.worst < 0.0;
    return rec;
}

// (iii) jump phase theta_j positive, decreasing along the cut, -> 0 at
// the right endpoint.
inline CheckRecord check_theta_monotone(const SheetSampler& s, int j, int grid_size = 24) {
    const BranchStructure& b = s.branch();
    const double lo = (j == 1) ? -b.gamma2 : b.gamma1;
    const double hi = (j == 1) ? -b.gamma1 : b.gamma2;
    const double xj = (j == 1) ? s.curve().x1 : s.curve().x2;
    CheckRecord rec;
    rec.name = "theta_monotone_I" + std::to_string(j);
    rec.grid = std::to_string(grid_size) + " points";
    auto theta = [&](double x) {
        return (2.0 / xj) * integrate([&](double t) { return -s.f_above(t, j).imag(); },
                                      x, hi, 3, false, true);
    };
    double prev = 0.0;
    bool ok = true;
    double worst = 1e300, worst_at = lo;
    for (int i = 0; i < grid_size; ++i) {
        double x = lo + (hi - lo) * (i + 0.5) / grid_size;
        double th = theta(x);
        if (th <= 0.0) ok = false;
        if (i > 0 && th >= prev) ok = false;
        double gapv = (i > 0) ? prev - th : th;
        if (gapv < worst) {
            worst = gapv;
            worst_at = x;
        }
        prev = th;
    }
    // -> 0 at the right endpoint
    if (theta(hi - 1e-3 * (hi - lo)) > 1e-3 * theta(lo + 1e-3 * (hi - lo))) ok = false;
    rec.worst = worst;
    rec.at = worst_at;
    rec.pass = ok;
    return rec;
}

// Least-squares slope of log(-Im f_j^+) against log(distance) near an
// endpoint; the generic square-root edge gives 1/2.
inline CheckRecord check_edge_exponent(const SheetSampler& s, double endpoint) {
    const BranchStructure& b = s.branch();
    int j = endpoint < 0.0 ? 1 : 2;
    double dir;
    if (std::abs(std::abs(endpoint) - b.gamma1) < std::abs(std::abs(endpoint) - b.gamma2))
        dir = endpoint < 0.0 ? -1.0 : 1.0;  // inner endpoint: move outward from origin
    else
        dir = endpoint < 0.0 ? 1.0 : -1.0;  // outer endpoint: move inward
    CheckRecord rec;
    rec.name = "edge_exponent_" + std::to_string(endpoint);
    rec.grid = "distances 1e-2..1e-5 of cut length";
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int k = 2; k <= 5; ++k) {
        double d = std::pow(10.0, -k) * b.cut_length();
        double x = endpoint + dir * d;
        double v = -s.f_above(x, j).imag();
        if (!(v > 0.0)) continue;
        double lx = std::log(d), ly = std::log(v);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 3) {
        rec.pass = false;
        rec.worst = 0.0;
        return rec;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rec.worst = slope;
    rec.at = endpoint;
    rec.pass = slope >= 0.45 && slope <= 0.55;
    return rec;
}

namespace detail {

inline cplx h2_of(const SpectralCurve& c, cplx z, cplx f1, cplx f2) {
    cplx v1p = c.c2(z) + c.a, v2p = c.c2(z) - c.a;
    return f1 * f1 + f1 * f2 + f2 * f2 - f1 * v1p - f2 * v2p;
}

inline cplx h3_of(const SpectralCurve& c, cplx z, cplx f1, cplx f2) {
    cplx v1p = c.c2(z) + c.a, v2p = c.c2(z) - c.a;
    return f1 * f2 * (f1 + f2) - v1p * f1 * (v1p - f1) - v2p * f2 * (v2p - f2);
}

}  // namespace detail

// Entirety of H2 and H3: vanishing cut jumps, plus the pointwise
// polynomial identities they must equal for the quartic curve.
inline std::vector<CheckRecord> check_entirety(const SheetSampler& s,
                                               std::uint64_t seed = 20260823) {
    const SpectralCurve& c = s.curve();
    const BranchStructure& b = s.branch();
    std::vector<CheckRecord> recs;
    // Cut jumps: on I_j the from-below values are the conjugates.
    for (int j = 1; j <= 2; ++j) {
        const double lo = (j == 1) ? -b.gamma2 : b.gamma1;
        const double hi = (j == 1) ? -b.gamma1 : b.gamma2;
        CheckRecord r2{"h2_jump_I" + std::to_string(j), "40 interior points"};
        CheckRecord r3{"h3_jump_I" + std::to_string(j), "40 interior points"};
        for (int i = 0; i < 40; ++i) {
            double x = lo + (hi - lo) * (i + 1.0) / 41.0;
            cplx f1p = s.f_above(x, 1), f2p = s.f_above(x, 2);
            cplx hp2 = detail::h2_of(c, x, f1p, f2p);
            cplx hm2 = detail::h2_of(c, x, std::conj(f1p), std::conj(f2p));
            cplx hp3 = detail::h3_of(c, x, f1p, f2p);
            cplx hm3 = detail::h3_of(c, x, std::conj(f1p), std::conj(f2p));
            double scale2 = 1.0 + std::abs(x) * std::abs(x);
            double scale3 = 1.0 + std::pow(std::abs(x), 5);
            double d2 = std::abs(hp2 - hm2) / scale2, d3 = std::abs(hp3 - hm3) / scale3;
            if (d2 > r2.worst) {
                r2.worst = d2;
                r2.at = x;
            }
            if (d3 > r3.worst) {
                r3.worst = d3;
                r3.at = x;
            }
        }
        r2.pass = r2.worst <= 1e-8;
        r3.pass = r3.worst <= 1e-8;
        recs.push_back(r2);
        recs.push_back(r3);
    }
    if (c.field == FieldKind::quartic) {
        // H2 = -(z^2 + alpha + a^2) and H3 = -(z^5 + (alpha + a^2) z^3 - beta z).
        CheckRecord r2{"h2_identity", "50 seeded random z (incl. near-cut)"};
        CheckRecord r3{"h3_identity", "50 seeded random z (incl. near-cut)"};
        SplitMix64 rng(seed);
        for (int i = 0; i < 50; ++i) {
            cplx z;
            if (i % 5 == 4) {
                // within 1e-3 of a cut
                double x = b.gamma1 + (b.gamma2 - b.gamma1) * rng.next_unit();
                if (i % 2 == 0) x = -x;
                z = cplx(x, 1e-3 * (rng.next_unit() - 0.5) * 2.0);
                if (z.imag() == 0.0) z += cplx(0.0, 1e-4);
            } else {
                z = cplx((rng.next_unit() - 0.5) * 6.0 * b.gamma2,
                         (rng.next_unit() - 0.5) * 6.0 * b.gamma2);
                if (std::abs(z.imag()) < 1e-6) z += cplx(0.0, 0.01);
            }
            SheetValues sv = label_sheets(c, b, z);
            cplx h2 = detail::h2_of(c, z, sv.f1, sv.f2);
            cplx h3 = detail::h3_of(c, z, sv.f1, sv.f2);
            double az = std::abs(z);
            double d2 = std::abs(h2 + z * z + c.alpha + c.a * c.a) / (1.0 + az * az);
            cplx z3 = z * z * z;
            double d3 = std::abs(h3 + z * z * z3 + (c.alpha + c.a * c.a) * z3 - c.beta * z) /
                        (1.0 + std::pow(az, 5));
            if (d2 > r2.worst) {
                r2.worst = d2;
                r2.at = z.real();
            }
            if (d3 > r3.worst) {
                r3.worst = d3;
                r3.at = z.real();
            }
        }
        r2.pass = r2.worst <= 1e-8;
        r3.pass = r3.worst <= 1e-8;
        recs.push_back(r2);
        recs.push_back(r3);
    }
    return recs;
}

// Sign table of the Cardano auxiliaries and the fixed square-root branch.
inline std::vector<CheckRecord> check_cardano_signs(const SheetSampler& s) {
    const SpectralCurve& c = s.curve();
    const BranchStructure& b = s.branch();
    CardanoAux aux = cardano_aux(c, b);
    std::vector<CheckRecord> recs;
    CheckRecord rr{"cardano_R_sign", "40-point grids on (0,eta) and (eta, 3 eta)"};
    rr.pass = aux.eta > b.gamma2;
    rr.worst = aux.eta;
    for (int i = 1; i <= 40; ++i) {
        double x = aux.eta * i / 41.0;
        if (!(aux.bigR(x) > 0.0)) rr.pass = false;
        double y = aux.eta + (2.0 * aux.eta) * i / 40.0;
        if (!(aux.bigR(y) < 0.0)) rr.pass = false;
    }
    recs.push_back(rr);
    CheckRecord rh{"cardano_H_sign", "40-point grid on (0, 3 gamma2]"};
    rh.pass = true;
    for (int i = 1; i <= 40; ++i) {
        double x = 3.0 * b.gamma2 * i / 40.0;
        double v = aux.bigH(x);
        if (!(v > 0.0)) rh.pass = false;
        if (i == 1 || v < rh.worst) {
            rh.worst = v;
            rh.at = x;
        }
    }
    recs.push_back(rh);
    CheckRecord rq{"sqrt_branch", "sample points on (gamma1,gamma2) and (gamma2, 3 gamma2)"};
    rq.pass = true;
    for (int i = 1; i <= 10; ++i) {
        double x = b.gamma1 + (b.gamma2 - b.gamma1) * i / 11.0;
        cplx v = sqrt_minus_q(c, b, cplx(x, 0.0));
        if (!(v.real() < 0.0) || std::abs(v.imag()) > 1e-9 * std::abs(v)) rq.pass = false;
        double y = b.gamma2 + 2.0 * b.gamma2 * i / 10.0;
        cplx u = sqrt_minus_q(c, b, cplx(y, 0.0));
        if (!(u.imag() > 0.0) || std::abs(u.real()) > 1e-9 * std::abs(u)) rq.pass = false;
    }
    recs.push_back(rq);
    return recs;
}

inline VerificationReport full_report(double a) {
    VerificationReport rep;
    rep.a = a;
    QuarticParameters qp;
    try {
        qp = solve_parameters(a);
    } catch (const std::exception& e) {
        rep.skipped.push_back(std::string("solve_parameters: ") + e.what());
        rep.finalize();
        return rep;
    }
    rep.alpha = qp.alpha;
    rep.beta = qp.beta;
    SpectralCurve curve = quartic_curve(a, qp.alpha, qp.beta);
    BranchStructure branch;
    try {
        branch = branch_points(discriminant_t(curve), a);
    } catch (const std::exception& e) {
        rep.skipped.push_back(std::string("branch_points: ") + e.what());
        rep.finalize();
        return rep;
    }
    rep.gamma1 = branch.gamma1;
    rep.gamma2 = branch.gamma2;
    SheetSampler s(curve, branch);
    for (int j = 1; j <= 2; ++j) {
        rep.add(check_boundary_relation(s, j, 200));
        rep.add(check_measure_sign(s, j, 200));
        rep.add(check_variational(s, j));
        rep.add(check_theta_monotone(s, j));
    }
    for (double e : {-branch.gamma2, -branch.gamma1, branch.gamma1, branch.gamma2})
        rep.add(check_edge_exponent(s, e));
    for (auto& r : check_entirety(s)) rep.add(std::move(r));
    for (auto& r : check_cardano_signs(s)) rep.add(std::move(r));
    rep.finalize();
    return rep;
}

}  // namespace escurve
