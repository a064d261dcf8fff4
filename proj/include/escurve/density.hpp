#pragma once

// Limiting mean density of states from the sheet jumps, the g-functions
// with their normalization constants, per-cut masses, and the g-level
// equality/inequality condition checks.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "escurve/curve.hpp"
#include "escurve/quadrature.hpp"
#include "escurve/sheets.hpp"

namespace escurve {

struct DensityProfile {
    std::vector<std::pair<double, double>> support;
    std::vector<double> xs;
    std::vector<double> rho;
    std::vector<double> masses;
    double total_mass = 0.0;
};

// rho(x) = -(1/pi) Im f_j^+(x) on I_j, zero off the support.
inline double density_at(const SheetSampler& s, double x) {
    const BranchStructure& b = s.branch();
    int j;
    if (b.in_i1(x))
        j = 1;
    else if (b.in_i2(x))
        j = 2;
    else
        return 0.0;
    double v = -s.f_above(x, j).imag() / std::numbers::pi;
    return v > 0.0 ? v : 0.0;
}

inline DensityProfile profile(const SheetSampler& s, int points_per_cut) {
    const BranchStructure& b = s.branch();
    DensityProfile out;
    out.support = {{-b.gamma2, -b.gamma1}, {b.gamma1, b.gamma2}};
    for (auto [lo, hi] : out.support) {
        // Chebyshev-spaced abscissae cluster near the square-root edges.
        for (int k = 0; k < points_per_cut; ++k) {
            double th = std::numbers::pi * (k + 0.5) / points_per_cut;
            double x = 0.5 * (lo + hi) - 0.5 * (hi - lo) * std::cos(th);
            out.xs.push_back(x);
            out.rho.push_back(density_at(s, x));
        }
        double mass = integrate([&](double x) { return density_at(s, x); }, lo, hi, 4,
                                true, true);
        out.masses.push_back(mass);
    }
    out.total_mass = out.masses[0] + out.masses[1];
    return out;
}

// g_j(z) = (1/x_j) int_{delta_j}^z f_j - c_j with the contour in the cut
// plane C \ (-inf, delta_j) and c_j enforcing g_j(z) = log z + O(1/z).
class GFunctionSet {
  public:
    explicit GFunctionSet(const SheetSampler& s) : s_(s) {
        const BranchStructure& b = s_.branch();
        tail_cut_ = 1e4 * b.gamma2;
        for (int j = 1; j <= 2; ++j) {
            double xj = frac(j);
            double T = tail_cut_;
            // O(1/z^2) coefficient of f_j, used for the analytic tail.
            d_[j - 1] = (s_.f_above(T, j).real() - xj / T) * T * T;
            c_[j - 1] = compute_c(j);
        }
    }

    double frac(int j) const { return j == 1 ? s_.curve().x1 : s_.curve().x2; }
    double delta(int j) const {
        return j == 1 ? -s_.branch().gamma1 : s_.branch().gamma2;
    }
    double c1() const { return c_[0]; }
    double c2() const { return c_[1]; }
    // 1/z coefficient of g_j(z) - log z.
    double decay_coef(int j) const { return -d_[j - 1] / frac(j); }

    // Boundary value g_j(x + i0+) for real x; complex on the cut I_j.
    cplx g_above(double x, int j) const {
        const BranchStructure& b = s_.branch();
        double from = delta(j);
        cplx acc = 0.0;
        // Split at branch points between the anchor and x so every
        // square-root kink sits at a panel edge.
        std::vector<double> bps{b.gamma2, b.gamma1, -b.gamma1, -b.gamma2};
        double cur = from;
        auto seg = [&](double lo, double hi) {
            acc += integrate([&](double t) { return s_.f_above(t, j); }, lo, hi,
                             panels_for(lo, hi), true, true);
        };
        if (x < from) {
            for (double bp : bps)
                if (bp < cur - 1e-14 && bp > x + 1e-14) {
                    seg(cur, bp);
                    cur = bp;
                }
        } else {
            for (double bp : {b.gamma1, b.gamma2})
                if (bp > cur + 1e-14 && bp < x - 1e-14) {
                    seg(cur, bp);
                    cur = bp;
                }
        }
        if (x != cur) seg(cur, x);
        return acc / frac(j) - c_[j - 1];
    }

    // g_j at complex z off (-inf, delta_j], via a vertical-then-horizontal
    // dog-leg from the cut endpoint.
    cplx g(cplx z, int j) const {
        if (z.imag() == 0.0) {
            if (z.real() <= delta(j))
                throw std::invalid_argument("g: z on the excluded half-line");
            return g_above(z.real(), j);
        }
        if (z.imag() < 0.0) return std::conj(g(std::conj(z), j));
        const double d0 = delta(j);
        cplx mid(d0, z.imag());
        cplx acc =
            path_integral(cplx(d0, 0.0), mid, true, j) + path_integral(mid, z, false, j);
        return acc / frac(j) - c_[j - 1];
    }

    cplx g0(cplx z) const { return g(z, 1) + g(z, 2); }

    const SheetSampler& sampler() const { return s_; }

  private:
    int panels_for(double lo, double hi) const {
        double len = std::abs(hi - lo) / s_.branch().gamma2;
        return std::min(12, std::max(3, int(2.0 + 2.0 * len)));
    }

    cplx path_integral(cplx z0, cplx z1, bool sqrt_at_start, int j) const {
        cplx dz = z1 - z0;
        return dz * integrate(
                        [&](double t) {
                            cplx z = z0 + t * dz;
                            SheetValues sv = label_sheets(s_.curve(), s_.branch(), z);
                            return (j == 1) ? sv.f1 : sv.f2;
                        },
                        0.0, 1.0, 4, sqrt_at_start, false);
    }

    double compute_c(int j) {
        const BranchStructure& b = s_.branch();
        const double xj = frac(j);
        const double m = b.gamma2;  // split point, > 0 and >= delta_j
        cplx head = 0.0;
        if (delta(j) < m) {
            // Integrate f_j from delta_j to m, splitting at branch points.
            double cur = delta(j);
            for (double bp : {b.gamma1, b.gamma2})
                if (bp > cur + 1e-14 && bp < m - 1e-14) {
                    head += integrate([&](double t) { return s_.f_above(t, j); }, cur, bp,
                                      6, true, true);
                    cur = bp;
                }
            if (m != cur)
                head += integrate([&](double t) { return s_.f_above(t, j); }, cur, m, 6,
                                  true, true);
        }
        // Regularized integral from m to infinity: a finite leg, then an
        // inverted leg to the truncation point, then the analytic tail.
        double m2 = 2.0 * b.gamma2;
        double i0 = integrate(
            [&](double t) { return s_.f_above(t, j).real() - xj / t; }, m, m2, 4,
            std::abs(m - delta(j)) < 1e-12, false);
        double T = tail_cut_;
        double inv = integrate(
            [&](double u) {
                double t = m2 / u;
                return (s_.f_above(t, j).real() - xj / t) * m2 / (u * u);
            },
            m2 / T, 1.0, 6, false, false);
        double tail = d_[j - 1] / T;
        return head.real() / xj + (i0 + inv + tail) / xj - std::log(m);
    }

    SheetSampler s_;
    double c_[2]{};
    double d_[2]{};
    double tail_cut_ = 0.0;
};

struct GConditions {
    double ell = 0.0;
    double constancy_dev = 0.0;
    double outside_margin = 0.0;
    double outside_margin_at = 0.0;
};

// Equality condition on the cut and strict inequality off it, in the
// normalization x_j (g_j^+ + g_j^-) + x_k g_k - V_j - x_j ell_j, whose
// on-cut combination is real.
inline GConditions check_g_conditions(const GFunctionSet& gf, int j) {
    const SheetSampler& s = gf.sampler();
    const BranchStructure& b = s.branch();
    const SpectralCurve& c = s.curve();
    const int k = 3 - j;
    const double xj = gf.frac(j), xk = gf.frac(k);
    // V with the constant fixed to zero; V_j = V -(+) a z for j = 2 (1).
    RPoly v = [&] {
        std::vector<double> vc(c.c2.c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.c2.c.size(); ++i) vc[i + 1] = c.c2.c[i] / double(i + 1);
        return RPoly(vc);
    }();
    auto comb = [&](double x) {
        double gj = gf.g_above(x, j).real();
        double gk = gf.g_above(x, k).real();
        double vj = v(x) + (j == 1 ? c.a * x : -c.a * x);
        return 2.0 * xj * gj + xk * gk - vj;
    };
    const double lo = (j == 1) ? -b.gamma2 : b.gamma1;
    const double hi = (j == 1) ? -b.gamma1 : b.gamma2;
    GConditions out;
    double mid = 0.5 * (lo + hi);
    out.ell = comb(mid) / xj;
    const int n_on = 11;
    for (int i = 0; i < n_on; ++i) {
        double x = lo + (hi - lo) * (1e-4 + (1.0 - 2e-4) * i / (n_on - 1));
        out.constancy_dev = std::max(out.constancy_dev,
                                     std::abs(comb(x) - xj * out.ell));
    }
    // Off-cut grid on [-2.5 gamma2, 2.5 gamma2] plus near-edge flanks.
    std::vector<double> grid;
    const int n_out = 41;
    for (int i = 0; i < n_out; ++i)
        grid.push_back(-2.5 * b.gamma2 + 5.0 * b.gamma2 * i / (n_out - 1));
    double flank = 0.02 * b.cut_length();
    grid.push_back(lo - flank);
    grid.push_back(hi + flank);
    bool first = true;
    for (double x : grid) {
        if (x > lo - 0.999 * flank && x < hi + 0.999 * flank)
            continue;  // inside I_j (plus a small flank margin)
        double margin = comb(x) - xj * out.ell;
        if (first || margin > out.outside_margin) {
            out.outside_margin = margin;
            out.outside_margin_at = x;
            first = false;
        }
    }
    return out;
}

}  // namespace escurve
