#pragma once

// Polynomial root finding: simultaneous Aberth-Ehrlich iteration with
// per-root residuals and cluster merging into multiplicities, plus a
// closed-form cubic solver with Newton polish for the hot path.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "escurve/poly.hpp"

namespace escurve {

struct RootSet {
    std::vector<cplx> roots;
    std::vector<int> multiplicities;
    std::vector<double> residuals;  // |p(root)| / scale of p at |root|

    int total_multiplicity() const {
        int s = 0;
        for (int m : multiplicities) s += m;
        return s;
    }
};

struct RootFindError : std::runtime_error {
    RootSet partial;
    RootFindError(const std::string& msg, RootSet got)
        : std::runtime_error(msg), partial(std::move(got)) {}
};

namespace detail {

inline double residual_of(const CPoly& p, cplx r) {
    double scale = p.scale_at(std::abs(r));
    if (scale == 0.0) scale = 1.0;
    return std::abs(p(r)) / scale;
}

// Aberth-Ehrlich on a polynomial with nonzero constant term.
inline std::vector<cplx> aberth_core(const CPoly& p, double tol, int max_iter) {
    const int n = p.degree();
    std::vector<cplx> x(n);
    // Initial points on a circle of the Cauchy radius, with an
    // irrational-angle offset to break symmetric stalls.
    double lead = std::abs(p.c.back());
    double radius = 0.0;
    for (int k = 0; k < n; ++k) radius = std::max(radius, std::abs(p.c[k]) / lead);
    radius = 1.0 + radius;
    for (int k = 0; k < n; ++k) {
        double th = 2.0 * std::numbers::pi * k / n + 0.437;
        x[k] = radius * cplx(std::cos(th), std::sin(th));
    }
    CPoly dp = p.derivative();
    for (int it = 0; it < max_iter; ++it) {
        double moved = 0.0;
        for (int k = 0; k < n; ++k) {
            cplx pv = p(x[k]);
            if (pv == cplx(0)) continue;
            cplx dv = dp(x[k]);
            cplx newton = (dv != cplx(0)) ? pv / dv : cplx(0.1, 0.1);
            cplx sum = 0.0;
            for (int j = 0; j < n; ++j)
                if (j != k) sum += 1.0 / (x[k] - x[j]);
            cplx denom = 1.0 - newton * sum;
            cplx step = (std::abs(denom) > 1e-300) ? newton / denom : newton;
            x[k] -= step;
            moved = std::max(moved, std::abs(step) / (1.0 + std::abs(x[k])));
        }
        if (moved < tol) break;
    }
    return x;
}

}  // namespace detail

// Merge nearby roots into multiplicity clusters. Radius follows the
// convention 1e-6 * (1 + |root|) unless overridden.
inline RootSet merge_clusters(const std::vector<cplx>& raw,
                              const std::vector<double>& res,
                              double radius_factor = 1e-6) {
    RootSet out;
    std::vector<bool> used(raw.size(), false);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (used[i]) continue;
        std::vector<std::size_t> cluster{i};
        used[i] = true;
        bool grew = true;
        while (grew) {
            grew = false;
            for (std::size_t j = 0; j < raw.size(); ++j) {
                if (used[j]) continue;
                for (std::size_t c : cluster) {
                    double rad = radius_factor * (1.0 + std::abs(raw[c]));
                    if (std::abs(raw[j] - raw[c]) < rad) {
                        cluster.push_back(j);
                        used[j] = true;
                        grew = true;
                        break;
                    }
                }
            }
        }
        cplx mean = 0.0;
        double worst = 0.0;
        for (std::size_t c : cluster) {
            mean += raw[c];
            worst = std::max(worst, res[c]);
        }
        mean /= double(cluster.size());
        out.roots.push_back(mean);
        out.multiplicities.push_back(int(cluster.size()));
        out.residuals.push_back(worst);
    }
    return out;
}

inline RootSet roots(const CPoly& poly, double tol = 1e-12, int max_iter = 400) {
    CPoly p = poly;
    p.trim();
    if (p.is_zero()) throw std::invalid_argument("roots: zero polynomial");
    // Strip exact roots at the origin.
    int zero_mult = 0;
    while (p.c.size() > 1 && p.c.front() == cplx(0)) {
        p.c.erase(p.c.begin());
        ++zero_mult;
    }
    RootSet out;
    if (p.degree() > 0) {
        std::vector<cplx> raw = detail::aberth_core(p, tol, max_iter);
        std::vector<double> res(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) res[i] = detail::residual_of(p, raw[i]);
        out = merge_clusters(raw, res);
        for (double r : out.residuals)
            if (!(r <= std::sqrt(tol)))
                throw RootFindError("roots: residual above tolerance", out);
    }
    if (zero_mult > 0) {
        out.roots.push_back(0.0);
        out.multiplicities.push_back(zero_mult);
        out.residuals.push_back(0.0);
    }
    return out;
}

inline RootSet roots(const RPoly& poly, double tol = 1e-12, int max_iter = 400) {
    return roots(to_complex(poly), tol, max_iter);
}

// Roots of w^3 + b w^2 + c w + d, closed form plus two Newton polish steps.
inline std::array<cplx, 3> cubic_roots(cplx b, cplx c, cplx d) {
    // Dominant-root regime: one root near -b dwarfs the other two. The
    // closed form then cancels catastrophically for the small roots, so
    // recover their sum s and product P from the Vieta relations by a
    // contraction (every step is a division, no subtraction of likes).
    const double ab = std::abs(b);
    if (ab * ab > 1e6 * std::abs(c) && ab * ab * ab > 1e6 * std::abs(d)) {
        cplx s = 0.0, big = -b, prod = 0.0;
        for (int it = 0; it < 64; ++it) {
            big = -b - s;
            prod = -d / big;
            cplx s_new = (c - prod) / big;
            if (std::abs(s_new - s) <= 1e-17 * (1.0 + std::abs(s_new))) {
                s = s_new;
                break;
            }
            s = s_new;
        }
        big = -b - s;
        cplx sq = std::sqrt(s * s - 4.0 * prod);
        cplx u = (std::abs(s + sq) >= std::abs(s - sq)) ? s + sq : s - sq;
        cplx r1, r2;
        if (std::abs(u) < 1e-300) {
            r1 = r2 = 0.0;
        } else {
            r1 = u / 2.0;
            r2 = prod / r1;
        }
        return {r1, r2, big};
    }
    // Depressed form t^3 + p t + q with w = t - b/3.
    cplx shift = b / 3.0;
    cplx p = c - b * b / 3.0;
    cplx q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    cplx disc = q * q / 4.0 + p * p * p / 27.0;
    cplx sq = std::sqrt(disc);
    cplx u3 = -q / 2.0 + sq;
    if (std::abs(u3) < std::abs(-q / 2.0 - sq)) u3 = -q / 2.0 - sq;
    cplx u = std::pow(u3, 1.0 / 3.0);
    std::array<cplx, 3> t;
    if (std::abs(u) < 1e-300) {
        t = {cplx(0), cplx(0), cplx(0)};
    } else {
        const cplx omega(-0.5, std::sqrt(3.0) / 2.0);
        cplx v = -p / (3.0 * u);
        t = {u + v, u * omega + v * std::conj(omega), u * std::conj(omega) + v * omega};
    }
    std::array<cplx, 3> w;
    for (int k = 0; k < 3; ++k) {
        cplx x = t[k] - shift;
        for (int it = 0; it < 2; ++it) {
            cplx f = ((x + b) * x + c) * x + d;
            cplx df = (3.0 * x + 2.0 * b) * x + c;
            if (std::abs(df) > 1e-14 * (1.0 + std::abs(x) * std::abs(x))) x -= f / df;
        }
        w[k] = x;
    }
    return w;
}

// For a degree-6 p with two supplied simple roots, find the monic
// quadratic s(t) with p ~ lead * (t - s1)(t - s2) * s(t)^2. Returns the
// quadratic and the sup-norm coefficient mismatch relative to ||p||.
inline std::pair<RPoly, double> extract_square_factor(const RPoly& p,
                                                      const std::vector<cplx>& simple_roots,
                                                      double tol = 1e-6) {
    if (p.degree() != 6) throw std::invalid_argument("extract_square_factor: need degree 6");
    if (simple_roots.size() != 2)
        throw std::invalid_argument("extract_square_factor: need two simple roots");
    CPoly q = to_complex(p);
    for (cplx r : simple_roots) q = deflate(q, r);
    const cplx lead = q.c.back();
    // Monic quartic that should be a perfect square (t^2 + bt + c)^2.
    std::vector<cplx> m(q.c.size());
    for (std::size_t i = 0; i < q.c.size(); ++i) m[i] = q.c[i] / lead;
    cplx b = m[3] / 2.0;
    cplx c = (m[2] - b * b) / 2.0;
    RPoly quad{c.real(), b.real(), 1.0};
    // Rebuild and measure the coefficient mismatch.
    CPoly rebuilt = to_complex(quad) * to_complex(quad);
    for (cplx r : simple_roots) {
        CPoly lin({-r, cplx(1.0)});
        rebuilt = rebuilt * lin;
    }
    rebuilt = lead * rebuilt;
    double pnorm = 0.0;
    for (double x : p.c) pnorm = std::max(pnorm, std::abs(x));
    double worst = 0.0;
    for (int k = 0; k <= 6; ++k) {
        cplx want = (k <= p.degree()) ? cplx(p.c[k]) : cplx(0);
        cplx got = (k <= rebuilt.degree()) ? rebuilt.c[k] : cplx(0);
        worst = std::max(worst, std::abs(got - want));
    }
    double residual = worst / pnorm;
    if (!(residual <= tol))
        throw std::runtime_error("extract_square_factor: no square structure (residual " +
                                 std::to_string(residual) + ")");
    return {quad, residual};
}

}  // namespace escurve
