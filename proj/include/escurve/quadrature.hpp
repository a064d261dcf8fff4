#pragma once

// Panelized Gauss-Legendre quadrature with optional square-root
// substitutions on endpoint panels, for integrands with |x - e|^(1/2)
// behavior at branch points. Orientation-aware: lo > hi integrates
// backwards with the expected sign.

#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "escurve/poly.hpp"

namespace escurve {

struct GaussLegendre64 {
    std::array<double, 64> x{};  // nodes on [-1, 1]
    std::array<double, 64> w{};

    GaussLegendre64() {
        constexpr int n = 64;
        for (int i = 0; i < n; ++i) {
            // Newton iteration from the Chebyshev-angle estimate.
            double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (t * p1 - p0) / (t * t - 1.0);
                double step = p1 / dp;
                t -= step;
                if (std::abs(step) < 1e-16) break;
            }
            x[n - 1 - i] = t;
            w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
    }
};

inline const GaussLegendre64& gl64() {
    static const GaussLegendre64 table;
    return table;
}

// Integrate f over [lo, hi] with `panels` equal panels. When sqrt_lo /
// sqrt_hi is set, the adjacent panel uses u = sqrt(distance to that
// endpoint) so square-root endpoint behavior is integrated exactly.
template <class F>
auto integrate(F&& f, double lo, double hi, int panels = 4, bool sqrt_lo = false,
               bool sqrt_hi = false) {
    using R = decltype(f(lo));
    double sign = 1.0;
    if (hi < lo) {
        std::swap(lo, hi);
        std::swap(sqrt_lo, sqrt_hi);
        sign = -1.0;
    }
    const auto& g = gl64();
    R total = R(0);
    for (int p = 0; p < panels; ++p) {
        double a = lo + (hi - lo) * p / panels;
        double b = lo + (hi - lo) * (p + 1) / panels;
        if (p == 0 && sqrt_lo) {
            double umax = std::sqrt(b - a);
            for (int i = 0; i < 64; ++i) {
                double u = 0.5 * umax * (g.x[i] + 1.0);
                total += (0.5 * umax * g.w[i]) * (2.0 * u) * f(a + u * u);
            }
        } else if (p == panels - 1 && sqrt_hi) {
            double umax = std::sqrt(b - a);
            for (int i = 0; i < 64; ++i) {
                double u = 0.5 * umax * (g.x[i] + 1.0);
                total += (0.5 * umax * g.w[i]) * (2.0 * u) * f(b - u * u);
            }
        } else {
            for (int i = 0; i < 64; ++i) {
                double t = 0.5 * (b - a) * (g.x[i] + 1.0) + a;
                total += (0.5 * (b - a) * g.w[i]) * f(t);
            }
        }
    }
    return sign * total;
}

}  // namespace escurve
