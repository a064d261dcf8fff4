#pragma once

// Sylvester-matrix resultants. The determinant is accumulated in
// mantissa/exponent form so inputs with very large coefficient scales
// neither overflow nor lose their sign.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "escurve/poly.hpp"

namespace escurve {

// value = mantissa * 2^exponent with mantissa in [0.5, 1) up to sign.
struct ScaledValue {
    double mantissa = 0.0;
    long exponent = 0;

    static ScaledValue from(double v) {
        ScaledValue s;
        if (v == 0.0) return s;
        int e = 0;
        s.mantissa = std::frexp(v, &e);
        s.exponent = e;
        return s;
    }
    ScaledValue& operator*=(double v) {
        if (v == 0.0 || mantissa == 0.0) {
            mantissa = 0.0;
            exponent = 0;
            return *this;
        }
        int e = 0;
        double m = std::frexp(v, &e);
        mantissa *= m;
        exponent += e;
        int e2 = 0;
        mantissa = std::frexp(mantissa, &e2);
        exponent += e2;
        return *this;
    }
    double value() const { return std::ldexp(mantissa, int(exponent)); }
    double log10_abs() const {
        if (mantissa == 0.0) return -std::numeric_limits<double>::infinity();
        return std::log10(std::abs(mantissa)) + exponent * std::log10(2.0);
    }
};

// Determinant by partial-pivot Gaussian elimination. The elimination and
// the pivot product run in extended precision: the Sylvester matrices of
// nearby-degenerate sextics are ill-conditioned enough that plain double
// loses more than the 1e-6 relative budget downstream checks rely on.
inline ScaledValue scaled_determinant_ld(std::vector<std::vector<long double>> m) {
    const std::size_t n = m.size();
    long double mant = 1.0L;
    long exp2 = 0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
        if (m[piv][col] == 0.0L) return ScaledValue{};
        if (piv != col) {
            std::swap(m[piv], m[col]);
            mant = -mant;
        }
        mant *= m[col][col];
        int e = 0;
        mant = std::frexp(mant, &e);
        exp2 += e;
        for (std::size_t r = col + 1; r < n; ++r) {
            long double f = m[r][col] / m[col][col];
            if (f == 0.0L) continue;
            for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
        }
    }
    ScaledValue det;
    int e = 0;
    det.mantissa = double(std::frexp(mant, &e));
    det.exponent = exp2 + e;
    return det;
}

inline ScaledValue scaled_determinant(const std::vector<std::vector<double>>& m_in) {
    const std::size_t n = m_in.size();
    std::vector<std::vector<long double>> m(n, std::vector<long double>(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m[r][c] = m_in[r][c];
    return scaled_determinant_ld(std::move(m));
}

// Sylvester resultant with the coefficient construction already done in
// extended precision (used where the inputs sit near a degeneracy).
inline ScaledValue resultant_scaled_ld(const std::vector<long double>& p,
                                       const std::vector<long double>& q) {
    const int dp = int(p.size()) - 1, dq = int(q.size()) - 1;
    const int n = dp + dq;
    std::vector<std::vector<long double>> m(n, std::vector<long double>(n, 0.0L));
    for (int r = 0; r < dq; ++r)
        for (int k = 0; k <= dp; ++k) m[r][r + k] = p[dp - k];
    for (int r = 0; r < dp; ++r)
        for (int k = 0; k <= dq; ++k) m[dq + r][r + k] = q[dq - k];
    return scaled_determinant_ld(std::move(m));
}

// Res(p, q) as the determinant of the (deg p + deg q)-square Sylvester matrix.
inline ScaledValue resultant_scaled(const RPoly& p, const RPoly& q) {
    if (p.is_zero() || q.is_zero())
        throw std::invalid_argument("resultant: zero polynomial");
    const int dp = p.degree(), dq = q.degree();
    if (dp == 0 && dq == 0) return ScaledValue::from(1.0);
    if (dp == 0) {
        ScaledValue s = ScaledValue::from(1.0);
        for (int i = 0; i < dq; ++i) s *= p.c[0];
        return s;
    }
    if (dq == 0) {
        ScaledValue s = ScaledValue::from(1.0);
        for (int i = 0; i < dp; ++i) s *= q.c[0];
        return s;
    }
    const int n = dp + dq;
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    // dq rows of p coefficients (descending), then dp rows of q.
    for (int r = 0; r < dq; ++r)
        for (int k = 0; k <= dp; ++k) m[r][r + k] = p.c[dp - k];
    for (int r = 0; r < dp; ++r)
        for (int k = 0; k <= dq; ++k) m[dq + r][r + k] = q.c[dq - k];
    return scaled_determinant(std::move(m));
}

inline double resultant(const RPoly& p, const RPoly& q) {
    return resultant_scaled(p, q).value();
}

}  // namespace escurve
