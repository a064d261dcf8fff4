#pragma once

// Dense univariate polynomials with ascending-degree coefficient storage.
// Horner evaluation, arithmetic, and derivatives for real and complex
// coefficient types.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace escurve {

using cplx = std::complex<double>;

template <class T>
struct Poly {
    // coeffs[k] multiplies z^k; the zero polynomial is {0}.
    std::vector<T> c;

    Poly() : c{T(0)} {}
    Poly(std::initializer_list<T> init) : c(init) { trim(); }
    explicit Poly(std::vector<T> v) : c(std::move(v)) { trim(); }

    void trim() {
        while (c.size() > 1 && c.back() == T(0)) c.pop_back();
        if (c.empty()) c.push_back(T(0));
    }

    int degree() const { return static_cast<int>(c.size()) - 1; }

    bool is_zero() const { return c.size() == 1 && c[0] == T(0); }

    template <class Z>
    auto operator()(const Z& z) const {
        using R = decltype(T(0) * z);
        R acc = R(0);
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + R(c[i]);
        return acc;
    }

    Poly derivative() const {
        if (degree() == 0) return Poly{};
        std::vector<T> d(c.size() - 1);
        for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * T(double(k));
        return Poly(std::move(d));
    }

    Poly& operator+=(const Poly& o) {
        if (o.c.size() > c.size()) c.resize(o.c.size(), T(0));
        for (std::size_t i = 0; i < o.c.size(); ++i) c[i] += o.c[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.c.size() > c.size()) c.resize(o.c.size(), T(0));
        for (std::size_t i = 0; i < o.c.size(); ++i) c[i] -= o.c[i];
        trim();
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly{};
        std::vector<T> r(a.c.size() + b.c.size() - 1, T(0));
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
        return Poly(std::move(r));
    }
    friend Poly operator*(T s, Poly p) {
        for (auto& x : p.c) x *= s;
        p.trim();
        return p;
    }
    friend Poly operator-(Poly p) {
        for (auto& x : p.c) x = -x;
        return p;
    }

    // Magnitude scale of the polynomial at |z| = r, used for relative residuals.
    double scale_at(double r) const {
        double s = 0.0, rk = 1.0;
        for (const auto& ck : c) {
            s += std::abs(ck) * rk;
            rk *= r;
        }
        return s;
    }
};

using RPoly = Poly<double>;
using CPoly = Poly<cplx>;

inline CPoly to_complex(const RPoly& p) {
    std::vector<cplx> v(p.c.begin(), p.c.end());
    return CPoly(std::move(v));
}

// Synthetic division by (z - r); returns the quotient, ignoring the remainder.
template <class T>
Poly<T> deflate(const Poly<T>& p, const T& r) {
    if (p.degree() == 0) return Poly<T>{};
    std::vector<T> q(p.c.size() - 1);
    T acc = p.c.back();
    for (std::size_t k = p.c.size() - 1; k-- > 0;) {
        if (k < q.size()) q[k] = acc;
        acc = p.c[k] + acc * r;
    }
    return Poly<T>(std::move(q));
}

}  // namespace escurve
