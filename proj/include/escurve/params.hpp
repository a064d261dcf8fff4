#pragma once

// Quartic free-parameter solver. The admissible (alpha*, beta*) is the
// critical zero of the explicit sextic-discriminant factor B2; Newton
// runs on grad B2 in the rescaled variables u = alpha/a^2, v =
// beta/a^(4/3), seeded by the known large-a expansions.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "escurve/poly.hpp"
#include "escurve/resultant.hpp"
#include "escurve/roots.hpp"

namespace escurve {

// Degree-6 polynomial q(t), t = z^2, whose simple roots are the squared
// branch points; ascending coefficients in t.
inline RPoly qpoly(double alpha, double beta, double a) {
    const double a2 = a * a;
    return RPoly{
        -36.0 * alpha * alpha * alpha,
        9.0 * (-12.0 * alpha * alpha - 27.0 * beta * beta),
        9.0 * (-54.0 * beta * a2 - 12.0 * alpha - 18.0 * alpha * beta),
        9.0 * (-27.0 * a2 * a2 - 18.0 * alpha * a2 + alpha * alpha - 18.0 * beta - 4.0),
        9.0 * (2.0 * alpha - 18.0 * a2),
        9.0 * (4.0 * beta + 1.0),
        36.0 * a2,
    };
}

inline double b1(double alpha, double beta, double a) {
    const double a2 = a * a;
    return 729.0 * alpha * a2 * a2 * a2 + 243.0 * (alpha * alpha - 3.0 * beta) * a2 * a2 +
           27.0 * alpha * (alpha * alpha - 15.0 * beta - 1.0) * a2 +
           alpha * alpha * alpha * alpha +
           27.0 * beta * (3.0 * beta + 1.0) * (3.0 * beta + 1.0) -
           36.0 * alpha * alpha * beta;
}

namespace detail {

struct B2Term {
    double coef;
    int ia, ib, ik;  // powers of alpha, beta, a
};

inline constexpr std::array<B2Term, 35> b2_terms{{
    {729, 6, 0, 4},   {-972, 5, 1, 2},  {2187, 5, 0, 6},  {-27, 5, 0, 2},
    {432, 4, 3, 0},   {216, 4, 2, 0},   {-4860, 4, 1, 4}, {27, 4, 1, 0},
    {2187, 4, 0, 8},  {-540, 4, 0, 4},  {864, 3, 3, 2},   {3240, 3, 2, 2},
    {-4617, 3, 1, 6}, {756, 3, 1, 2},   {729, 3, 0, 10},  {216, 3, 0, 6},
    {16, 3, 0, 2},    {-1152, 2, 4, 0}, {-1512, 2, 3, 4}, {-832, 2, 3, 0},
    {2538, 2, 2, 4},  {-200, 2, 2, 0},  {-729, 2, 1, 8},  {-216, 2, 1, 4},
    {-16, 2, 1, 0},   {2304, 1, 4, 2},  {-1944, 1, 3, 6}, {576, 1, 3, 2},
    {-1024, 0, 6, 0}, {-768, 0, 5, 0},  {2592, 0, 4, 4},  {-192, 0, 4, 0},
    {-729, 0, 3, 8},  {-216, 0, 3, 4},  {-16, 0, 3, 0},
}};

inline double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

}  // namespace detail

struct B2Derivs {
    double val = 0, da = 0, db = 0, daa = 0, dab = 0, dbb = 0;
};

// B2 with analytic first and second partials in (alpha, beta), obtained
// by term-by-term differentiation of the coded monomial table.
inline B2Derivs b2_derivs(double alpha, double beta, double a) {
    using detail::ipow;
    B2Derivs r;
    for (const auto& t : detail::b2_terms) {
        double ak = t.coef * ipow(a, t.ik);
        double pa = ipow(alpha, t.ia), pb = ipow(beta, t.ib);
        r.val += ak * pa * pb;
        if (t.ia >= 1) r.da += ak * t.ia * ipow(alpha, t.ia - 1) * pb;
        if (t.ib >= 1) r.db += ak * pa * t.ib * ipow(beta, t.ib - 1);
        if (t.ia >= 2) r.daa += ak * t.ia * (t.ia - 1) * ipow(alpha, t.ia - 2) * pb;
        if (t.ib >= 2) r.dbb += ak * pa * t.ib * (t.ib - 1) * ipow(beta, t.ib - 2);
        if (t.ia >= 1 && t.ib >= 1)
            r.dab += ak * t.ia * ipow(alpha, t.ia - 1) * t.ib * ipow(beta, t.ib - 1);
    }
    return r;
}

inline double b2(double alpha, double beta, double a) {
    return b2_derivs(alpha, beta, a).val;
}

inline std::pair<double, double> initial_guess(double a) {
    const double s = std::pow(a, -4.0 / 3.0);
    double alpha0 = a * a * (-1.0 + s + std::pow(a, -4.0) / 27.0);
    double beta0 = std::pow(a, 4.0 / 3.0) * (1.0 - s / 3.0);
    return {alpha0, beta0};
}

struct QuarticParameters {
    double a = 0;
    double alpha = 0;
    double beta = 0;
    double grad_norm = 0;     // |grad B2| in rescaled (u,v) units
    double b2_residual = 0;   // B2 in rescaled units
    double hessian_det = 0;   // det Hess_(u,v) B2
    int iterations = 0;
};

struct ParamSolveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline QuarticParameters solve_parameters(double a, double tol = 1e-12) {
    if (!(a > 0.0)) throw std::invalid_argument("solve_parameters: a must be > 0");
    const double sa = a * a;                   // alpha scale
    const double sb = std::pow(a, 4.0 / 3.0);  // beta scale
    const double escale = std::pow(a, 16.0);   // natural size of B2 terms
    auto [alpha, beta] = initial_guess(a);
    double u = alpha / sa, v = beta / sb;
    int it = 0;
    const int max_it = 30;
    for (; it < max_it; ++it) {
        B2Derivs d = b2_derivs(u * sa, v * sb, a);
        double gu = d.da * sa, gv = d.db * sb;
        double huu = d.daa * sa * sa, huv = d.dab * sa * sb, hvv = d.dbb * sb * sb;
        double det = huu * hvv - huv * huv;
        if (det == 0.0) throw ParamSolveError("solve_parameters: singular Hessian");
        double du = (gu * hvv - gv * huv) / det;
        double dv = (gv * huu - gu * huv) / det;
        u -= du;
        v -= dv;
        if (std::hypot(du, dv) < tol) {
            ++it;
            break;
        }
    }
    QuarticParameters out;
    out.a = a;
    out.alpha = u * sa;
    out.beta = v * sb;
    out.iterations = it;
    B2Derivs d = b2_derivs(out.alpha, out.beta, a);
    out.grad_norm = std::hypot(d.da * sa, d.db * sb) / escale;
    out.b2_residual = d.val / escale;
    out.hessian_det = (d.daa * d.dbb - d.dab * d.dab) * sa * sa * sb * sb;
    if (!(out.grad_norm < 1e-8))
        throw ParamSolveError("solve_parameters: Newton did not converge at a=" +
                              std::to_string(a));
    if (out.hessian_det == 0.0)
        throw ParamSolveError("solve_parameters: degenerate critical point");
    // Classification sanity: q must have two simple positive roots and a
    // complex-conjugate double pair.
    RootSet rs = roots(qpoly(out.alpha, out.beta, a), 1e-12);
    int pos_simple = 0, dbl = 0;
    for (std::size_t i = 0; i < rs.roots.size(); ++i) {
        bool realish = std::abs(rs.roots[i].imag()) < 1e-6 * (1.0 + std::abs(rs.roots[i]));
        if (rs.multiplicities[i] == 1 && realish && rs.roots[i].real() > 0.0) ++pos_simple;
        if (rs.multiplicities[i] == 2 && !realish) ++dbl;
    }
    if (pos_simple != 2 || dbl != 2)
        throw ParamSolveError("solve_parameters: no admissible parameters at a=" +
                              std::to_string(a));
    return out;
}

struct IdentityCheck {
    double ratio = 0.0;  // Res(q, q') / (a^2 B1^3 B2)
    bool ok = false;
    bool skipped = false;
};

// Global constant relating the resultant of q and q' to the factored
// form a^2 B1^3 B2. Calibrated once and pinned: -2^10 * 3^22.
inline constexpr double kResultantKappa = -32134205039616.0;

inline IdentityCheck resultant_identity_check(double alpha, double beta, double a) {
    // Both sides collapse toward zero near the degeneracy loci, so every
    // intermediate is carried in extended precision to keep the ratio of
    // two small, cancellation-heavy quantities inside the 1e-6 budget.
    const long double al = alpha, be = beta, a2 = (long double)a * a;
    IdentityCheck out;
    std::vector<long double> q{
        -36.0L * al * al * al,
        9.0L * (-12.0L * al * al - 27.0L * be * be),
        9.0L * (-54.0L * be * a2 - 12.0L * al - 18.0L * al * be),
        9.0L * (-27.0L * a2 * a2 - 18.0L * al * a2 + al * al - 18.0L * be - 4.0L),
        9.0L * (2.0L * al - 18.0L * a2),
        9.0L * (4.0L * be + 1.0L),
        36.0L * a2,
    };
    std::vector<long double> dq(6);
    for (int k = 1; k <= 6; ++k) dq[k - 1] = k * q[k];
    ScaledValue res = resultant_scaled_ld(q, dq);
    long double v1 = 729.0L * al * a2 * a2 * a2 + 243.0L * (al * al - 3.0L * be) * a2 * a2 +
                     27.0L * al * (al * al - 15.0L * be - 1.0L) * a2 + al * al * al * al +
                     27.0L * be * (3.0L * be + 1.0L) * (3.0L * be + 1.0L) -
                     36.0L * al * al * be;
    long double v2 = 0.0L;
    for (const auto& t : detail::b2_terms) {
        long double term = t.coef;
        for (int i = 0; i < t.ia; ++i) term *= al;
        for (int i = 0; i < t.ib; ++i) term *= be;
        for (int i = 0; i < t.ik; ++i) term *= a;
        v2 += term;
    }
    long double rhs = a2 * v1 * v1 * v1 * v2;
    if (res.mantissa == 0.0 || rhs == 0.0L) {
        out.skipped = true;
        return out;
    }
    int e = 0;
    long double rm = std::frexp(rhs, &e);
    out.ratio = double(std::ldexp((long double)res.mantissa / rm,
                                  int(res.exponent - e)));
    out.ok = std::abs(out.ratio - kResultantKappa) <= 1e-6 * std::abs(kResultantKappa);
    return out;
}

}  // namespace escurve
