#pragma once

// External fields and spectral curves. The cubic in w is
//   w^3 - c2(z) w^2 + c1(z) w - c0(z) = 0,
// with c2 = V' for polynomial potentials. Includes the zero-parameter
// Gaussian curve, the two-parameter symmetric quartic curve, and the
// general polynomial-field family with degree bookkeeping.

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "escurve/poly.hpp"

namespace escurve {

struct ExternalField {
    RPoly v;        // potential V
    double a;       // source strength, > 0
    double x1, x2;  // limit fractions, x1 + x2 = 1

    ExternalField(RPoly potential, double a_, double x2_)
        : v(std::move(potential)), a(a_), x1(1.0 - x2_), x2(x2_) {
        if (!(a > 0.0)) throw std::invalid_argument("ExternalField: a must be > 0");
        if (!(x2 > 0.0 && x2 < 1.0))
            throw std::invalid_argument("ExternalField: x2 must lie in (0,1)");
    }

    RPoly vprime() const { return v.derivative(); }
    // V1' = V' + a, V2' = V' - a.
    RPoly v1prime() const {
        RPoly d = v.derivative();
        d.c[0] += a;
        return d;
    }
    RPoly v2prime() const {
        RPoly d = v.derivative();
        d.c[0] -= a;
        return d;
    }
};

enum class FieldKind { gaussian, quartic, general };

inline std::string to_string(FieldKind k) {
    switch (k) {
        case FieldKind::gaussian: return "gaussian";
        case FieldKind::quartic: return "quartic";
        default: return "general";
    }
}

struct SpectralCurve {
    RPoly c2, c1, c0;
    double a = 0.0;
    FieldKind field = FieldKind::general;
    double x1 = 0.5, x2 = 0.5;
    double alpha = 0.0, beta = 0.0;  // quartic free parameters, if any
};

// w^3 - z w^2 - (a^2 - 1) w + a^2 z + a (2 x2 - 1) = 0.
inline SpectralCurve gaussian_curve(double a, double x2) {
    if (!(a > 0.0)) throw std::invalid_argument("gaussian_curve: a must be > 0");
    if (!(x2 > 0.0 && x2 <= 1.0))
        throw std::invalid_argument("gaussian_curve: x2 must lie in (0,1]");
    SpectralCurve c;
    c.c2 = RPoly{0.0, 1.0};
    c.c1 = RPoly{-(a * a - 1.0)};
    c.c0 = RPoly{-a * (2.0 * x2 - 1.0), -a * a};
    c.a = a;
    c.x1 = 1.0 - x2;
    c.x2 = x2;
    c.field = FieldKind::gaussian;
    return c;
}

// w^3 - z^3 w^2 + (z^2 + alpha) w + a^2 z^3 + beta z = 0.
inline SpectralCurve quartic_curve(double a, double alpha, double beta) {
    if (!(a > 0.0)) throw std::invalid_argument("quartic_curve: a must be > 0");
    SpectralCurve c;
    c.c2 = RPoly{0.0, 0.0, 0.0, 1.0};
    c.c1 = RPoly{alpha, 0.0, 1.0};
    c.c0 = RPoly{0.0, -beta, 0.0, -a * a};
    c.a = a;
    c.alpha = alpha;
    c.beta = beta;
    c.field = FieldKind::quartic;
    return c;
}

// General polynomial field of degree d: c1 has the fixed leading term
// lead(V') z^{d-2} with d-2 free lower coefficients and a fixed -a^2
// shift of its constant term, c0 has the fixed leading term
// -a^2 lead(V') z^{d-1} with d-1 free lower coefficients.
inline SpectralCurve general_curve(const ExternalField& field,
                                   const std::vector<double>& c1_tail,
                                   const std::vector<double>& c0_tail) {
    const int d = field.v.degree();
    if (d < 2) throw std::invalid_argument("general_curve: deg V must be >= 2");
    if (int(c1_tail.size()) != d - 2 || int(c0_tail.size()) != d - 1)
        throw std::invalid_argument("general_curve: tail lengths must be d-2 and d-1");
    const double lead_vp = field.v.c.back() * d;
    SpectralCurve c;
    c.c2 = field.vprime();
    std::vector<double> c1v(c1_tail);
    c1v.push_back(lead_vp);
    c1v[0] -= field.a * field.a;
    c.c1 = RPoly(std::move(c1v));
    std::vector<double> c0v(c0_tail);
    c0v.push_back(-field.a * field.a * lead_vp);
    c.c0 = RPoly(std::move(c0v));
    c.a = field.a;
    c.x1 = field.x1;
    c.x2 = field.x2;
    c.field = FieldKind::general;
    return c;
}

inline cplx curve_residual(const SpectralCurve& c, cplx z, cplx w) {
    return ((w - c.c2(z)) * w + c.c1(z)) * w - c.c0(z);
}

// Magnitude scale of the cubic near (z, w), for relative residuals.
inline double curve_scale(const SpectralCurve& c, cplx z, cplx w) {
    double aw = std::abs(w);
    double r = std::abs(z);
    return aw * aw * aw + c.c2.scale_at(r) * aw * aw + c.c1.scale_at(r) * aw +
           c.c0.scale_at(r) + 1.0;
}

inline nlohmann::json to_json(const SpectralCurve& c) {
    nlohmann::json j;
    j["c2"] = c.c2.c;
    j["c1"] = c.c1.c;
    j["c0"] = c.c0.c;
    j["a"] = c.a;
    j["field"] = to_string(c.field);
    return j;
}

inline SpectralCurve curve_from_json(const nlohmann::json& j) {
    SpectralCurve c;
    c.c2 = RPoly(j.at("c2").get<std::vector<double>>());
    c.c1 = RPoly(j.at("c1").get<std::vector<double>>());
    c.c0 = RPoly(j.at("c0").get<std::vector<double>>());
    c.a = j.at("a").get<double>();
    std::string f = j.at("field").get<std::string>();
    c.field = f == "gaussian" ? FieldKind::gaussian
              : f == "quartic" ? FieldKind::quartic
                               : FieldKind::general;
    return c;
}

}  // namespace escurve
