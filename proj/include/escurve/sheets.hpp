#pragma once

// Sheet structure of the spectral curve: discriminant polynomials,
// branch-point classification, continuation-based labeling of the three
// sheets r1, r2, r3 from their infinity asymptotics, and boundary values
// on the cuts.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "escurve/curve.hpp"
#include "escurve/params.hpp"
#include "escurve/poly.hpp"
#include "escurve/roots.hpp"

namespace escurve {

struct BranchStructure {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    cplx lambda_star{0.0, 0.0};  // complex double root of q(t); Im > 0
    double factor_residual = 0.0;
    bool has_double_pair = false;

    // I1 = [-gamma2, -gamma1], I2 = [gamma1, gamma2]
    bool in_i1(double x) const { return x >= -gamma2 && x <= -gamma1; }
    bool in_i2(double x) const { return x >= gamma1 && x <= gamma2; }
    bool on_cut(double x) const { return in_i1(x) || in_i2(x); }
    double cut_length() const { return gamma2 - gamma1; }
    double safety_radius() const { return 1e-4 * (gamma2 - gamma1); }
};

// Discriminant of the cubic in w as a polynomial in z:
// 18 c2 c1 c0 - 4 c2^3 c0 + c2^2 c1^2 - 4 c1^3 - 27 c0^2.
inline RPoly discriminant_z(const SpectralCurve& c) {
    const RPoly &p2 = c.c2, &p1 = c.c1, &p0 = c.c0;
    return 18.0 * (p2 * p1 * p0) - 4.0 * (p2 * p2 * p2 * p0) + p2 * p2 * p1 * p1 -
           4.0 * (p1 * p1 * p1) - 27.0 * (p0 * p0);
}

// For the symmetric quartic: the degree-6 polynomial q(t), t = z^2, with
// explicit coefficients. Other curves fall back to the z-discriminant.
inline RPoly discriminant_t(const SpectralCurve& c) {
    if (c.field == FieldKind::quartic) return qpoly(c.alpha, c.beta, c.a);
    return discriminant_z(c);
}

struct ClassifyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Classify the discriminant roots. Degree-6 inputs are treated as q(t)
// (two simple positive roots gamma^2 plus a conjugate double pair);
// degree-4 inputs as a z-plane discriminant with +- paired simple roots.
inline BranchStructure branch_points(const RPoly& q, double a, double tol = 1e-8) {
    BranchStructure out;
    RootSet rs = roots(q, 1e-13);
    auto realish = [](cplx r) {
        return std::abs(r.imag()) < 1e-6 * (1.0 + std::abs(r));
    };
    if (q.degree() == 6) {
        std::vector<double> pos_simple;
        std::vector<cplx> dbl;
        std::string signature;
        for (std::size_t i = 0; i < rs.roots.size(); ++i) {
            signature += "(m=" + std::to_string(rs.multiplicities[i]) +
                         (realish(rs.roots[i]) ? ",real)" : ",complex)");
            if (rs.multiplicities[i] == 1 && realish(rs.roots[i])) {
                if (rs.roots[i].real() > 0.0) pos_simple.push_back(rs.roots[i].real());
            } else if (rs.multiplicities[i] == 2 && !realish(rs.roots[i])) {
                dbl.push_back(rs.roots[i]);
            }
        }
        if (pos_simple.size() != 2 || dbl.size() != 2)
            throw ClassifyError("branch_points: unexpected root signature " + signature);
        std::sort(pos_simple.begin(), pos_simple.end());
        out.gamma1 = std::sqrt(pos_simple[0]);
        out.gamma2 = std::sqrt(pos_simple[1]);
        out.lambda_star = dbl[0].imag() > 0.0 ? dbl[0] : dbl[1];
        out.has_double_pair = true;
        std::vector<cplx> simple{pos_simple[0], pos_simple[1]};
        auto [quad, resid] = extract_square_factor(q, simple, std::max(tol, 1e-6));
        (void)quad;
        out.factor_residual = resid;
        return out;
    }
    if (q.degree() == 4) {
        std::vector<double> pos;
        for (std::size_t i = 0; i < rs.roots.size(); ++i) {
            if (rs.multiplicities[i] != 1 || !realish(rs.roots[i]))
                throw ClassifyError("branch_points: z-discriminant has non-simple roots");
            if (rs.roots[i].real() > 0.0) pos.push_back(rs.roots[i].real());
        }
        if (pos.size() != 2)
            throw ClassifyError("branch_points: expected two positive branch points");
        std::sort(pos.begin(), pos.end());
        out.gamma1 = pos[0];
        out.gamma2 = pos[1];
        return out;
    }
    throw ClassifyError("branch_points: unsupported discriminant degree " +
                        std::to_string(q.degree()));
}

struct SheetValues {
    cplx r1, r2, r3;
    cplx f1, f2;
    cplx z;
    std::array<double, 3> residuals{};
};

struct ContinuationError : std::runtime_error {
    double distance;
    ContinuationError(const std::string& msg, double d)
        : std::runtime_error(msg), distance(d) {}
};

// Unlabeled roots of the cubic at z.
inline std::array<cplx, 3> roots_at(const SpectralCurve& c, cplx z) {
    return cubic_roots(-c.c2(z), c.c1(z), -c.c0(z));
}

namespace detail {

inline std::array<cplx, 3> match_nearest(const std::array<cplx, 3>& cur,
                                         const std::array<cplx, 3>& cand) {
    std::array<cplx, 3> out;
    std::array<bool, 3> used{false, false, false};
    for (int j = 0; j < 3; ++j) {
        int best = -1;
        double bd = 0.0;
        for (int i = 0; i < 3; ++i) {
            if (used[i]) continue;
            double d = std::abs(cand[i] - cur[j]);
            if (best < 0 || d < bd) {
                best = i;
                bd = d;
            }
        }
        out[j] = cand[best];
        used[best] = true;
    }
    return out;
}

inline double min_pairwise(const std::array<cplx, 3>& r) {
    return std::min({std::abs(r[0] - r[1]), std::abs(r[0] - r[2]), std::abs(r[1] - r[2])});
}

// Track the labeled triple along a straight segment with adaptive steps:
// the step halves whenever the nearest-competitor distance falls below
// 10x the step-induced motion.
inline std::array<cplx, 3> continue_segment(const SpectralCurve& c,
                                            std::array<cplx, 3> cur, cplx from, cplx to) {
    const double len = std::abs(to - from);
    if (len == 0.0) return cur;
    double t = 0.0, dt = 1.0 / 16.0;
    const double dt_min = 1e-11;
    while (t < 1.0) {
        double step = std::min(dt, 1.0 - t);
        cplx z = from + (to - from) * (t + step);
        std::array<cplx, 3> cand = roots_at(c, z);
        std::array<cplx, 3> nxt = match_nearest(cur, cand);
        double motion = std::max({std::abs(nxt[0] - cur[0]), std::abs(nxt[1] - cur[1]),
                                  std::abs(nxt[2] - cur[2])});
        double sep = min_pairwise(nxt);
        if (sep < 10.0 * motion && step > dt_min) {
            dt = step / 2.0;
            continue;
        }
        if (step <= dt_min && sep < 10.0 * motion && sep < 1e-6)
            throw ContinuationError("label_sheets: too close to branch point", sep);
        cur = nxt;
        t += step;
        if (sep > 40.0 * motion) dt = std::min(dt * 2.0, 0.25);
    }
    return cur;
}

}  // namespace detail

// Anchor on the positive real axis where the three asymptotic values are
// well separated, with labels assigned from the infinity expansions
// r1 ~ -a + x1/z, r2 ~ a + x2/z, r3 ~ V'(z) - r1 - r2.
inline double anchor_radius(const SpectralCurve& c, const BranchStructure& b) {
    double r = std::max(3.0 * b.gamma2, 2.0);
    r = std::max(r, std::cbrt(3.0 * c.a) + 1.0);
    return r;
}

inline std::array<cplx, 3> anchor_labels(const SpectralCurve& c, const BranchStructure& b) {
    const double R = anchor_radius(c, b);
    cplx r1 = -c.a + c.x1 / R;
    cplx r2 = c.a + c.x2 / R;
    cplx r3 = c.c2(cplx(R)) - r1 - r2;
    std::array<cplx, 3> asym{r1, r2, r3};
    std::array<cplx, 3> actual = roots_at(c, cplx(R));
    std::array<cplx, 3> lab = detail::match_nearest(asym, actual);
    double sep = detail::min_pairwise(asym);
    for (int j = 0; j < 3; ++j)
        if (std::abs(lab[j] - asym[j]) > 0.25 * sep)
            throw ContinuationError("label_sheets: anchor asymptotics not separated",
                                    std::abs(lab[j] - asym[j]));
    return lab;
}

inline SheetValues make_sheet_values(const SpectralCurve& c, cplx z,
                                     const std::array<cplx, 3>& r) {
    SheetValues sv;
    sv.z = z;
    sv.r1 = r[0];
    sv.r2 = r[1];
    sv.r3 = r[2];
    sv.f1 = r[0] + c.a;
    sv.f2 = r[1] - c.a;
    for (int j = 0; j < 3; ++j)
        sv.residuals[j] = std::abs(curve_residual(c, z, r[j])) / curve_scale(c, z, r[j]);
    return sv;
}

// Label the sheets at z by continuation along a dog-leg path from the
// real-axis anchor: up to a safe height, across, then down to z. The
// lower half-plane is handled by Schwarz reflection.
inline SheetValues label_sheets(const SpectralCurve& c, const BranchStructure& b, cplx z) {
    if (z.imag() < 0.0) {
        SheetValues sv = label_sheets(c, b, std::conj(z));
        std::array<cplx, 3> r{std::conj(sv.r1), std::conj(sv.r2), std::conj(sv.r3)};
        return make_sheet_values(c, z, r);
    }
    if (z.imag() == 0.0) {
        double d = std::min({std::abs(z.real() - b.gamma1), std::abs(z.real() - b.gamma2),
                             std::abs(z.real() + b.gamma1), std::abs(z.real() + b.gamma2)});
        if (d < b.safety_radius())
            throw ContinuationError("label_sheets: too close to branch point", d);
    }
    const double R = anchor_radius(c, b);
    const double Y = std::max(b.gamma2, z.imag());
    std::array<cplx, 3> cur = anchor_labels(c, b);
    cur = detail::continue_segment(c, cur, cplx(R, 0.0), cplx(R, Y));
    cur = detail::continue_segment(c, cur, cplx(R, Y), cplx(z.real(), Y));
    cur = detail::continue_segment(c, cur, cplx(z.real(), Y), z);
    return make_sheet_values(c, z, cur);
}

struct BoundaryValues {
    cplx f_plus, f_minus;    // boundary values of the cut sheet's f_j
    cplx r3_plus, r3_minus;  // r3 boundary values via the monodromy swap
};

namespace detail {

// On-cut root split at real x strictly inside a cut: the conjugate pair
// (cut sheet's two boundary values) and the remaining real root.
struct CutSplit {
    cplx pair_neg;  // Im < 0 member
    cplx pair_pos;
    cplx real_root;
};

inline CutSplit cut_split(const SpectralCurve& c, double x) {
    std::array<cplx, 3> r = roots_at(c, cplx(x));
    int ireal = 0;
    double best = std::abs(r[0].imag());
    for (int i = 1; i < 3; ++i)
        if (std::abs(r[i].imag()) < best) {
            best = std::abs(r[i].imag());
            ireal = i;
        }
    CutSplit s;
    s.real_root = cplx(r[ireal].real(), 0.0);
    std::array<cplx, 2> pair;
    int k = 0;
    for (int i = 0; i < 3; ++i)
        if (i != ireal) pair[k++] = r[i];
    if (pair[0].imag() < pair[1].imag()) {
        s.pair_neg = pair[0];
        s.pair_pos = pair[1];
    } else {
        s.pair_neg = pair[1];
        s.pair_pos = pair[0];
    }
    // Enforce exact conjugacy (the coefficients are real).
    s.pair_neg = cplx(0.5 * (s.pair_neg.real() + s.pair_pos.real()),
                      0.5 * (s.pair_neg.imag() - s.pair_pos.imag()));
    s.pair_pos = std::conj(s.pair_neg);
    return s;
}

}  // namespace detail

// Boundary values of f_j on the cut I_j. f_plus is the conjugate-pair
// member with negative imaginary part, so (1/i)(f+ - f-) = 2 Im f+ < 0.
// The r3 boundary values follow the monodromy swap r_j^{+-} = r3^{-+}.
inline BoundaryValues boundary_values(const SpectralCurve& c, const BranchStructure& b,
                                      double x, int j) {
    const bool inside = (j == 1) ? b.in_i1(x) : b.in_i2(x);
    if (!inside) throw std::invalid_argument("boundary_values: x not inside the cut");
    double d = (j == 1) ? std::min(std::abs(x + b.gamma1), std::abs(x + b.gamma2))
                        : std::min(std::abs(x - b.gamma1), std::abs(x - b.gamma2));
    if (d < b.safety_radius())
        throw ContinuationError("boundary_values: within endpoint safety radius", d);
    detail::CutSplit s = detail::cut_split(c, x);
    BoundaryValues out;
    double shift = (j == 1) ? c.a : -c.a;
    out.f_plus = s.pair_neg + shift;
    out.f_minus = s.pair_pos + shift;
    out.r3_plus = s.pair_pos;   // r3^+ = r_j^-
    out.r3_minus = s.pair_neg;  // r3^- = r_j^+
    return out;
}

// Fast labeled evaluation on the real axis (boundary values from above).
// Off the cuts the three roots are real and never cross inside one
// complementary interval, so the label-to-sorted-position permutation is
// found once per interval by continuation and reused.
class SheetSampler {
  public:
    SheetSampler(const SpectralCurve& c, const BranchStructure& b) : c_(c), b_(b) {
        perm_right_ = perm_at(b.gamma2 + std::max(0.5 * b.cut_length(), 0.5));
        perm_gap_ = perm_at(0.0);
        perm_left_ = perm_at(-(b.gamma2 + std::max(0.5 * b.cut_length(), 0.5)));
    }

    // Labeled roots of x + i0+.
    std::array<cplx, 3> labeled(double x) const {
        if (b_.in_i2(x)) {
            detail::CutSplit s = detail::cut_split(c_, x);
            return {s.real_root, s.pair_neg, s.pair_pos};  // r1 real; r2+ = Im<0
        }
        if (b_.in_i1(x)) {
            detail::CutSplit s = detail::cut_split(c_, x);
            return {s.pair_neg, s.real_root, s.pair_pos};  // r2 real; r1+ = Im<0
        }
        std::array<cplx, 3> r = roots_at(c_, cplx(x));
        std::sort(r.begin(), r.end(),
                  [](cplx u, cplx v) { return u.real() < v.real(); });
        const std::array<int, 3>& p =
            x > b_.gamma2 ? perm_right_ : (x < -b_.gamma2 ? perm_left_ : perm_gap_);
        std::array<cplx, 3> out;
        for (int j = 0; j < 3; ++j) out[j] = cplx(r[p[j]].real(), 0.0);
        return out;
    }

    // f_j(x + i0+), j in {1, 2}.
    cplx f_above(double x, int j) const {
        std::array<cplx, 3> r = labeled(x);
        return j == 1 ? r[0] + c_.a : r[1] - c_.a;
    }

    // r3(x + i0-) = r3 off the cuts, r_j^+ on I_j (monodromy swap).
    cplx r3_below(double x) const {
        if (b_.in_i2(x) || b_.in_i1(x)) {
            detail::CutSplit s = detail::cut_split(c_, x);
            return s.pair_neg;
        }
        return labeled(x)[2];
    }

    const SpectralCurve& curve() const { return c_; }
    const BranchStructure& branch() const { return b_; }

  private:
    std::array<int, 3> perm_at(double x) const {
        SheetValues sv = label_sheets(c_, b_, cplx(x, 0.0));
        std::array<cplx, 3> lab{sv.r1, sv.r2, sv.r3};
        std::array<cplx, 3> sorted = lab;
        std::sort(sorted.begin(), sorted.end(),
                  [](cplx u, cplx v) { return u.real() < v.real(); });
        std::array<int, 3> p{};
        for (int j = 0; j < 3; ++j) {
            for (int i = 0; i < 3; ++i)
                if (sorted[i] == lab[j]) p[j] = i;
        }
        return p;
    }

    SpectralCurve c_;
    BranchStructure b_;
    std::array<int, 3> perm_left_{}, perm_gap_{}, perm_right_{};
};

// Cardano auxiliaries for the quartic curve: R(z), H(z) and the sign
// change point eta of R beyond gamma2.
struct CardanoAux {
    RPoly bigR;
    RPoly bigH;
    double eta = 0.0;
};

inline CardanoAux cardano_aux(const SpectralCurve& c, const BranchStructure& b) {
    if (c.field != FieldKind::quartic)
        throw std::invalid_argument("cardano_aux: quartic curve required");
    CardanoAux aux;
    aux.bigR = RPoly{0.0, c.beta, 0.0, c.alpha / 3.0 + c.a * c.a, 0.0, 1.0 / 3.0, 0.0, 0.0,
                     0.0, -2.0 / 27.0};
    aux.bigH = RPoly{-c.alpha / 3.0, 0.0, -1.0 / 3.0, 0.0, 0.0, 0.0, 1.0 / 9.0};
    // Bisect for the sign change of R on (gamma2, infinity).
    double lo = b.gamma2, hi = 2.0 * b.gamma2;
    while (aux.bigR(hi) > 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (aux.bigR(mid) > 0.0 ? lo : hi) = mid;
    }
    aux.eta = 0.5 * (lo + hi);
    return aux;
}

// The square root of -q(z^2) with the branch fixed by principal-branch
// factors: 6ia (z^2-l)(z^2-lbar) sqrt(z-g1) sqrt(z-g2) sqrt(z+g1) sqrt(z+g2).
inline cplx sqrt_minus_q(const SpectralCurve& c, const BranchStructure& b, cplx z) {
    cplx l = b.lambda_star;
    cplx zz = z * z;
    cplx pre = cplx(0.0, 6.0 * c.a) * (zz - l) * (zz - std::conj(l));
    return pre * std::sqrt(z - b.gamma1) * std::sqrt(z - b.gamma2) *
           std::sqrt(z + b.gamma1) * std::sqrt(z + b.gamma2);
}

}  // namespace escurve
