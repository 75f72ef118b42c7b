#pragma once

// Bryant-Salamon Spin(7) model on the negative spinor bundle over L in S^4:
// spinor frames, the operator Gamma and the splitting into V+ and V-, the spin
// connection, the Cayley 4-form and the eta-form Cayley test.
//
// Splitting coordinates are ordered (e_1, e_2, nu_3, nu_4, s_1, s_2, s_3, s_4).

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <vector>

#include "calib/errors.hpp"
#include "calib/examples.hpp"
#include "calib/exterior.hpp"
#include "calib/g2.hpp"
#include "calib/octonion.hpp"
#include "calib/submanifold.hpp"

namespace calib {

inline SpacePtr spin7_space(double u, double v) {
    Mat g = Mat::Zero(8, 8);
    g.diagonal() << u * u, u * u, u * u, u * u, v * v, v * v, v * v, v * v;
    return InnerSpace::make(g);
}

inline Multivector cayley_form(double u, double v) {
    using detail::mono;
    const auto s = spin7_space(u, v);
    const std::array<Multivector, 3> h{mono(s, {1, 2}) + mono(s, {3, 4}), mono(s, {1, 3}) + mono(s, {4, 2}),
                                       mono(s, {1, 4}) + mono(s, {2, 3})};
    const std::array<Multivector, 3> w{mono(s, {5, 6}) + mono(s, {7, 8}), mono(s, {5, 7}) + mono(s, {8, 6}),
                                       mono(s, {5, 8}) + mono(s, {6, 7})};
    Multivector Phi = mono(s, {1, 2, 3, 4}) * std::pow(u, 4) + mono(s, {5, 6, 7, 8}) * std::pow(v, 4);
    for (int k = 0; k < 3; ++k) Phi += wedge(h[k], w[k]) * (-u * u * v * v);
    return Phi;
}

// Variant on the positive spinor bundle.
inline Multivector phi_plus_form(double u, double v) {
    using detail::mono;
    const auto s = spin7_space(u, v);
    const auto h = detail::horizontal_asd(s);
    const std::array<Multivector, 3> w{mono(s, {5, 6}) - mono(s, {7, 8}), mono(s, {5, 7}) - mono(s, {8, 6}),
                                       mono(s, {5, 8}) - mono(s, {6, 7})};
    Multivector Phi = mono(s, {1, 2, 3, 4}) * std::pow(u, 4) + mono(s, {5, 6, 7, 8}) * std::pow(v, 4);
    for (int k = 0; k < 3; ++k) Phi += wedge(h[k], w[k]) * (u * u * v * v);
    return Phi;
}

// Self-dual 2-forms used to build the spinor frame.
inline std::array<Multivector, 3> sd_frame(const SpacePtr& four = InnerSpace::make(4)) {
    using detail::mono;
    return {mono(four, {1, 2}) + mono(four, {3, 4}), mono(four, {1, 3}) + mono(four, {4, 2}),
            mono(four, {1, 4}) + mono(four, {2, 3})};
}

// Gamma = gamma(e^1) gamma(e^2) restricted to S-.
inline Octonion gamma_op(const PinorContext& ctx, const Octonion& s) { return gamma_pair(ctx, 0, 1, s); }

inline bool in_negative_spinors(const PinorContext& ctx, const Octonion& s, double tol = 1e-10) {
    return (gamma_volume(ctx, s) + s).norm() <= tol * (1.0 + s.norm());
}

struct SpinorFrame {
    PinorContext ctx;
    std::array<Octonion, 4> s;  // s_1..s_4
    Octonion jl;                // j_L as left multiplication by this element

    Octonion gamma(const Octonion& x) const { return gamma_op(ctx, x); }
    Octonion j_left(const Octonion& x) const { return jl * x; }

    // Coefficients of x against s_1..s_4.
    Eigen::Vector4d coords(const Octonion& x) const {
        Eigen::Vector4d c;
        for (int a = 0; a < 4; ++a) c[a] = s[a].dot(x);
        return c;
    }
    Octonion combine(const Eigen::Vector4d& c) const {
        Octonion r;
        for (int a = 0; a < 4; ++a) r += s[a] * c[a];
        return r;
    }
    // Projections onto V+ = span{s1, s2} and V- = span{s3, s4}.
    Octonion plus_part(const Octonion& x) const { return s[0] * s[0].dot(x) + s[1] * s[1].dot(x); }
    Octonion minus_part(const Octonion& x) const { return s[2] * s[2].dot(x) + s[3] * s[3].dot(x); }
};

// j_L is the left multiplication commuting with Gamma that agrees with it on V+.
inline Octonion left_structure(const PinorContext& ctx) {
    Octonion b = gamma_op(ctx, Octonion::real(1.0));
    for (int k = 4; k < 8; ++k) b[k] = 0.0;
    b[0] = 0.0;
    if (std::abs(b.norm() - 1.0) > 1e-10) throw eigenspace_error("left_structure: Gamma is not a right multiplication on S-");
    return b;
}

inline Octonion project_plus(const PinorContext& ctx, const Octonion& jl, const Octonion& x) {
    return (x - jl * gamma_op(ctx, x)) * 0.5;
}

// s_1 defaults to the unit 1 of H projected to V+.
inline SpinorFrame spinor_frames(const PinorContext& ctx = {}, const Octonion* s1_choice = nullptr) {
    SpinorFrame f;
    f.ctx = ctx;
    f.jl = left_structure(ctx);
    Octonion s1 = s1_choice ? *s1_choice : project_plus(ctx, f.jl, Octonion::real(1.0));
    if (s1_choice) {
        if (!in_negative_spinors(ctx, s1) || (project_plus(ctx, f.jl, s1) - s1).norm() > 1e-10 * (1 + s1.norm()))
            throw eigenspace_error("spinor_frames: s1 is not in V+");
        if (std::abs(s1.norm() - 1.0) > 1e-10) throw eigenspace_error("spinor_frames: s1 is not a unit spinor");
    } else {
        s1 = s1 * (1.0 / s1.norm());
    }
    const auto f_sd = sd_frame();
    f.s[0] = s1;
    for (int k = 0; k < 3; ++k) f.s[k + 1] = gamma_form(ctx, f_sd[k], s1) * 0.25;
    return f;
}

// Spin connection along e_i: 1/4 sum_{k,l} Gamma^l_{ik} gamma(frame^k) gamma(frame^l).
inline Octonion spin_connection(const SpinorFrame& sf, const Connection& G, int i, const Octonion& x) {
    Octonion r;
    for (int k = 1; k <= 4; ++k)
        for (int l = 1; l <= 4; ++l) {
            const double g = G(i, k, l);
            if (g != 0.0) r += gamma_pair(sf.ctx, k - 1, l - 1, x) * (0.25 * g);
        }
    return r;
}

// (nabla_{e_i} Gamma) x = gamma(nabla e^1) gamma(e^2) x + gamma(e^1) gamma(nabla e^2) x.
inline Octonion nabla_gamma(const SpinorFrame& sf, const Connection& G, int i, const Octonion& x) {
    Eigen::Vector4d d1, d2;
    for (int l = 1; l <= 4; ++l) {
        d1[l - 1] = G(i, 1, l);
        d2[l - 1] = G(i, 2, l);
    }
    return sf.ctx.embed(d1) * (sf.ctx.coframe[1] * x) + sf.ctx.coframe[0] * (sf.ctx.embed(d2) * x);
}

// s_a-coefficients of nabla_{e_i} of the spinor field sum c_a s_a with frame derivatives dc.
inline Eigen::Vector4d covariant_coords(const SpinorFrame& sf, const Connection& G, int i, const Eigen::Vector4d& c,
                                        const Eigen::Vector4d& dc) {
    return dc + sf.coords(spin_connection(sf, G, i, sf.combine(c)));
}

// Residuals of nabla s = -/+ 1/2 j_L (nabla Gamma) s for s = s_a, a = 1..4, along e_1, e_2.
struct LemmaResidual {
    double full = 0;        // whole identity
    double projected = 0;   // component in the opposite eigenbundle only
};

inline LemmaResidual lemma_residual(const SpinorFrame& sf, const Connection& G) {
    LemmaResidual r;
    for (int i = 1; i <= 2; ++i)
        for (int a = 0; a < 4; ++a) {
            const double sign = a < 2 ? -1.0 : 1.0;
            const Octonion lhs = spin_connection(sf, G, i, sf.s[a]);
            const Octonion rhs = sf.j_left(nabla_gamma(sf, G, i, sf.s[a])) * (0.5 * sign);
            const Octonion d = lhs - rhs;
            r.full = std::max(r.full, d.norm());
            r.projected = std::max(r.projected, (a < 2 ? sf.minus_part(d) : sf.plus_part(d)).norm());
        }
    return r;
}

// Tangent basis {E_1, E_2, F_1, F_2} of V+ + psi at t1 s1 + t2 s2 + a s3 + b s4.
inline std::vector<Vec> cayley_tangent(const SpinorFrame& sf, const AdaptedFramePoint& p, const SectionJet& psi,
                                       double t1, double t2) {
    const Eigen::Vector4d c(t1, t2, psi.G.real(), psi.G.imag());
    std::vector<Vec> out;
    for (int i = 1; i <= 2; ++i) {
        const cplx Gi = i == 1 ? psi.G1 : psi.G2;
        const Eigen::Vector4d dc(0, 0, Gi.real(), Gi.imag());
        Vec E = horizontal_unit(8, i);
        E.tail(4) = covariant_coords(sf, p.gamma, i, c, dc);
        out.push_back(E);
    }
    out.push_back(horizontal_unit(8, 5));
    out.push_back(horizontal_unit(8, 6));
    return out;
}

// Components of the (0,1)-derivative of psi = a s3 + b s4 with J- = -Gamma.
inline Eigen::Vector2d dbar_Vminus_residual(const SpinorFrame& sf, const AdaptedFramePoint& p, const SectionJet& psi) {
    const Eigen::Vector4d c(0, 0, psi.G.real(), psi.G.imag());
    const Eigen::Vector4d p1 = covariant_coords(sf, p.gamma, 1, c, {0, 0, psi.G1.real(), psi.G1.imag()});
    const Eigen::Vector4d p2 = covariant_coords(sf, p.gamma, 2, c, {0, 0, psi.G2.real(), psi.G2.imag()});
    return {p1[2] + p2[3], p1[3] - p2[2]};
}

// X(a, b, c) with <X, y> = Phi(a, b, c, y).
inline Vec cayley_cross(const Multivector& Phi, const Vec& a, const Vec& b, const Vec& c) {
    return Phi.space()->metric_inverse() * contract(c, contract(b, contract(a, Phi))).covector_coeffs();
}

// The 2-form eta(u, v, w, y); it vanishes exactly on Cayley 4-planes.
inline Multivector cayley_eta(const Multivector& Phi, const Vec& u, const Vec& v, const Vec& w, const Vec& y) {
    const auto& sp = Phi.space();
    const Vec X1 = cayley_cross(Phi, v, w, y), X2 = cayley_cross(Phi, w, u, y), X3 = cayley_cross(Phi, u, v, y),
              X4 = cayley_cross(Phi, v, u, w);
    Multivector eta = wedge(flat(sp, u), flat(sp, X1)) + wedge(flat(sp, v), flat(sp, X2)) +
                      wedge(flat(sp, w), flat(sp, X3)) + wedge(flat(sp, y), flat(sp, X4));
    eta += contract(u, contract(X1, Phi)) + contract(v, contract(X2, Phi)) + contract(w, contract(X3, Phi)) +
           contract(y, contract(X4, Phi));
    return eta;
}

inline double cayley_residual(const Multivector& Phi, const std::vector<Vec>& E) {
    return cayley_eta(Phi, E[0], E[1], E[2], E[3]).coeff_norm();
}

// |Phi(E)| against the volume of E: zero exactly on Cayley 4-planes.
inline double cayley_volume_defect(const Multivector& Phi, const std::vector<Vec>& E) {
    return std::abs(std::abs(evaluate(Phi, E)) - volume_norm(Phi.space()->metric(), E));
}

}  // namespace calib
