#pragma once

// Octonions over the basis (1, i, j, k, e, ie, je, ke) via Cayley-Dickson on pairs
// of quaternions, the model forms on O, and the pinor representation of Cl(R^4).
//
// Normalization: gamma of a 2-form e^a ^ e^b (a != b) is 2 gamma(e^a) gamma(e^b),
// matching e^a . e^b = 1/2 e^a ^ e^b for orthonormal covectors. Every constant of
// the form gamma(f^i)^2 = -16 depends on this factor.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <random>
#include <utility>

#include "calib/errors.hpp"
#include "calib/exterior.hpp"

namespace calib {

struct Quaternion {
    double w = 0, x = 0, y = 0, z = 0;

    Quaternion operator+(const Quaternion& o) const { return {w + o.w, x + o.x, y + o.y, z + o.z}; }
    Quaternion operator-(const Quaternion& o) const { return {w - o.w, x - o.x, y - o.y, z - o.z}; }
    Quaternion operator*(const Quaternion& o) const {
        return {w * o.w - x * o.x - y * o.y - z * o.z, w * o.x + x * o.w + y * o.z - z * o.y,
                w * o.y - x * o.z + y * o.w + z * o.x, w * o.z + x * o.y - y * o.x + z * o.w};
    }
    Quaternion conj() const { return {w, -x, -y, -z}; }
};

struct Octonion {
    std::array<double, 8> c{};

    Octonion() = default;
    explicit Octonion(const std::array<double, 8>& v) : c(v) {}

    static Octonion unit(int k) {
        Octonion o;
        o.c[k] = 1.0;
        return o;
    }
    static Octonion real(double r) {
        Octonion o;
        o.c[0] = r;
        return o;
    }
    static Octonion from(const Eigen::Matrix<double, 8, 1>& v) {
        Octonion o;
        for (int k = 0; k < 8; ++k) o.c[k] = v[k];
        return o;
    }
    Eigen::Matrix<double, 8, 1> vec() const {
        Eigen::Matrix<double, 8, 1> v;
        for (int k = 0; k < 8; ++k) v[k] = c[k];
        return v;
    }

    Quaternion lo() const { return {c[0], c[1], c[2], c[3]}; }
    Quaternion hi() const { return {c[4], c[5], c[6], c[7]}; }
    static Octonion pair(const Quaternion& a, const Quaternion& b) {
        return Octonion({a.w, a.x, a.y, a.z, b.w, b.x, b.y, b.z});
    }

    double operator[](int k) const { return c[k]; }
    double& operator[](int k) { return c[k]; }

    Octonion operator+(const Octonion& o) const {
        Octonion r;
        for (int k = 0; k < 8; ++k) r.c[k] = c[k] + o.c[k];
        return r;
    }
    Octonion operator-(const Octonion& o) const {
        Octonion r;
        for (int k = 0; k < 8; ++k) r.c[k] = c[k] - o.c[k];
        return r;
    }
    Octonion operator-() const { return *this * -1.0; }
    Octonion operator*(double s) const {
        Octonion r;
        for (int k = 0; k < 8; ++k) r.c[k] = c[k] * s;
        return r;
    }
    friend Octonion operator*(double s, const Octonion& o) { return o * s; }
    Octonion& operator+=(const Octonion& o) {
        for (int k = 0; k < 8; ++k) c[k] += o.c[k];
        return *this;
    }

    // (a, b)(c, d) = (ac - conj(d) b, d a + b conj(c))
    Octonion operator*(const Octonion& o) const {
        const Quaternion a = lo(), b = hi(), cc = o.lo(), d = o.hi();
        return pair(a * cc - d.conj() * b, d * a + b * cc.conj());
    }

    Octonion conj() const {
        Octonion r = *this * -1.0;
        r.c[0] = c[0];
        return r;
    }
    double re() const { return c[0]; }
    Octonion im() const {
        Octonion r = *this;
        r.c[0] = 0.0;
        return r;
    }
    double dot(const Octonion& o) const {
        double s = 0;
        for (int k = 0; k < 8; ++k) s += c[k] * o.c[k];
        return s;
    }
    double norm() const { return std::sqrt(dot(*this)); }
};

inline Octonion oct_mul(const Octonion& x, const Octonion& y) { return x * y; }

inline Octonion associator(const Octonion& x, const Octonion& y, const Octonion& z) {
    return (x * y) * z - x * (y * z);
}

inline void require_imaginary(const Octonion& u, const char* who) {
    if (std::abs(u.re()) > 1e-12 * (1.0 + u.norm())) throw domain_error(std::string(who) + ": argument is not imaginary");
}

inline Octonion cross2(const Octonion& u, const Octonion& v) {
    require_imaginary(u, "cross2");
    require_imaginary(v, "cross2");
    return (u * v).im();
}

// X(u, v, w) with <X(u, v, w), y> = Phi0(u, v, w, y).
inline Octonion cross3(const Octonion& u, const Octonion& v, const Octonion& w) {
    return (u * (v.conj() * w) - w * (v.conj() * u)) * -0.5;
}

inline double phi0(const Octonion& x, const Octonion& y, const Octonion& z) { return (x * y).dot(z); }

inline double cayley0(const Octonion& x, const Octonion& y, const Octonion& z, const Octonion& w) {
    return x.dot((y * (z.conj() * w) - w * (z.conj() * y)) * 0.5);
}

// phi0 on Im O as a 3-form over the basis (i, j, k, e, ie, je, ke).
inline Multivector phi0_form() {
    auto sp = InnerSpace::make(7);
    Multivector m(sp);
    for (unsigned I = 0; I < sp->size(); ++I) {
        if (std::popcount(I) != 3) continue;
        int idx[3], n = 0;
        for (int a = 0; a < 7; ++a)
            if (I >> a & 1u) idx[n++] = a + 1;
        m[I] = phi0(Octonion::unit(idx[0]), Octonion::unit(idx[1]), Octonion::unit(idx[2]));
    }
    return m;
}

// The Cayley form on O as a 4-form over the basis (1, i, j, k, e, ie, je, ke).
inline Multivector cayley0_form() {
    auto sp = InnerSpace::make(8);
    Multivector m(sp);
    for (unsigned I = 0; I < sp->size(); ++I) {
        if (std::popcount(I) != 4) continue;
        int idx[4], n = 0;
        for (int a = 0; a < 8; ++a)
            if (I >> a & 1u) idx[n++] = a;
        m[I] = cayley0(Octonion::unit(idx[0]), Octonion::unit(idx[1]), Octonion::unit(idx[2]),
                       Octonion::unit(idx[3]));
    }
    return m;
}

// Embedded orthonormal coframe (e^1, e^2, nu^3, nu^4) in He. The default sends
// e^1 -> e, e^2 -> ie, nu^3 -> ke, nu^4 -> je, for which gamma(lambda) = -1 on H.
struct PinorContext {
    std::array<Octonion, 4> coframe{Octonion::unit(4), Octonion::unit(5), Octonion::unit(7), Octonion::unit(6)};

    Octonion embed(const Eigen::Vector4d& alpha) const {
        Octonion r;
        for (int a = 0; a < 4; ++a) r += coframe[a] * alpha[a];
        return r;
    }
};

inline Octonion gamma(const Octonion& alpha, const Octonion& s) { return alpha * s; }

inline Octonion gamma(const PinorContext& ctx, const Eigen::Vector4d& alpha, const Octonion& s) {
    return ctx.embed(alpha) * s;
}

// gamma(e^a) gamma(e^b) s for 0-based coframe slots.
inline Octonion gamma_pair(const PinorContext& ctx, int a, int b, const Octonion& s) {
    return ctx.coframe[a] * (ctx.coframe[b] * s);
}

// gamma of a 2-form on the 4-space underlying ctx.
inline Octonion gamma_form(const PinorContext& ctx, const Multivector& f, const Octonion& s) {
    if (f.space()->dim() != 4) throw dimension_error("gamma_form: 2-form must live on a 4-space");
    Octonion r;
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            const double cab = f[(1u << a) | (1u << b)];
            if (cab != 0.0) r += gamma_pair(ctx, a, b, s) * (2.0 * cab);
        }
    return r;
}

// gamma(lambda) s with lambda = e^1 . e^2 . e^3 . e^4.
inline Octonion gamma_volume(const PinorContext& ctx, const Octonion& s) {
    return ctx.coframe[0] * (ctx.coframe[1] * (ctx.coframe[2] * (ctx.coframe[3] * s)));
}

inline std::pair<Octonion, Octonion> pinor_split(const Octonion& s, const PinorContext& ctx = {}) {
    const Octonion l = gamma_volume(ctx, s);
    return {(s + l) * 0.5, (s - l) * 0.5};
}

inline Octonion random_octonion(std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Octonion o;
    for (auto& x : o.c) x = nd(rng);
    return o;
}

// Random orthonormal coframe of He obtained by rotating the default one.
inline PinorContext random_pinor_context(std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Eigen::Matrix4d m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = nd(rng);
    Eigen::HouseholderQR<Eigen::Matrix4d> qr(m);
    Eigen::Matrix4d q = qr.householderQ();
    if (q.determinant() < 0) q.col(0) *= -1.0;
    PinorContext base, ctx;
    for (int a = 0; a < 4; ++a) {
        Octonion r;
        for (int b = 0; b < 4; ++b) r += base.coframe[b] * q(b, a);
        ctx.coframe[a] = r;
    }
    return ctx;
}

}  // namespace calib
