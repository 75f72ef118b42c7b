#pragma once

// Bryant-Salamon G2 model on the anti-self-dual 2-forms over L in S^4: ASD
// frames, the 3-form phi and 4-form psi in the horizontal/vertical splitting,
// covariant derivatives of the ASD frame, tangent bases of E + sigma and
// eta + F, and the associative/coassociative residuals.
//
// Splitting coordinates are ordered (e_1, e_2, nu_3, nu_4, f_1, f_2, f_3);
// vertical coordinates are coefficients against (f^1, f^2, f^3).

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "calib/errors.hpp"
#include "calib/examples.hpp"
#include "calib/exterior.hpp"
#include "calib/submanifold.hpp"

namespace calib {

// Radial profiles u(r), v(r) of a Bryant-Salamon metric, or v'(r), v''(r) of
// the Stenzel potential. Only positivity enters the verified conditions.
struct Profile {
    std::string name = "unit";
    std::function<double(double)> u = [](double) { return 1.0; };
    std::function<double(double)> v = [](double) { return 1.0; };

    static Profile constant(double a, double b) {
        Profile p;
        p.name = "const";
        p.u = [a](double) { return a; };
        p.v = [b](double) { return b; };
        return p;
    }

    void require_positive(double r_max = 25.0, int n = 200) const {
        for (int i = 0; i <= n; ++i) {
            const double r = r_max * i / n;
            if (!(u(r) > 0) || !(v(r) > 0)) throw config_error("profile " + name + " is not positive");
        }
    }
};

inline SpacePtr g2_space(double u, double v) {
    Mat g = Mat::Zero(7, 7);
    g.diagonal() << u * u, u * u, u * u, u * u, v * v, v * v, v * v;
    return InnerSpace::make(g);
}

namespace detail {

inline Multivector mono(const SpacePtr& s, std::initializer_list<int> idx) { return Multivector::basis(s, idx); }

// The three ASD combinations on the horizontal block of a 7- or 8-space.
inline std::array<Multivector, 3> horizontal_asd(const SpacePtr& s) {
    return {mono(s, {1, 2}) - mono(s, {3, 4}), mono(s, {1, 3}) - mono(s, {4, 2}), mono(s, {1, 4}) - mono(s, {2, 3})};
}

}  // namespace detail

inline Multivector g2_phi(double u, double v) {
    using detail::mono;
    const auto s = g2_space(u, v);
    const auto h = detail::horizontal_asd(s);
    Multivector phi = mono(s, {5, 6, 7}) * (v * v * v);
    for (int k = 0; k < 3; ++k) phi += wedge(mono(s, {5 + k}), h[k]) * (u * u * v);
    return phi;
}

inline Multivector g2_psi(double u, double v) {
    using detail::mono;
    const auto s = g2_space(u, v);
    const auto h = detail::horizontal_asd(s);
    const std::array<Multivector, 3> vert{mono(s, {6, 7}), mono(s, {7, 5}), mono(s, {5, 6})};
    Multivector psi = mono(s, {1, 2, 3, 4}) * std::pow(u, 4);
    for (int k = 0; k < 3; ++k) psi += wedge(vert[k], h[k]) * (-u * u * v * v);
    return psi;
}

// f^1, f^2, f^3 as 2-forms on the oriented 4-space with coframe (e^1, e^2, nu^3, nu^4).
inline std::array<Multivector, 3> asd_frame(const SpacePtr& four = InnerSpace::make(4)) {
    if (four->dim() != 4) throw dimension_error("asd_frame: needs a 4-space");
    return detail::horizontal_asd(four);
}

// f^1, f^2, f^3 as ambient bivectors built from the frame columns (e1, e2, nu3, nu4).
inline std::array<Mat, 3> asd_bivectors(const Mat& F) {
    if (F.cols() != 4) throw dimension_error("asd_bivectors: needs a frame of four vectors");
    return {Mat(bivector(F.col(0), F.col(1)) - bivector(F.col(2), F.col(3))),
            Mat(bivector(F.col(0), F.col(2)) - bivector(F.col(3), F.col(1))),
            Mat(bivector(F.col(0), F.col(3)) - bivector(F.col(1), F.col(2)))};
}

// Coefficients of an ambient bivector against a family of mutually orthogonal bivectors.
template <size_t N>
inline Vec bivector_coords(const Mat& M, const std::array<Mat, N>& basis) {
    Vec c(N);
    for (size_t m = 0; m < N; ++m) c[m] = (M.transpose() * basis[m]).trace() / (basis[m].transpose() * basis[m]).trace();
    return c;
}

// N(k-1, m-1) = coefficient of f^m in nabla_{e_j} f^k, from the connection coefficients.
inline Eigen::Matrix3d nabla_f(const Connection& G, int j) {
    Eigen::Matrix3d N = Eigen::Matrix3d::Zero();
    N(0, 1) = G(j, 4, 1) - G(j, 3, 2);
    N(0, 2) = -G(j, 3, 1) - G(j, 4, 2);
    N(1, 0) = G(j, 3, 2) - G(j, 4, 1);
    N(1, 2) = G(j, 2, 1) - G(j, 4, 3);
    N(2, 0) = G(j, 3, 1) + G(j, 4, 2);
    N(2, 1) = G(j, 4, 3) - G(j, 2, 1);
    return N;
}

// Covariant derivative along e_j of an ambient bivector field on S^4: Euclidean
// derivative by central differences, then both slots projected onto T S^4.
inline Mat nabla_bivector_fd(const ImmersionChart& c, const std::function<Mat(const Vec&)>& field,
                             const AdaptedFramePoint& p, int j) {
    const double h = c.step(p.u);
    Mat D = Mat::Zero(p.x.size(), p.x.size());
    for (int m = 0; m < c.q; ++m) {
        Vec d = Vec::Zero(c.q);
        d[m] = 1.0;
        const Mat D1 = (field(p.u + h * d) - field(p.u - h * d)) / (2 * h);
        const Mat D2 = (field(p.u + 0.5 * h * d) - field(p.u - 0.5 * h * d)) / h;
        D += p.dirs(m, j - 1) * (4.0 * D2 - D1) / 3.0;
    }
    const Mat P = Mat::Identity(p.x.size(), p.x.size()) - p.x * p.x.transpose();
    return P * D * P;
}

inline Eigen::Matrix3d nabla_f_fd(const ImmersionChart& c, const AdaptedFramePoint& p, int j) {
    const auto fb = asd_bivectors(p.F);
    Eigen::Matrix3d N;
    for (int k = 0; k < 3; ++k) {
        const Mat D = nabla_bivector_fd(c, [&c, k](const Vec& v) { return asd_bivectors(chart_frame(c, v))[k]; }, p, j);
        N.row(k) = bivector_coords(D, fb).transpose();
    }
    return N;
}

inline Vec horizontal_unit(int dim, int i) { return Vec::Unit(dim, i - 1); }

// Tangent basis {E_1, E_2, F_1} of E + sigma at fiber value t1 f^1 + sigma.
inline std::vector<Vec> g2_tangent_E_sigma(const AdaptedFramePoint& p, const SectionJet& s, double t1) {
    const double a = s.G.real(), b = s.G.imag();
    std::vector<Vec> out;
    for (int i = 1; i <= 2; ++i) {
        const Eigen::Matrix3d N = nabla_f(p.gamma, i);
        const cplx Gi = i == 1 ? s.G1 : s.G2;
        Eigen::Vector3d vert = t1 * N.row(0).transpose() + a * N.row(1).transpose() + b * N.row(2).transpose();
        vert[1] += Gi.real();
        vert[2] += Gi.imag();
        Vec E = horizontal_unit(7, i);
        E.tail(3) = vert;
        out.push_back(E);
    }
    out.push_back(horizontal_unit(7, 5));
    return out;
}

// Same basis with the vertical parts obtained by differentiating the ambient
// bivector field t1 f^1 + a f^2 + b f^3 along the base.
inline std::vector<Vec> g2_tangent_E_sigma_fd(const ImmersionChart& c, const SectionFamily& sec, const Vec& u,
                                              double t1) {
    const AdaptedFramePoint p = adapted_frame(c, u);
    const auto fb = asd_bivectors(p.F);
    auto field = [&c, &sec, t1](const Vec& v) {
        const auto f = asd_bivectors(chart_frame(c, v));
        const cplx G = sec.value(v);
        return Mat(t1 * f[0] + G.real() * f[1] + G.imag() * f[2]);
    };
    std::vector<Vec> out;
    for (int i = 1; i <= 2; ++i) {
        Vec E = horizontal_unit(7, i);
        E.tail(3) = bivector_coords(nabla_bivector_fd(c, field, p, i), fb);
        out.push_back(E);
    }
    out.push_back(horizontal_unit(7, 5));
    return out;
}

// Real scalar jet gamma, gamma_1, gamma_2 for eta = gamma f^1.
struct ScalarJet {
    double value = 0, d1 = 0, d2 = 0;
};

inline ScalarJet scalar_jet(const std::function<double(const Vec&)>& g, const AdaptedFramePoint& p) {
    const auto d = complex_partials_fd([&g](const Vec& v) { return cplx(g(v), 0.0); }, p.u, 1e-4);
    ScalarJet j;
    j.value = g(p.u);
    j.d1 = p.dirs(0, 0) * d[0].real() + p.dirs(1, 0) * d[1].real();
    j.d2 = p.dirs(0, 1) * d[0].real() + p.dirs(1, 1) * d[1].real();
    return j;
}

// Tangent basis {E_1, E_2, F_2, F_3} of eta + F at fiber value eta + t2 f^2 + t3 f^3.
inline std::vector<Vec> g2_tangent_eta_F(const AdaptedFramePoint& p, const ScalarJet& eta, double t2, double t3) {
    std::vector<Vec> out;
    for (int i = 1; i <= 2; ++i) {
        const Eigen::Matrix3d N = nabla_f(p.gamma, i);
        Eigen::Vector3d vert = eta.value * N.row(0).transpose() + t2 * N.row(1).transpose() + t3 * N.row(2).transpose();
        vert[0] += i == 1 ? eta.d1 : eta.d2;
        Vec E = horizontal_unit(7, i);
        E.tail(3) = vert;
        out.push_back(E);
    }
    out.push_back(horizontal_unit(7, 6));
    out.push_back(horizontal_unit(7, 7));
    return out;
}

inline double associative_residual(const Multivector& psi, const Vec& E1, const Vec& E2, const Vec& F1) {
    return contract(E2, contract(E1, contract(F1, psi))).coeff_norm();
}

inline double coassociative_residual(const Multivector& phi, const Vec& E1, const Vec& E2, const Vec& F2,
                                     const Vec& F3) {
    double r = 0;
    for (const auto& tri : {std::vector<Vec>{E1, E2, F2}, std::vector<Vec>{E1, E2, F3}, std::vector<Vec>{E1, F2, F3},
                            std::vector<Vec>{E2, F2, F3}})
        r = std::max(r, std::abs(evaluate(phi, tri)));
    return r;
}

// Components of the (0,1)-derivative of sigma = a f^2 + b f^3 against (f^2, f^3).
inline Eigen::Vector2d dbar_F_residual(const SectionJet& s, const Connection& G) {
    const cplx r = pde_residual(s, G);
    return {r.real(), r.imag()};
}

inline double parallel_E_residual(const ScalarJet& eta) { return std::abs(eta.d1) + std::abs(eta.d2); }

}  // namespace calib
