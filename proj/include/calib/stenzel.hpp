#pragma once

// Calabi-Yau model on T*S^n: the diffeomorphism onto the quadric
// Q = {sum z_k^2 = 1}, the Stenzel Kahler form coefficients, tangent bases of
// twisted conormal bundles N*L + mu and the Lagrangian residuals.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "calib/errors.hpp"
#include "calib/submanifold.hpp"

namespace calib {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// v'(r) and v''(r) of the Stenzel potential; only positivity is used.
struct StenzelProfile {
    std::string name = "default";
    std::function<double(double)> vp = [](double r) { return 1.0 + r * r; };
    std::function<double(double)> vpp = [](double r) { return 2.0 * r + 1.0; };

    static StenzelProfile constant(double a, double b) {
        StenzelProfile p;
        p.name = "const";
        p.vp = [a](double) { return a; };
        p.vpp = [b](double) { return b; };
        return p;
    }

    void require_positive(double r_max = 50.0, int n = 400) const {
        for (int i = 1; i <= n; ++i) {
            const double r = r_max * i / n;
            if (!(vp(r) > 0) || !(vpp(r) > 0)) throw config_error("stenzel profile " + name + " is not positive");
        }
    }
};

// x cosh|xi| + i (xi / |xi|) sinh|xi|.
inline CVec psi_map(const Vec& x, const Vec& xi) {
    if (x.size() != xi.size()) throw dimension_error("psi_map: size mismatch");
    if (std::abs(x.dot(xi)) > 1e-10 * (1.0 + xi.norm())) throw domain_error("psi_map: xi is not orthogonal to x");
    const double r = xi.norm();
    const double s = r > 0 ? std::sinh(r) / r : 1.0;
    CVec z(x.size());
    for (int k = 0; k < x.size(); ++k) z[k] = cplx(x[k] * std::cosh(r), xi[k] * s);
    return z;
}

inline cplx quadric_defect(const CVec& z) { return (z.array() * z.array()).sum() - 1.0; }

// Hermitian a_{jk}, j, k = 1..n, in the chart z_0 != 0.
inline CMat stenzel_coeffs(const CVec& z, const StenzelProfile& prof, double eps0 = 0.1) {
    const cplx z0 = z[0];
    if (std::abs(z0) <= eps0) throw chart_error("stenzel_coeffs: |z_0| is below the chart guard");
    const int n = static_cast<int>(z.size()) - 1;
    const double r = z.norm();
    const double vp = prof.vp(r), vpp = prof.vpp(r);
    const double m0 = std::norm(z0);
    const cplx ph = std::conj(z0) / z0;
    CMat a(n, n);
    for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k) {
            const cplx lin = z[j] * std::conj(z[k]) / m0;
            const cplx quad = std::conj(z[j]) * z[k] - ph * z[j] * z[k];
            a(j - 1, k - 1) = ((j == k ? 1.0 : 0.0) + lin) * vp + 2.0 * quad.real() * vpp;
        }
    return a;
}

// (i/2) sum a_{jk} (dz_j ^ dzbar_k)(V, W) with dz_k read off as the k-th coordinate.
inline double stenzel_omega(const CMat& a, const CVec& V, const CVec& W) {
    const int n = static_cast<int>(a.rows());
    cplx s = 0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) s += a(j, k) * (V[j + 1] * std::conj(W[k + 1]) - W[j + 1] * std::conj(V[k + 1]));
    return (cplx(0, 0.5) * s).real();
}

// The factor (1 - tanh(sqrt y)/sqrt y + tanh^2 sqrt y) v' + 4 sinh^2(sqrt y) v''.
inline double stenzel_bracket(double y, double vp, double vpp) {
    const double r = std::sqrt(y), th = std::tanh(r), sh = std::sinh(r);
    return (1.0 - th / r + th * th) * vp + 4.0 * sh * sh * vpp;
}

// Closed-form omega(E_i, F_j) = a_i t_j cosh^2(sqrt y) / y * bracket.
inline double stenzel_mixed_closed(double a_i, double t_j, double y, double vp, double vpp) {
    const double c = std::cosh(std::sqrt(y));
    return a_i * t_j * c * c / y * stenzel_bracket(y, vp, vpp);
}

// Ambient vector field m(u) tangent to L representing the one-form mu.
using ConormalTwist = std::function<Vec(const Vec&)>;

inline ConormalTwist zero_twist(int dim) {
    return [dim](const Vec&) { return Vec(Vec::Zero(dim)); };
}

// lambda e_k(u) of the given chart.
inline ConormalTwist frame_twist(const ImmersionChart& c, int k, double lambda) {
    return [c, k, lambda](const Vec& u) { return Vec(lambda * chart_frame(c, u).col(k - 1)); };
}

struct TwistedConormalPoint {
    Vec u, t;
    Vec a;   // coefficients of mu against e_1..e_q
    double y = 0;
    Mat R;   // rows (x, e_1..e_q, nu_{q+1}..nu_n) at u
    CVec z;  // rebased quadric point
    std::vector<CVec> E, F;
};

inline CVec rebase(const Mat& R, const CVec& v) { return R.cast<cplx>() * v; }

inline Mat rebasing(const Vec& x, const Mat& F) {
    Mat R(F.rows(), F.rows());
    R.row(0) = x.transpose();
    R.bottomRows(F.cols()) = F.transpose();
    return R;
}

// (Psi o Phi)(u, t) = Psi(x(u), sum t_k nu_k(u) + m(u)).
inline CVec twisted_conormal_map(const ImmersionChart& c, const std::function<Mat(const Vec&)>& frame,
                                 const ConormalTwist& mu, const Vec& u, const Vec& t) {
    const Mat F = frame(u);
    const Vec x = c.map(u);
    Vec xi = mu(u);
    xi -= x.dot(xi) * x;
    for (int k = 0; k < t.size(); ++k) xi += t[k] * F.col(c.q + k);
    return psi_map(x, xi);
}

namespace detail {

inline CVec richardson(const std::function<CVec(double)>& f, double h) {
    const CVec d1 = (f(h) - f(-h)) / (2 * h);
    const CVec d2 = (f(0.5 * h) - f(-0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

inline TwistedConormalPoint conormal_base(const ImmersionChart& c, const std::function<Mat(const Vec&)>& frame,
                                          const ConormalTwist& mu, const Vec& u, const Vec& t) {
    if (t.size() != c.n - c.q) throw dimension_error("twisted conormal: fiber has wrong dimension");
    c.check_domain(u);
    TwistedConormalPoint p;
    p.u = u;
    p.t = t;
    const Mat F = frame(u);
    const Vec x = c.map(u);
    p.R = rebasing(x, F);
    const Vec m = mu(u);
    p.a = F.leftCols(c.q).transpose() * m;
    p.y = t.squaredNorm() + p.a.squaredNorm();
    p.z = rebase(p.R, twisted_conormal_map(c, frame, mu, u, t));
    return p;
}

}  // namespace detail

// Tangent basis by central differences of the total-space map, in rebased coordinates.
inline TwistedConormalPoint twisted_conormal_fd(const ImmersionChart& c, const std::function<Mat(const Vec&)>& frame,
                                                const ConormalTwist& mu, const Vec& u, const Vec& t) {
    TwistedConormalPoint p = detail::conormal_base(c, frame, mu, u, t);
    const Mat J = chart_jacobian(c, u);
    const Mat dirs = frame_directions(J, frame(u), c.q);
    const double h = c.step(u);
    for (int i = 0; i < c.q; ++i) {
        const Vec d = dirs.col(i);
        auto f = [&](double s) { return twisted_conormal_map(c, frame, mu, u + s * d, t); };
        p.E.push_back(rebase(p.R, detail::richardson(f, h)));
    }
    for (int j = 0; j < t.size(); ++j) {
        auto f = [&](double s) {
            Vec tt = t;
            tt[j] += s;
            return twisted_conormal_map(c, frame, mu, u, tt);
        };
        p.F.push_back(rebase(p.R, detail::richardson(f, 1e-4 * (1.0 + t.norm()))));
    }
    return p;
}

inline TwistedConormalPoint twisted_conormal_fd(const ImmersionChart& c, const ConormalTwist& mu, const Vec& u,
                                                const Vec& t) {
    return twisted_conormal_fd(c, [&c](const Vec& v) { return chart_frame(c, v); }, mu, u, t);
}

// Closed-form tangent basis; valid only where the frame of `c` is normal at u.
// The E_i include the radial term -i a_i sinh(sqrt y)/sqrt y on e_0 coming from
// the ambient derivative of the fiber vector.
inline TwistedConormalPoint twisted_conormal_closed(const ImmersionChart& c, const ConormalTwist& mu, const Vec& u,
                                                    const Vec& t) {
    auto frame = [&c](const Vec& v) { return chart_frame(c, v); };
    TwistedConormalPoint p = detail::conormal_base(c, frame, mu, u, t);
    if (p.y <= 0) throw domain_error("twisted_conormal_closed: needs y > 0");
    const AdaptedFramePoint fp = adapted_frame(c, u);
    const int q = c.q, n = c.n;
    // Frame derivatives of a_l = <m, e_l>.
    Mat da(q, q);  // da(l, i) = e_i(a_l)
    const double h = c.step(u);
    for (int i = 0; i < q; ++i) {
        const Vec d = fp.dirs.col(i);
        auto al = [&](double s) {
            const Vec v = u + s * d;
            return Vec(frame(v).leftCols(q).transpose() * mu(v));
        };
        const Vec d1 = (al(h) - al(-h)) / (2 * h), d2 = (al(0.5 * h) - al(-0.5 * h)) / h;
        da.col(i) = (4.0 * d2 - d1) / 3.0;
    }
    const double ry = std::sqrt(p.y), ch = std::cosh(ry), s = std::sinh(ry) / ry;
    const cplx I(0, 1);
    Vec xi(n);
    xi << p.a, t;
    Mat Anu = Mat::Zero(q, q);
    for (int k = q + 1; k <= n; ++k) Anu += t[k - q - 1] * fp.second_fundamental(k);
    for (int i = 0; i < q; ++i) {
        const double g = p.a.dot(da.col(i));
        CVec E = CVec::Zero(n + 1);
        E[0] = s * g - I * s * p.a[i];
        E[1 + i] += ch;
        for (int l = 0; l < n; ++l) E[1 + l] += I * (g / p.y) * (ch - s) * xi[l];
        for (int l = 0; l < q; ++l) E[1 + l] += I * s * (Anu(i, l) + da(l, i));
        for (int k = q + 1; k <= n; ++k) {
            double w = 0;
            for (int l = 0; l < q; ++l) w += p.a[l] * fp.second_fundamental(k)(i, l);
            E[k] -= I * s * w;
        }
        p.E.push_back(E);
    }
    for (int j = 0; j < n - q; ++j) {
        CVec F = CVec::Zero(n + 1);
        F[0] = t[j] * s;
        for (int l = 0; l < n; ++l) F[1 + l] += I * (t[j] / p.y) * (ch - s) * xi[l];
        F[1 + q + j] += I * s;
        p.F.push_back(F);
    }
    return p;
}

struct LagrangianResidual {
    double all = 0;    // max |omega| over every pair of basis vectors
    double mixed = 0;  // max |omega(E_i, F_j)|
    double tangency = 0;  // max |sum z_k v_k| over basis vectors
    double quadric = 0;
};

inline LagrangianResidual lagrangian_residual(const TwistedConormalPoint& p, const StenzelProfile& prof) {
    LagrangianResidual r;
    const CMat a = stenzel_coeffs(p.z, prof);
    std::vector<CVec> B = p.E;
    B.insert(B.end(), p.F.begin(), p.F.end());
    for (size_t i = 0; i < B.size(); ++i) {
        r.tangency = std::max(r.tangency, std::abs((p.z.array() * B[i].array()).sum()));
        for (size_t j = i + 1; j < B.size(); ++j) r.all = std::max(r.all, std::abs(stenzel_omega(a, B[i], B[j])));
    }
    for (const auto& E : p.E)
        for (const auto& F : p.F) r.mixed = std::max(r.mixed, std::abs(stenzel_omega(a, E, F)));
    r.quadric = std::abs(quadric_defect(p.z));
    return r;
}

}  // namespace calib
