#pragma once

// Frame machinery for immersions x: L^q -> S^n in R^{n+1}: Jacobians, adapted
// orthonormal frames, connection coefficients and second fundamental forms.
//
// Frame indices are 1-based: 1..q tangent, q+1..n normal. Connection
// coefficients follow Gamma^l_{jk} = <nabla_{e_j} frame_k, frame_l>, and the
// second fundamental form is A^k_{ij} = <nabla_{e_i} nu_k, e_j> = Gamma^j_{ik}.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "calib/errors.hpp"
#include "calib/exterior.hpp"

namespace calib {

struct ImmersionChart {
    std::string name;
    int q = 0;
    int n = 0;
    Vec lo, hi;                // open domain box, entries may be infinite
    Vec sample_lo, sample_hi;  // box used by samplers
    std::function<Vec(const Vec&)> map;
    std::function<Mat(const Vec&)> jacobian;  // optional, (n+1) x q
    std::function<Mat(const Vec&)> frame;     // optional, (n+1) x n
    std::function<Vec(double, double)> exhaust;  // optional, chart point near the excluded set
    double fd_step = 1e-5;

    double step(const Vec& u) const { return fd_step * (1.0 + u.norm()); }
    double margin(const Vec& u) const { return 10.0 * step(u); }

    bool inside(const Vec& u) const {
        if (u.size() != q) return false;
        const double d = margin(u);
        for (int i = 0; i < q; ++i)
            if (!(u[i] > lo[i] + d && u[i] < hi[i] - d)) return false;
        return true;
    }

    void check_domain(const Vec& u) const {
        if (u.size() != q) throw dimension_error("chart " + name + ": point has wrong dimension");
        if (!inside(u)) throw domain_error("chart " + name + ": point outside the safe domain");
    }

    Vec center() const { return 0.5 * (sample_lo + sample_hi); }
};

// Five-point stencil at a fixed step; used only when no analytic Jacobian is given.
inline Mat jacobian_fd(const std::function<Vec(const Vec&)>& f, const Vec& u, double h) {
    const Vec f0 = f(u);
    Mat J(f0.size(), u.size());
    for (int i = 0; i < u.size(); ++i) {
        Vec d = Vec::Zero(u.size());
        d[i] = h;
        J.col(i) = (-f(u + 2 * d) + 8 * f(u + d) - 8 * f(u - d) + f(u - 2 * d)) / (12 * h);
    }
    return J;
}

inline Mat chart_jacobian(const ImmersionChart& c, const Vec& u) {
    if (c.jacobian) return c.jacobian(u);
    return jacobian_fd(c.map, u, 1e-3 * std::min(1.0, 0.5 * (c.hi - c.lo).minCoeff()));
}

// Polar orthonormalization M (M^T M)^{-1/2}.
inline Mat polar(const Mat& M) {
    Eigen::SelfAdjointEigenSolver<Mat> es(M.transpose() * M);
    return M * es.operatorInverseSqrt();
}

inline Mat gram_schmidt(const Mat& M) {
    Mat Q = M;
    for (int j = 0; j < Q.cols(); ++j) {
        for (int k = 0; k < j; ++k) Q.col(j) -= Q.col(k).dot(Q.col(j)) * Q.col(k);
        const double nrm = Q.col(j).norm();
        if (nrm < 1e-12) throw immersion_error("gram_schmidt: rank-deficient input");
        Q.col(j) /= nrm;
    }
    return Q;
}

inline double frame_orientation(const Vec& x, const Mat& F) {
    Mat M(x.size(), F.cols() + 1);
    M.col(0) = x;
    M.rightCols(F.cols()) = F;
    return M.determinant();
}

namespace detail {

inline Mat tangent_block(const ImmersionChart& c, const Vec& u) {
    const Mat J = chart_jacobian(c, u);
    Eigen::JacobiSVD<Mat> svd(J);
    const auto& s = svd.singularValues();
    if (s[s.size() - 1] < 1e-10 * std::max(1.0, s[0])) throw immersion_error("chart " + c.name + ": Jacobian is rank deficient");
    return gram_schmidt(J);
}

// Normal completion fixed at the chart center, projected at u.
inline Mat default_normals(const ImmersionChart& c, const Vec& x, const Mat& T) {
    const int N = c.n + 1, m = c.n - c.q;
    const Vec uc = c.center();
    const Vec xc = c.map(uc);
    const Mat Tc = tangent_block(c, uc);
    Mat base(N, c.q + 1);
    base.col(0) = xc;
    base.rightCols(c.q) = Tc;
    Mat ref(N, m);
    int got = 0;
    for (int k = 0; k < N && got < m; ++k) {
        Vec v = Vec::Unit(N, k);
        v -= base * (base.transpose() * v);
        for (int j = 0; j < got; ++j) v -= ref.col(j).dot(v) * ref.col(j);
        if (v.norm() > 0.3) ref.col(got++) = v.normalized();
    }
    Mat span(N, c.q + 1);
    span.col(0) = x;
    span.rightCols(c.q) = T;
    Mat proj = ref - span * (span.transpose() * ref);
    return gram_schmidt(proj);
}

}  // namespace detail

// Frame field of the chart: the attached one, or Gram-Schmidt of the Jacobian
// completed by a normal frame fixed at the chart center.
inline Mat chart_frame(const ImmersionChart& c, const Vec& u) {
    if (c.frame) return c.frame(u);
    const Vec x = c.map(u);
    const Mat T = detail::tangent_block(c, u);
    Mat F(c.n + 1, c.n);
    F.leftCols(c.q) = T;
    if (c.n > c.q) {
        F.rightCols(c.n - c.q) = detail::default_normals(c, x, T);
        if (frame_orientation(x, F) < 0) F.col(c.n - 1) *= -1.0;
    }
    return F;
}

struct Connection {
    int q = 0, n = 0;
    std::vector<double> g;

    Connection() = default;
    Connection(int q_, int n_) : q(q_), n(n_), g(static_cast<size_t>(q_) * n_ * n_, 0.0) {}

    // Gamma^l_{jk}, all indices 1-based.
    double operator()(int j, int k, int l) const { return g[idx(j, k, l)]; }
    double& operator()(int j, int k, int l) { return g[idx(j, k, l)]; }

    size_t idx(int j, int k, int l) const {
        return (static_cast<size_t>(j - 1) * n + (k - 1)) * n + (l - 1);
    }
};

struct AdaptedFramePoint {
    int q = 0, n = 0;
    Vec u;
    Vec x;
    Mat F;     // (n+1) x n, columns e_1..e_q, nu_{q+1}..nu_n
    Mat J;     // (n+1) x q chart Jacobian
    Mat dirs;  // q x q, column i solves J c = e_i
    Connection gamma;
    std::vector<Mat> A;  // A[k - q - 1](i, j) = A^k_{ij}

    Vec e(int i) const { return F.col(i - 1); }
    Vec nu(int k) const { return F.col(k - 1); }
    const Mat& second_fundamental(int k) const { return A[k - q - 1]; }
};

// Partial derivatives of the frame field: central differences with one level of
// Richardson extrapolation.
inline std::vector<Mat> frame_partials(const ImmersionChart& c, const std::function<Mat(const Vec&)>& frame,
                                       const Vec& u) {
    const double h = c.step(u);
    std::vector<Mat> out;
    for (int m = 0; m < c.q; ++m) {
        Vec d = Vec::Zero(c.q);
        d[m] = 1.0;
        const Mat D1 = (frame(u + h * d) - frame(u - h * d)) / (2 * h);
        const Mat D2 = (frame(u + 0.5 * h * d) - frame(u - 0.5 * h * d)) / h;
        out.push_back((4.0 * D2 - D1) / 3.0);
    }
    return out;
}

// Chart directions c_i with J c_i = e_i.
inline Mat frame_directions(const Mat& J, const Mat& F, int q) {
    return J.colPivHouseholderQr().solve(F.leftCols(q));
}

inline Connection connection_coeffs(const ImmersionChart& c, const std::function<Mat(const Vec&)>& frame,
                                    const Vec& u) {
    c.check_domain(u);
    const Mat F = frame(u);
    const Mat J = chart_jacobian(c, u);
    const Mat dirs = frame_directions(J, F, c.q);
    const auto dF = frame_partials(c, frame, u);
    Connection G(c.q, c.n);
    for (int j = 1; j <= c.q; ++j) {
        Mat D = Mat::Zero(F.rows(), F.cols());
        for (int m = 0; m < c.q; ++m) D += dirs(m, j - 1) * dF[m];
        // Columns of F are tangent to the sphere, so the projection drops out.
        const Mat C = F.transpose() * D;  // C(l, k) = <D frame_k, frame_l>
        for (int k = 1; k <= c.n; ++k)
            for (int l = 1; l <= c.n; ++l) G(j, k, l) = C(l - 1, k - 1);
    }
    return G;
}

inline Connection connection_coeffs(const ImmersionChart& c, const Vec& u) {
    return connection_coeffs(c, [&c](const Vec& v) { return chart_frame(c, v); }, u);
}

inline std::vector<Mat> second_fundamental_form(const Connection& G) {
    std::vector<Mat> A;
    for (int k = G.q + 1; k <= G.n; ++k) {
        Mat Ak(G.q, G.q);
        for (int i = 1; i <= G.q; ++i)
            for (int j = 1; j <= G.q; ++j) Ak(i - 1, j - 1) = G(i, k, j);
        A.push_back(Ak);
    }
    return A;
}

inline AdaptedFramePoint adapted_frame(const ImmersionChart& c, const Vec& u) {
    c.check_domain(u);
    AdaptedFramePoint p;
    p.q = c.q;
    p.n = c.n;
    p.u = u;
    p.x = c.map(u);
    p.F = chart_frame(c, u);
    p.J = chart_jacobian(c, u);
    p.dirs = frame_directions(p.J, p.F, c.q);
    p.gamma = connection_coeffs(c, u);
    p.A = second_fundamental_form(p.gamma);
    return p;
}

// Orthonormality, tangency and Jacobian-span residual of the frame at a point.
inline double frame_defect(const AdaptedFramePoint& p) {
    double d = (p.F.transpose() * p.F - Mat::Identity(p.n, p.n)).cwiseAbs().maxCoeff();
    d = std::max(d, (p.F.transpose() * p.x).cwiseAbs().maxCoeff());
    d = std::max(d, std::abs(p.x.norm() - 1.0));
    const Mat T = p.F.leftCols(p.q);
    d = std::max(d, (p.J - T * (T.transpose() * p.J)).cwiseAbs().maxCoeff() / std::max(1.0, p.J.norm()));
    return d;
}

inline double connection_antisymmetry(const Connection& G) {
    double d = 0;
    for (int j = 1; j <= G.q; ++j)
        for (int k = 1; k <= G.n; ++k)
            for (int l = 1; l <= G.n; ++l) d = std::max(d, std::abs(G(j, k, l) + G(j, l, k)));
    return d;
}

inline double symmetry_defect(const std::vector<Mat>& A) {
    double d = 0;
    for (const auto& Ak : A) d = std::max(d, (Ak - Ak.transpose()).cwiseAbs().maxCoeff());
    return d;
}

// Frame field obtained by discrete parallel transport of the chart frame at u0
// along straight chart segments, projecting the tangent and normal blocks onto
// the current spans and re-orthonormalizing at every step.
inline std::function<Mat(const Vec&)> transported_frame(const ImmersionChart& c, const Vec& u0) {
    const Mat F0 = chart_frame(c, u0);
    return [c, u0, F0](const Vec& u) {
        const int q = c.q, m = c.n - c.q;
        const double arc = (u - u0).norm();
        const int steps = std::max(1, static_cast<int>(std::ceil(64.0 * arc)));
        Mat T = F0.leftCols(q), N = F0.rightCols(m);
        for (int s = 1; s <= steps; ++s) {
            const Vec us = u0 + (static_cast<double>(s) / steps) * (u - u0);
            const Mat Fs = chart_frame(c, us);
            const Mat Ts = Fs.leftCols(q), Ns = Fs.rightCols(m);
            T = polar(Ts * (Ts.transpose() * T));
            if (m > 0) N = polar(Ns * (Ns.transpose() * N));
        }
        Mat F(F0.rows(), c.n);
        F.leftCols(q) = T;
        if (m > 0) F.rightCols(m) = N;
        return F;
    };
}

// Copy of the chart whose frame field is normal at u0.
inline ImmersionChart normal_frame_chart(const ImmersionChart& c, const Vec& u0) {
    c.check_domain(u0);
    ImmersionChart out = c;
    out.name = c.name + "@normal";
    out.frame = transported_frame(c, u0);
    return out;
}

// Copy of a (2,4) chart with (e_1, e_2) rotated by alpha(u) and (nu_3, nu_4) by beta(u).
inline ImmersionChart rotated_frame_chart(const ImmersionChart& c, std::function<double(const Vec&)> alpha,
                                          std::function<double(const Vec&)> beta) {
    if (c.q != 2 || c.n != 4) throw dimension_error("rotated_frame_chart: needs q = 2, n = 4");
    ImmersionChart out = c;
    out.name = c.name + "@rotated";
    out.frame = [c, alpha, beta](const Vec& u) {
        const Mat F = chart_frame(c, u);
        const double a = alpha(u), b = beta(u);
        Mat R = Mat::Zero(4, 4);
        R(0, 0) = std::cos(a), R(1, 0) = std::sin(a), R(0, 1) = -std::sin(a), R(1, 1) = std::cos(a);
        R(2, 2) = std::cos(b), R(3, 2) = std::sin(b), R(2, 3) = -std::sin(b), R(3, 3) = std::cos(b);
        return Mat(F * R);
    };
    return out;
}

// ---------------------------------------------------------------------------
// Classification

struct Classification {
    double trace = 0;        // max_k |Tr A^k|
    double austere = 0;      // max eigenvalue pairing defect over sampled normals
    double superminimal_pos = std::numeric_limits<double>::quiet_NaN();
    double superminimal_neg = std::numeric_limits<double>::quiet_NaN();
    double tol = 0;
    bool minimal = false;
    bool austere_ok = false;
    bool positive = false;
    bool negative = false;
};

inline Eigen::Matrix2d j_tangent() {
    Eigen::Matrix2d J;
    J << 0, -1, 1, 0;
    return J;
}

// Unit normals used by the austere and superminimal tests, as coefficient vectors.
inline std::vector<Vec> sampled_normals(int m, int per_circle = 16) {
    std::vector<Vec> out;
    if (m == 1) return {Vec::Ones(1)};
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            for (int s = 0; s < per_circle; ++s) {
                const double th = 2 * M_PI * s / per_circle;
                Vec v = Vec::Zero(m);
                v[a] = std::cos(th);
                v[b] = std::sin(th);
                out.push_back(v);
            }
    return out;
}

inline Mat shape_operator(const std::vector<Mat>& A, const Vec& nu) {
    Mat S = Mat::Zero(A[0].rows(), A[0].cols());
    for (size_t k = 0; k < A.size(); ++k) S += nu[k] * A[k];
    return S;
}

inline Classification classify(const std::vector<Mat>& A, double tol = 1e-6) {
    Classification c;
    if (A.empty()) {
        c.minimal = c.austere_ok = true;
        return c;
    }
    const int q = static_cast<int>(A[0].rows());
    const int m = static_cast<int>(A.size());
    double scale = 0;
    for (const auto& Ak : A) {
        c.trace = std::max(c.trace, std::abs(Ak.trace()));
        scale = std::max(scale, Ak.norm());
    }
    c.tol = tol * (1.0 + scale);
    for (const auto& nu : sampled_normals(m)) {
        const Mat S = shape_operator(A, nu);
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (S + S.transpose()));
        const Vec ev = es.eigenvalues();  // ascending
        for (int i = 0; i < q; ++i) c.austere = std::max(c.austere, std::abs(ev[i] + ev[q - 1 - i]));
    }
    c.minimal = c.trace < c.tol;
    c.austere_ok = c.austere < c.tol;
    if (q == 2 && m == 2) {
        const Eigen::Matrix2d Jt = j_tangent();
        double pos = 0, neg = 0;
        for (const auto& nu : sampled_normals(2)) {
            Vec jnu(2);
            jnu << -nu[1], nu[0];
            const Mat An = shape_operator(A, nu), Aj = shape_operator(A, jnu);
            pos = std::max(pos, (Aj - Jt * An).norm());
            neg = std::max(neg, (Aj + Jt * An).norm());
        }
        c.superminimal_pos = pos;
        c.superminimal_neg = neg;
        c.positive = pos < c.tol;
        c.negative = neg < c.tol;
    }
    return c;
}

// Uniform chart points inside the sampling box.
template <class Rng>
Vec sample_point(const ImmersionChart& c, Rng& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    Vec u(c.q);
    for (int i = 0; i < c.q; ++i) u[i] = c.sample_lo[i] + U(rng) * (c.sample_hi[i] - c.sample_lo[i]);
    return u;
}

}  // namespace calib
