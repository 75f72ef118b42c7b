#pragma once

// Worked examples on S^4: the equatorial S^2, the Veronese surface in two
// overlapping charts, holomorphic section families, golden connection tables
// and the overlap transformation identities.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "calib/errors.hpp"
#include "calib/submanifold.hpp"

namespace calib {

using cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Ambient bivector a ^ b as an antisymmetric matrix.
inline Mat bivector(const Vec& a, const Vec& b) { return a * b.transpose() - b * a.transpose(); }

// ---------------------------------------------------------------------------
// Equatorial sphere via inverse stereographic projection.

inline ImmersionChart equatorial_chart(int q = 2, int n = 4) {
    if (q < 1 || q >= n) throw dimension_error("equatorial_chart: needs 1 <= q < n");
    ImmersionChart c;
    c.name = "equatorial";
    c.q = q;
    c.n = n;
    c.lo = Vec::Constant(q, -kInf);
    c.hi = Vec::Constant(q, kInf);
    c.sample_lo = Vec::Constant(q, -2.0);
    c.sample_hi = Vec::Constant(q, 2.0);
    c.map = [n, q](const Vec& u) {
        const double s = u.squaredNorm();
        Vec x = Vec::Zero(n + 1);
        x[0] = (s - 1) / (s + 1);
        x.segment(1, q) = 2 * u / (s + 1);
        return x;
    };
    c.jacobian = [n, q](const Vec& u) {
        const double s = u.squaredNorm(), d = (s + 1) * (s + 1);
        Mat J = Mat::Zero(n + 1, q);
        J.row(0) = 4 * u.transpose() / d;
        J.block(1, 0, q, q) = 2 * Mat::Identity(q, q) / (s + 1) - 4 * u * u.transpose() / d;
        return J;
    };
    c.exhaust = [q](double rho, double angle) {
        Vec u = Vec::Zero(q);
        u[0] = std::cos(angle) / rho;
        if (q > 1) u[1] = std::sin(angle) / rho;
        return u;
    };
    if (q == 2 && n == 4) {
        c.frame = [](const Vec& u) {
            const double u1 = u[0], u2 = u[1], s = u.squaredNorm() + 1;
            Mat F = Mat::Zero(5, 4);
            F.col(0) << 2 * u1 / s, (1 - u1 * u1 + u2 * u2) / s, -2 * u1 * u2 / s, 0, 0;
            F.col(1) << 2 * u2 / s, -2 * u1 * u2 / s, (1 + u1 * u1 - u2 * u2) / s, 0, 0;
            F(3, 2) = 1.0;
            F(4, 3) = -1.0;
            return F;
        };
    }
    return c;
}

// ---------------------------------------------------------------------------
// Veronese surface S^2(sqrt 3) -> S^4.

inline Vec veronese_map(const Eigen::Vector3d& p) {
    const double x = p[0], y = p[1], z = p[2], r3 = std::sqrt(3.0);
    Vec v(5);
    v << x * y, x * z, y * z, (x * x - y * y) / 2, (x * x + y * y - 2 * z * z) / (2 * r3);
    return v / r3;
}

inline Eigen::Vector3d veronese_point(double phi, double theta) {
    const double r3 = std::sqrt(3.0);
    return r3 * Eigen::Vector3d(std::sin(phi) * std::cos(theta), std::sin(phi) * std::sin(theta), std::cos(phi));
}

inline Eigen::Vector3d veronese_hat_point(double ph, double th) {
    const double r3 = std::sqrt(3.0);
    return r3 * Eigen::Vector3d(std::sin(ph) * std::sin(th), std::cos(ph), std::sin(ph) * std::cos(th));
}

namespace detail {

inline Vec unit5(int k) { return Vec::Unit(5, k - 1); }

inline ImmersionChart veronese_base(const std::string& name, double theta_lo) {
    ImmersionChart c;
    c.name = name;
    c.q = 2;
    c.n = 4;
    c.lo = Vec(2);
    c.hi = Vec(2);
    c.lo << 0.0, theta_lo;
    c.hi << M_PI, theta_lo + 2 * M_PI;
    c.sample_lo = Vec(2);
    c.sample_hi = Vec(2);
    c.sample_lo << 0.15, theta_lo + 0.05;
    c.sample_hi << M_PI - 0.15, theta_lo + 2 * M_PI - 0.05;
    c.exhaust = [theta_lo](double rho, double angle) {
        Vec u(2);
        const double th = theta_lo + 0.05 + std::fmod(std::abs(angle), 2 * M_PI - 0.1);
        u << (angle < 0 ? M_PI - rho : rho), th;
        return u;
    };
    return c;
}

}  // namespace detail

inline ImmersionChart veronese_chart() {
    ImmersionChart c = detail::veronese_base("veronese", 0.0);
    c.map = [](const Vec& u) { return veronese_map(veronese_point(u[0], u[1])); };
    c.frame = [](const Vec& u) {
        using detail::unit5;
        const double ph = u[0], th = u[1], r3 = std::sqrt(3.0);
        const Vec Y1 = std::sin(2 * th) * unit5(1) + std::cos(2 * th) * unit5(4);
        const Vec Y2 = std::cos(th) * unit5(2) + std::sin(th) * unit5(3);
        const Vec Y3 = std::cos(2 * th) * unit5(1) - std::sin(2 * th) * unit5(4);
        const Vec Y4 = -std::sin(th) * unit5(2) + std::cos(th) * unit5(3);
        const double s = std::sin(ph), co = std::cos(ph);
        Mat F(5, 4);
        F.col(0) = 0.5 * std::sin(2 * ph) * Y1 + std::cos(2 * ph) * Y2 + (r3 / 2) * std::sin(2 * ph) * unit5(5);
        F.col(1) = s * Y3 + co * Y4;
        F.col(2) = -co * Y3 + s * Y4;
        F.col(3) = 0.5 * ((1 + co * co) * Y1 - std::sin(2 * ph) * Y2 - r3 * s * s * unit5(5));
        return F;
    };
    return c;
}

inline ImmersionChart veronese_hat_chart() {
    ImmersionChart c = detail::veronese_base("veronese-hat", -M_PI / 2);
    c.map = [](const Vec& u) { return veronese_map(veronese_hat_point(u[0], u[1])); };
    c.frame = [](const Vec& u) {
        using detail::unit5;
        const double ph = u[0], th = u[1], r3 = std::sqrt(3.0);
        const double st = std::sin(th), ct = std::cos(th);
        const Vec W = -(r3 / 2) * unit5(4) + 0.5 * unit5(5);
        const Vec Y1 = st * unit5(1) + ct * unit5(3);
        const Vec Y2 = r3 * st * ct * unit5(2) + (r3 / 2) * st * st * unit5(4) + 0.5 * (1 - 3 * ct * ct) * unit5(5);
        const Vec Y3 = ct * unit5(1) - st * unit5(3);
        const Vec Y4 = std::cos(2 * th) * unit5(2) + 0.5 * std::sin(2 * th) * unit5(4) +
                       (r3 / 2) * std::sin(2 * th) * unit5(5);
        const double s = std::sin(ph), co = std::cos(ph);
        Mat F(5, 4);
        F.col(0) = std::cos(2 * ph) * Y1 + std::sin(2 * ph) / r3 * Y2 - std::sin(2 * ph) / r3 * W;
        F.col(1) = co * Y3 + s * Y4;
        F.col(2) = s * Y3 - co * Y4;
        F.col(3) = -s * co * Y1 + (1 + co * co) / r3 * Y2 + (1 + s * s) / r3 * W;
        return F;
    };
    return c;
}

// Composition with the antipodal map x -> -x. The frame (-e1, -e2, -nu3, nu4)
// keeps the determinant sign of [x, frame] and reverses the induced
// orientation of L.
inline ImmersionChart antipodal_chart(const ImmersionChart& c) {
    if (c.q != 2 || c.n != 4) throw dimension_error("antipodal_chart: needs q = 2, n = 4");
    ImmersionChart out = c;
    out.name = c.name + "-antipodal";
    out.map = [c](const Vec& u) { return Vec(-c.map(u)); };
    if (c.jacobian) out.jacobian = [c](const Vec& u) { return Mat(-c.jacobian(u)); };
    out.frame = [c](const Vec& u) {
        Mat F = chart_frame(c, u);
        F.leftCols(3) *= -1.0;
        return F;
    };
    return out;
}

// Radial projection of a quadratic graph over the tangent plane at the south
// pole; generic (neither minimal nor superminimal) and carries no frame field.
inline ImmersionChart graph_chart(double c11 = 0.6, double c12 = 0.25, double c22 = -0.3, double d11 = 0.2,
                                  double d22 = 0.45) {
    ImmersionChart c;
    c.name = "graph";
    c.q = 2;
    c.n = 4;
    c.lo = Vec::Constant(2, -1.0);
    c.hi = Vec::Constant(2, 1.0);
    c.sample_lo = Vec::Constant(2, -0.6);
    c.sample_hi = Vec::Constant(2, 0.6);
    c.map = [=](const Vec& u) {
        Vec p(5);
        p << -1.0, u[0], u[1], c11 * u[0] * u[0] + 2 * c12 * u[0] * u[1] + c22 * u[1] * u[1],
            d11 * u[0] * u[0] + d22 * u[1] * u[1] + 0.3 * u[0] * u[0] * u[1];
        return Vec(p.normalized());
    };
    return c;
}

inline ImmersionChart chart_by_name(const std::string& name) {
    if (name == "graph") return graph_chart();
    if (name == "equatorial") return equatorial_chart();
    if (name == "veronese") return veronese_chart();
    if (name == "veronese-hat") return veronese_hat_chart();
    if (name == "veronese-antipodal") return antipodal_chart(veronese_chart());
    throw config_error("unknown chart: " + name);
}

inline std::vector<std::string> chart_names() {
    return {"equatorial", "veronese", "veronese-hat", "veronese-antipodal", "graph"};
}

// Plain Veronese coordinates (phi, theta) to hatted ones, and back.
inline Vec veronese_to_hat(const Vec& u) {
    const double s = std::sin(u[0]);
    double th = std::atan2(s * std::cos(u[1]), std::cos(u[0]));
    if (th < -M_PI / 2) th += 2 * M_PI;
    Vec h(2);
    h << std::acos(std::clamp(s * std::sin(u[1]), -1.0, 1.0)), th;
    return h;
}

inline Vec hat_to_veronese(const Vec& h) {
    double th = std::atan2(std::cos(h[0]), std::sin(h[0]) * std::sin(h[1]));
    if (th < 0) th += 2 * M_PI;
    Vec u(2);
    u << std::acos(std::clamp(std::sin(h[0]) * std::cos(h[1]), -1.0, 1.0)), th;
    return u;
}

// ---------------------------------------------------------------------------
// Section families G = a + i b.

struct SectionFamily {
    enum class Kind { equatorial_G, veronese_G, constant };

    Kind kind = Kind::constant;
    std::vector<cplx> coeffs;  // H = sum coeffs[m] z^powers[m] or sum coeffs[m] exp(i powers[m] w)
    std::vector<double> powers;
    cplx value0{0.0, 0.0};     // constant kind

    static SectionFamily zero() { return {}; }
    static SectionFamily constant_value(cplx c) {
        SectionFamily s;
        s.value0 = c;
        return s;
    }
    static SectionFamily equatorial(std::vector<cplx> c, std::vector<double> k) {
        SectionFamily s;
        s.kind = Kind::equatorial_G;
        s.coeffs = std::move(c);
        s.powers = std::move(k);
        return s;
    }
    static SectionFamily veronese(std::vector<cplx> c, std::vector<double> k) {
        SectionFamily s;
        s.kind = Kind::veronese_G;
        s.coeffs = std::move(c);
        s.powers = std::move(k);
        return s;
    }
    // sigma = C sin(phi) f^2 + D sin(phi) f^3
    static SectionFamily sinphi(double C, double D) { return veronese({cplx(C, D)}, {0.0}); }

    // H and H' at the chart-dependent complex variable.
    std::pair<cplx, cplx> holo(cplx w) const {
        cplx H = 0, dH = 0;
        const cplx I(0, 1);
        for (size_t m = 0; m < coeffs.size(); ++m) {
            const double k = powers[m];
            if (kind == Kind::equatorial_G) {
                H += coeffs[m] * std::pow(w, k);
                if (k != 0.0) dH += coeffs[m] * k * std::pow(w, k - 1);
            } else {
                const cplx e = std::exp(I * k * w);
                H += coeffs[m] * e;
                dH += coeffs[m] * I * k * e;
            }
        }
        return {H, dH};
    }

    cplx value(const Vec& u) const {
        switch (kind) {
            case Kind::constant:
                return value0;
            case Kind::equatorial_G: {
                const cplx z(u[0], u[1]);
                return holo(z).first * (u.squaredNorm() + 1);
            }
            case Kind::veronese_G: {
                const cplx w(u[1], -std::log(std::tan(u[0] / 2)));
                return std::sin(u[0]) * holo(w).first;
            }
        }
        return 0;
    }

    // Chart partials (dG/du1, dG/du2).
    std::array<cplx, 2> partials(const Vec& u) const {
        const cplx I(0, 1);
        switch (kind) {
            case Kind::constant:
                return {cplx(0), cplx(0)};
            case Kind::equatorial_G: {
                const cplx z(u[0], u[1]);
                const auto [H, dH] = holo(z);
                const double s1 = u.squaredNorm() + 1;
                return {dH * s1 + 2 * u[0] * H, I * dH * s1 + 2 * u[1] * H};
            }
            case Kind::veronese_G: {
                const cplx w(u[1], -std::log(std::tan(u[0] / 2)));
                const auto [H, dH] = holo(w);
                return {std::cos(u[0]) * H - I * dH, std::sin(u[0]) * dH};
            }
        }
        return {cplx(0), cplx(0)};
    }
};

// Section value and frame derivatives G_i = dG(e_i).
struct SectionJet {
    cplx G{0, 0};
    cplx G1{0, 0}, G2{0, 0};
};

inline SectionJet section_jet(const std::function<cplx(const Vec&)>& value,
                              const std::function<std::array<cplx, 2>(const Vec&)>& partials, const Mat& dirs,
                              const Vec& u) {
    const auto d = partials(u);
    SectionJet j;
    j.G = value(u);
    j.G1 = dirs(0, 0) * d[0] + dirs(1, 0) * d[1];
    j.G2 = dirs(0, 1) * d[0] + dirs(1, 1) * d[1];
    return j;
}

inline SectionJet section_jet(const SectionFamily& s, const AdaptedFramePoint& p) {
    return section_jet([&s](const Vec& v) { return s.value(v); }, [&s](const Vec& v) { return s.partials(v); },
                       p.dirs, p.u);
}

// Five-point chart partials of an arbitrary complex function.
inline std::array<cplx, 2> complex_partials_fd(const std::function<cplx(const Vec&)>& G, const Vec& u,
                                               double h = 1e-3) {
    std::array<cplx, 2> out;
    for (int m = 0; m < 2; ++m) {
        Vec d = Vec::Zero(2);
        d[m] = h;
        out[m] = (-G(u + 2 * d) + 8.0 * G(u + d) - 8.0 * G(u - d) + G(u - 2 * d)) / (12 * h);
    }
    return out;
}

// G1 + i G2 - [(Gamma^1_22 - Gamma^3_24) + i (Gamma^3_14 - Gamma^1_12)] G.
inline cplx pde_residual(const SectionJet& j, const Connection& g) {
    const cplx I(0, 1);
    const cplx coef = (g(2, 2, 1) - g(2, 4, 3)) + I * (g(1, 4, 3) - g(1, 2, 1));
    return j.G1 + I * j.G2 - coef * j.G;
}

inline cplx pde_residual(const SectionFamily& s, const ImmersionChart& c, const Vec& u) {
    const AdaptedFramePoint p = adapted_frame(c, u);
    return pde_residual(section_jet(s, p), p.gamma);
}

struct BoundednessScan {
    double sup_abs = 0;      // sup |G|
    double sup_two_sq = 0;   // sup 2|G|^2
    double log_slope = 0;    // growth rate of sup 2|G|^2 against log(1/rho) on the last shells
    bool growth = false;
};

// Dense interior grid plus shells rho_k = 2^-k approaching the excluded set.
inline BoundednessScan boundedness_scan(const SectionFamily& s, const ImmersionChart& c, int grid = 41,
                                        int shells = 12, int per_shell = 16) {
    BoundednessScan r;
    auto visit = [&](const Vec& u) {
        const double a = std::abs(s.value(u));
        r.sup_abs = std::max(r.sup_abs, a);
        r.sup_two_sq = std::max(r.sup_two_sq, 2 * a * a);
    };
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            Vec u(2);
            u << c.sample_lo[0] + (c.sample_hi[0] - c.sample_lo[0]) * i / (grid - 1),
                c.sample_lo[1] + (c.sample_hi[1] - c.sample_lo[1]) * j / (grid - 1);
            visit(u);
        }
    if (!c.exhaust) return r;
    std::vector<double> lr, ls;
    for (int k = 1; k <= shells; ++k) {
        const double rho = std::ldexp(1.0, -k);
        double sup = 0;
        for (int m = 0; m < per_shell; ++m) {
            for (double sign : {1.0, -1.0}) {
                const Vec u = c.exhaust(rho, sign * (0.1 + 2 * M_PI * m / per_shell));
                if (!c.inside(u)) continue;
                const double a = std::abs(s.value(u));
                sup = std::max(sup, 2 * a * a);
                visit(u);
            }
        }
        lr.push_back(std::log(1.0 / rho));
        ls.push_back(std::log(std::max(sup, 1e-300)));
    }
    const size_t n = lr.size();
    if (n >= 3) {
        r.log_slope = (ls[n - 1] - ls[n - 3]) / (lr[n - 1] - lr[n - 3]);
        r.growth = r.log_slope > 0.5;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Overlap identities between the plain and hatted Veronese charts.

struct FrameChangeReport {
    double point = 0;       // |iota(u) - iota_hat(u_hat)|
    double sin_phi = 0;     // sin(phi) against sqrt(1 - sin^2 phi_hat cos^2 theta_hat)
    double tangent = 0;     // sin(phi) e_i identities
    double normal = 0;      // sin^2(phi) nu_k identities
    double two_forms = 0;   // sin^3(phi) f^2, f^3 identities
    double hat_pde = 0;     // hatted holomorphicity residual of the transformed section
    double max() const { return std::max({point, sin_phi, tangent, normal, two_forms, hat_pde}); }
};

inline bool in_overlap(const Vec& u) {
    const ImmersionChart v = veronese_chart(), h = veronese_hat_chart();
    return v.inside(u) && h.inside(veronese_to_hat(u));
}

// u in plain Veronese coordinates; the section is sigma = C sin(phi) f^2 + D sin(phi) f^3.
inline FrameChangeReport frame_change_check(const Vec& u, double C = 1.0, double D = 0.0) {
    const ImmersionChart vc = veronese_chart(), hc = veronese_hat_chart();
    const Vec uh = veronese_to_hat(u);
    if (!vc.inside(u) || !hc.inside(uh)) throw domain_error("frame_change_check: point outside the chart overlap");
    FrameChangeReport r;
    const Mat F = chart_frame(vc, u), Fh = chart_frame(hc, uh);
    r.point = (vc.map(u) - hc.map(uh)).norm();
    const double sp = std::sin(u[0]);
    const double sph = std::sin(uh[0]), cph = std::cos(uh[0]), sth = std::sin(uh[1]), cth = std::cos(uh[1]);
    r.sin_phi = std::abs(sp - std::sqrt(1 - sph * sph * cth * cth));

    const double cc = cph * cth;
    r.tangent = std::max((sp * F.col(0) - (-cc * Fh.col(0) + sth * Fh.col(1))).norm(),
                         (sp * F.col(1) - (-sth * Fh.col(0) - cc * Fh.col(1))).norm());

    const double diag = 0.25 * (-1 + 3 * std::cos(2 * uh[1]) + 2 * cth * cth * std::cos(2 * uh[0]));
    const double off = cph * std::sin(2 * uh[1]);
    const double s2 = sp * sp;
    r.normal = std::max((s2 * F.col(2) - (diag * Fh.col(2) - off * Fh.col(3))).norm(),
                        (s2 * F.col(3) - (off * Fh.col(2) + diag * Fh.col(3))).norm());

    auto f2 = [](const Mat& M) { return Mat(bivector(M.col(0), M.col(2)) - bivector(M.col(3), M.col(1))); };
    auto f3 = [](const Mat& M) { return Mat(bivector(M.col(0), M.col(3)) - bivector(M.col(1), M.col(2))); };
    const double s3 = s2 * sp;
    r.two_forms = std::max((s3 * f2(F) - s2 * (-cc * f2(Fh) + sth * f3(Fh))).norm(),
                           (s3 * f3(F) - s2 * (-sth * f2(Fh) - cc * f3(Fh))).norm());

    auto Ghat = [C, D](const Vec& h) {
        const double c2 = std::cos(h[0]) * std::cos(h[1]), st = std::sin(h[1]);
        return cplx(-C * c2 - D * st, C * st - D * c2);
    };
    const AdaptedFramePoint ph = adapted_frame(hc, uh);
    const SectionJet j = section_jet(Ghat, [&Ghat](const Vec& h) { return complex_partials_fd(Ghat, h); }, ph.dirs, uh);
    r.hat_pde = std::abs(pde_residual(j, ph.gamma));
    return r;
}

// ---------------------------------------------------------------------------
// Golden connection tables.

struct GoldenEntry {
    int j = 0, k = 0, l = 0;
    std::string expr;
    std::map<std::string, double> terms;  // basis -> coefficient
};

struct GoldenMatrix {
    int k = 0;
    std::string expr;
    Mat value;
};

struct GoldenTable {
    std::string name;
    std::string chart;
    double tolerance = 1e-6;
    bool others_zero = true;
    std::vector<GoldenEntry> gamma;
    std::vector<GoldenMatrix> A;
};

inline double golden_basis(const std::string& b, const Vec& u) {
    if (b == "1") return 1.0;
    if (b == "u1") return u[0];
    if (b == "u2") return u[1];
    if (b == "cot_phi") return 1.0 / std::tan(u[0]);
    throw config_error("golden table: unknown basis " + b);
}

inline double golden_value(const GoldenEntry& e, const Vec& u) {
    double v = 0;
    for (const auto& [b, c] : e.terms) v += c * golden_basis(b, u);
    return v;
}

inline std::vector<GoldenTable> parse_golden_tables(const nlohmann::json& doc) {
    std::vector<GoldenTable> out;
    for (const auto& t : doc.at("tables")) {
        GoldenTable g;
        g.name = t.at("name").get<std::string>();
        g.chart = t.at("chart").get<std::string>();
        g.tolerance = t.value("tolerance", 1e-6);
        g.others_zero = t.value("others_zero", true);
        if (t.contains("gamma"))
            for (const auto& e : t.at("gamma")) {
                GoldenEntry ge;
                ge.j = e.at("j");
                ge.k = e.at("k");
                ge.l = e.at("l");
                ge.expr = e.value("expr", "");
                for (const auto& term : e.at("terms")) ge.terms[term.at("basis").get<std::string>()] += term.at("coeff").get<double>();
                g.gamma.push_back(ge);
            }
        if (t.contains("A"))
            for (const auto& a : t.at("A")) {
                GoldenMatrix gm;
                gm.k = a.at("k");
                gm.expr = a.value("expr", "");
                const auto& rows = a.at("value");
                gm.value = Mat(rows.size(), rows[0].size());
                for (size_t r = 0; r < rows.size(); ++r)
                    for (size_t s = 0; s < rows[r].size(); ++s) gm.value(r, s) = rows[r][s].get<double>();
                g.A.push_back(gm);
            }
        out.push_back(std::move(g));
    }
    return out;
}

inline std::string golden_tables_path() {
#ifdef CALIB_DATA_DIR
    return std::string(CALIB_DATA_DIR) + "/golden_tables.json";
#else
    return "data/golden_tables.json";
#endif
}

inline std::vector<GoldenTable> load_golden_tables(const std::string& path = golden_tables_path()) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open golden tables: " + path);
    return parse_golden_tables(nlohmann::json::parse(in));
}

inline const GoldenTable& find_golden_table(const std::vector<GoldenTable>& tables, const std::string& name) {
    for (const auto& t : tables)
        if (t.name == name) return t;
    throw config_error("unknown golden table: " + name);
}

// Largest deviation of the frame machinery from the table at a chart point.
// Only connection coefficients along tangent directions are tabulated.
inline double golden_deviation(const GoldenTable& t, const AdaptedFramePoint& p) {
    double d = 0;
    if (!t.gamma.empty()) {
        std::vector<double> expected(p.gamma.g.size(), 0.0);
        std::vector<bool> listed(p.gamma.g.size(), false);
        for (const auto& e : t.gamma) {
            expected[p.gamma.idx(e.j, e.k, e.l)] = golden_value(e, p.u);
            listed[p.gamma.idx(e.j, e.k, e.l)] = true;
        }
        for (int j = 1; j <= p.q; ++j)
            for (int k = 1; k <= p.n; ++k)
                for (int l = 1; l <= p.n; ++l) {
                    const size_t i = p.gamma.idx(j, k, l);
                    if (listed[i] || t.others_zero) d = std::max(d, std::abs(p.gamma.g[i] - expected[i]));
                }
    }
    for (const auto& a : t.A) d = std::max(d, (p.second_fundamental(a.k) - a.value).cwiseAbs().maxCoeff());
    return d;
}

}  // namespace calib
