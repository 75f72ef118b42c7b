#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "calib/examples.hpp"
#include "calib/stenzel.hpp"

using namespace calib;

namespace {

Vec pt(double a, double b) {
    Vec u(2);
    u << a, b;
    return u;
}

// Random point of T*S^n as (x, xi) with xi orthogonal to x.
std::pair<Vec, Vec> random_cotangent(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Vec x(n + 1), xi(n + 1);
    for (int k = 0; k <= n; ++k) {
        x[k] = nd(rng);
        xi[k] = nd(rng);
    }
    x.normalize();
    xi -= x.dot(xi) * x;
    return {x, xi};
}

}  // namespace

TEST(PsiMap, ZeroFiberIsIdentity) {
    Vec x = Vec::Zero(4);
    x[2] = 1.0;
    const CVec z = psi_map(x, Vec::Zero(4));
    EXPECT_LT((z - x.cast<cplx>()).norm(), 1e-15);
}

TEST(PsiMap, GreatCircleExample) {
    for (double s : {0.1, 0.8, 2.5}) {
        Vec x = Vec::Unit(3, 0), xi = s * Vec::Unit(3, 1);
        const CVec z = psi_map(x, xi);
        EXPECT_NEAR(z[0].real(), std::cosh(s), 1e-14 * std::cosh(s));
        EXPECT_NEAR(z[1].imag(), std::sinh(s), 1e-14 * std::cosh(s));
        EXPECT_NEAR(std::cosh(s) * std::cosh(s) - std::sinh(s) * std::sinh(s), 1.0, 1e-12);
        EXPECT_LT(std::abs(quadric_defect(z)), 1e-12 * std::cosh(s) * std::cosh(s));
    }
}

TEST(PsiMap, LandsOnQuadric) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 500; ++t) {
        const auto [x, xi] = random_cotangent(4, rng);
        EXPECT_LT(std::abs(quadric_defect(psi_map(x, xi))), 1e-12 * std::cosh(2 * xi.norm()));
    }
}

TEST(PsiMap, RejectsNonOrthogonalFiber) {
    EXPECT_THROW(psi_map(Vec::Unit(3, 0), Vec::Unit(3, 0)), domain_error);
}

TEST(StenzelCoeffs, Hermitian) {
    std::mt19937_64 rng(2);
    const StenzelProfile prof;
    for (int t = 0; t < 200; ++t) {
        const auto [x, xi] = random_cotangent(4, rng);
        const CVec z = psi_map(x, xi);
        if (std::abs(z[0]) <= 0.1) continue;
        const CMat a = stenzel_coeffs(z, prof);
        EXPECT_LT((a - a.adjoint()).norm(), 1e-10 * (1 + a.norm()));
    }
}

TEST(StenzelCoeffs, CollapsesToIdentity) {
    CVec z = CVec::Zero(5);
    z[0] = 1.0;
    const CMat a = stenzel_coeffs(z, StenzelProfile::constant(1.0, 0.0));
    EXPECT_LT((a - CMat::Identity(4, 4)).norm(), 1e-15);
}

TEST(StenzelCoeffs, RealPointReducesToFirstOrderPart) {
    // For real z the v'' term Re(z_j z_k - z_j z_k) vanishes.
    Vec x(4);
    x << 0.5, 0.5, -0.5, 0.5;
    const CMat a = stenzel_coeffs(x.cast<cplx>(), StenzelProfile::constant(2.0, 3.0));
    for (int j = 1; j <= 3; ++j)
        for (int k = 1; k <= 3; ++k) {
            const double expected = ((j == k ? 1.0 : 0.0) + x[j] * x[k] / (x[0] * x[0])) * 2.0;
            EXPECT_NEAR(a(j - 1, k - 1).real(), expected, 1e-14);
            EXPECT_NEAR(a(j - 1, k - 1).imag(), 0.0, 1e-14);
        }
}

TEST(StenzelCoeffs, ChartGuard) {
    CVec z = CVec::Zero(3);
    z[1] = 1.0;
    EXPECT_THROW(stenzel_coeffs(z, StenzelProfile()), chart_error);
}

TEST(StenzelOmega, RealAndAntisymmetric) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    const auto [x, xi] = random_cotangent(3, rng);
    const CMat a = stenzel_coeffs(psi_map(x, xi), StenzelProfile());
    for (int t = 0; t < 50; ++t) {
        CVec V(4), W(4);
        for (int k = 0; k < 4; ++k) {
            V[k] = cplx(nd(rng), nd(rng));
            W[k] = cplx(nd(rng), nd(rng));
        }
        EXPECT_NEAR(stenzel_omega(a, V, W), -stenzel_omega(a, W, V), 1e-10);
        EXPECT_NEAR(stenzel_omega(a, V, V), 0.0, 1e-10);
    }
}

TEST(Profile, PositivityCheck) {
    EXPECT_NO_THROW(StenzelProfile().require_positive());
    EXPECT_THROW(StenzelProfile::constant(1.0, -1.0).require_positive(), config_error);
}

TEST(Bracket, PositiveOnRandomInputs) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int t = 0; t < 1000; ++t) {
        const double y = 25.0 * (1.0 - U(rng));
        EXPECT_GT(stenzel_bracket(y, 0.01 + 10 * U(rng), 0.01 + 10 * U(rng)), 0.0);
    }
}

TEST(Lagrangian, ZeroTwistOnEquatorial) {
    const ImmersionChart c = equatorial_chart();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    const StenzelProfile prof;
    for (int s = 0; s < 50; ++s) {
        const Vec u = sample_point(c, rng), t = pt(U(rng), U(rng));
        const auto p = twisted_conormal_fd(c, zero_twist(5), u, t);
        const auto r = lagrangian_residual(p, prof);
        EXPECT_LT(r.all, 1e-6);
        EXPECT_LT(r.tangency, 1e-8);
        EXPECT_LT(r.quadric, 1e-10);
        EXPECT_NEAR(p.y, t.squaredNorm(), 1e-14);
    }
}

TEST(Lagrangian, ZeroTwistOnCurvedSurfaces) {
    const StenzelProfile prof;
    for (const auto& name : {"veronese", "graph"}) {
        const ImmersionChart c = chart_by_name(name);
        const auto p = twisted_conormal_fd(c, zero_twist(5), c.center(), pt(0.6, -0.9));
        EXPECT_LT(lagrangian_residual(p, prof).all, 1e-6) << name;
    }
}

TEST(Lagrangian, TwistBreaksMixedPairs) {
    const ImmersionChart c = equatorial_chart();
    const StenzelProfile prof;
    for (double lambda : {0.1, 0.3, 1.0}) {
        const auto p = twisted_conormal_fd(c, frame_twist(c, 1, lambda), pt(0.3, -0.2), pt(0.7, -0.4));
        EXPECT_NEAR(p.y, 0.65 + lambda * lambda, 1e-12);
        EXPECT_GT(lagrangian_residual(p, prof).mixed, 1e-3);
    }
}

TEST(Lagrangian, MixedResidualLinearInSmallTwist) {
    const ImmersionChart c = veronese_chart();
    const StenzelProfile prof;
    auto mixed = [&](double lambda) {
        return lagrangian_residual(twisted_conormal_fd(c, frame_twist(c, 2, lambda), pt(1.1, 2.3), pt(0.7, -0.4)), prof)
            .mixed;
    };
    const double r1 = mixed(1e-3), r2 = mixed(2e-3);
    EXPECT_NEAR(r2 / r1, 2.0, 1e-2);
}

TEST(ClosedForm, AgreesWithFiniteDifferencesAtNormalCenters) {
    const StenzelProfile prof;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> U(-1.2, 1.2);
    for (const auto& name : {"equatorial", "veronese", "graph"}) {
        const ImmersionChart c = chart_by_name(name);
        for (int s = 0; s < 4; ++s) {
            const Vec u = sample_point(c, rng), t = pt(U(rng), U(rng));
            const ImmersionChart nc = normal_frame_chart(c, u);
            const auto mu = frame_twist(c, 1 + s % 2, 0.3);
            const auto pf = twisted_conormal_fd(nc, mu, u, t), pc = twisted_conormal_closed(nc, mu, u, t);
            for (int i = 0; i < 2; ++i) {
                EXPECT_LT((pf.E[i] - pc.E[i]).norm(), 1e-5) << name;
                EXPECT_LT((pf.F[i] - pc.F[i]).norm(), 1e-5) << name;
            }
            const CMat a = stenzel_coeffs(pc.z, prof);
            const double r = pc.z.norm();
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    EXPECT_NEAR(stenzel_omega(a, pc.E[i], pc.F[j]),
                                stenzel_mixed_closed(pc.a[i], t[j], pc.y, prof.vp(r), prof.vpp(r)), 1e-5)
                        << name;
        }
    }
}
