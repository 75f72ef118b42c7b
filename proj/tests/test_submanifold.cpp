#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "calib/examples.hpp"
#include "calib/submanifold.hpp"

using namespace calib;

namespace {

const double kC = 1.0 / std::sqrt(3.0);

Vec pt(double a, double b) {
    Vec u(2);
    u << a, b;
    return u;
}

Mat m2(double a, double b, double c, double d) {
    Mat m(2, 2);
    m << a, b, c, d;
    return m;
}

}  // namespace

TEST(Chart, ImageOnUnitSphere) {
    std::mt19937_64 rng(1);
    for (const auto& name : chart_names()) {
        const ImmersionChart c = chart_by_name(name);
        for (int s = 0; s < 50; ++s) EXPECT_NEAR(c.map(sample_point(c, rng)).norm(), 1.0, 1e-12) << name;
    }
}

TEST(Chart, DomainGuards) {
    const ImmersionChart v = veronese_chart();
    EXPECT_THROW(adapted_frame(v, pt(0.0, 1.0)), domain_error);
    EXPECT_THROW(adapted_frame(v, pt(1e-6, 1.0)), domain_error);
    EXPECT_THROW(adapted_frame(v, Vec::Zero(3)), dimension_error);
    EXPECT_NO_THROW(adapted_frame(v, pt(0.5, 1.0)));
}

TEST(Chart, DegenerateImmersionRejected) {
    ImmersionChart c = equatorial_chart();
    c.name = "collapsed";
    c.jacobian = nullptr;
    c.frame = nullptr;
    c.map = [](const Vec& u) {
        Vec x = Vec::Zero(5);
        x[0] = std::cos(u[0] + u[1]);
        x[1] = std::sin(u[0] + u[1]);
        return x;
    };
    EXPECT_THROW(adapted_frame(c, pt(0.2, 0.3)), immersion_error);
}

TEST(Frame, OrthonormalOrientedAndAntisymmetric) {
    std::mt19937_64 rng(2);
    for (const auto& name : chart_names()) {
        const ImmersionChart c = chart_by_name(name);
        for (int s = 0; s < 10; ++s) {
            const AdaptedFramePoint p = adapted_frame(c, sample_point(c, rng));
            EXPECT_LT((p.F.transpose() * p.F - Mat::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-10) << name;
            EXPECT_LT(frame_defect(p), 1e-8) << name;
            EXPECT_GT(frame_orientation(p.x, p.F), 0.0) << name;
            EXPECT_LT(connection_antisymmetry(p.gamma), 1e-8) << name;
            EXPECT_LT(symmetry_defect(p.A), 1e-6) << name;
        }
    }
}

TEST(Equatorial, ConnectionTable) {
    const ImmersionChart c = equatorial_chart();
    const Vec u = pt(0.3, -0.2);
    const AdaptedFramePoint p = adapted_frame(c, u);
    // Gamma^2_11 = -Gamma^1_12 = u2, Gamma^1_22 = -Gamma^2_21 = u1.
    EXPECT_NEAR(p.gamma(1, 1, 2), -0.2, 1e-7);
    EXPECT_NEAR(p.gamma(1, 2, 1), 0.2, 1e-7);
    EXPECT_NEAR(p.gamma(2, 2, 1), 0.3, 1e-7);
    EXPECT_NEAR(p.gamma(2, 1, 2), -0.3, 1e-7);
    for (int j = 1; j <= 2; ++j)
        for (int k = 1; k <= 2; ++k)
            EXPECT_NEAR(p.gamma(j, k, k), 0.0, 1e-7);
    for (const auto& A : p.A) EXPECT_LT(A.cwiseAbs().maxCoeff(), 1e-7);
}

TEST(Veronese, SecondFundamentalForm) {
    const AdaptedFramePoint p = adapted_frame(veronese_chart(), pt(1.0, 0.7));
    EXPECT_LT((p.second_fundamental(3) - kC * m2(0, 1, 1, 0)).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_LT((p.second_fundamental(4) - kC * m2(-1, 0, 0, 1)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Veronese, ConnectionRelations) {
    std::mt19937_64 rng(3);
    const ImmersionChart c = veronese_chart();
    for (int s = 0; s < 20; ++s) {
        const Vec u = sample_point(c, rng);
        const AdaptedFramePoint p = adapted_frame(c, u);
        const double cot = 1.0 / std::tan(u[0]);
        EXPECT_NEAR(p.gamma(1, 1, 4), kC, 1e-6);
        EXPECT_NEAR(p.gamma(1, 2, 3), -kC, 1e-6);
        EXPECT_NEAR(p.gamma(1, 3, 2), kC, 1e-6);
        EXPECT_NEAR(p.gamma(1, 4, 1), -kC, 1e-6);
        EXPECT_NEAR(2 * p.gamma(2, 1, 2), 2 * cot * kC, 1e-6);
        EXPECT_NEAR(-2 * p.gamma(2, 2, 1), 2 * cot * kC, 1e-6);
        EXPECT_NEAR(p.gamma(2, 3, 4), 2 * cot * kC, 1e-6);
        EXPECT_NEAR(-p.gamma(2, 4, 3), 2 * cot * kC, 1e-6);
    }
}

TEST(Classify, Examples) {
    const Classification eq = classify(adapted_frame(equatorial_chart(), pt(0.3, -0.2)).A);
    EXPECT_TRUE(eq.minimal && eq.austere_ok && eq.positive && eq.negative);
    const Classification ve = classify(adapted_frame(veronese_chart(), pt(1.0, 0.7)).A);
    EXPECT_TRUE(ve.minimal && ve.positive);
    EXPECT_FALSE(ve.negative);
    const Classification sy = classify({m2(1, 0, 0, -1), m2(0, 0, 0, 0)});
    EXPECT_TRUE(sy.minimal && sy.austere_ok);
    EXPECT_FALSE(sy.positive);
    EXPECT_FALSE(sy.negative);
    EXPECT_GT(sy.superminimal_pos, 0.5);
    EXPECT_GT(sy.superminimal_neg, 0.5);
    const Classification gr = classify(adapted_frame(graph_chart(), pt(0.1, 0.2)).A);
    EXPECT_FALSE(gr.minimal);
}

TEST(Classify, AustereNeedsPairedEigenvalues) {
    // Traceless in every normal direction yet not austere is impossible for q = 2,
    // so use q = 3: eigenvalues (1, 1, -2) are traceless but unpaired.
    Mat A(3, 3);
    A << 1, 0, 0, 0, 1, 0, 0, 0, -2;
    const Classification c = classify({A});
    EXPECT_TRUE(c.minimal);
    EXPECT_FALSE(c.austere_ok);
    Mat B(3, 3);
    B << 1, 0, 0, 0, -1, 0, 0, 0, 0;
    EXPECT_TRUE(classify({B}).austere_ok);
}

TEST(Classify, AntipodalVeroneseIsNegative) {
    const Classification c = classify(adapted_frame(antipodal_chart(veronese_chart()), pt(1.2, 2.0)).A);
    EXPECT_TRUE(c.minimal);
    EXPECT_TRUE(c.negative);
    EXPECT_FALSE(c.positive);
}

TEST(NormalFrame, CenterIdentity) {
    for (const auto& name : {"veronese", "graph"}) {
        const ImmersionChart base = chart_by_name(name);
        const Vec u0 = base.center() + pt(0.05, -0.03);
        const ImmersionChart nc = normal_frame_chart(base, u0);
        const AdaptedFramePoint p = adapted_frame(nc, u0);
        const AdaptedFramePoint g = adapted_frame(base, u0);
        for (int i = 1; i <= 2; ++i) {
            // Tangential and normal-normal connection coefficients vanish at the center, so
            // nabla_{e_i} nu_k has only the A^k_{ij} e_j components.
            EXPECT_LT(std::abs(p.gamma(i, 1, 2)), 1e-5) << name;
            EXPECT_LT(std::abs(p.gamma(i, 3, 4)), 1e-5) << name;
        }
        // A is tensorial: the transported frame agrees with the chart frame at u0.
        for (int k = 3; k <= 4; ++k)
            EXPECT_LT((p.second_fundamental(k) - g.second_fundamental(k)).cwiseAbs().maxCoeff(), 1e-6) << name;
    }
}

TEST(FrameCovariance, RotationsTransformTensorially) {
    std::mt19937_64 rng(4);
    for (const auto& name : {"veronese", "graph", "equatorial"}) {
        const ImmersionChart base = chart_by_name(name);
        auto alpha = [](const Vec& u) { return 0.4 + 0.3 * u[0] - 0.2 * u[1]; };
        auto beta = [](const Vec& u) { return -1.1 + 0.5 * u[1] * u[0]; };
        const ImmersionChart rot = rotated_frame_chart(base, alpha, beta);
        for (int s = 0; s < 5; ++s) {
            const Vec u = sample_point(base, rng);
            const AdaptedFramePoint p = adapted_frame(base, u), r = adapted_frame(rot, u);
            const double a = alpha(u), b = beta(u);
            const Mat Ra = m2(std::cos(a), -std::sin(a), std::sin(a), std::cos(a));
            const Mat Rb = m2(std::cos(b), -std::sin(b), std::sin(b), std::cos(b));
            for (int kp = 0; kp < 2; ++kp) {
                Mat expected = Mat::Zero(2, 2);
                for (int k = 0; k < 2; ++k) expected += Rb(k, kp) * Ra.transpose() * p.A[k] * Ra;
                EXPECT_LT((r.A[kp] - expected).cwiseAbs().maxCoeff(), 1e-6) << name;
            }
            const Classification c1 = classify(p.A), c2 = classify(r.A);
            EXPECT_EQ(c1.minimal, c2.minimal);
            EXPECT_EQ(c1.austere_ok, c2.austere_ok);
            EXPECT_EQ(c1.positive, c2.positive);
            EXPECT_EQ(c1.negative, c2.negative);
        }
    }
}

TEST(Jacobian, AnalyticMatchesFiniteDifferences) {
    const ImmersionChart c = equatorial_chart();
    const Vec u = pt(0.7, -0.4);
    EXPECT_LT((c.jacobian(u) - jacobian_fd(c.map, u, 1e-3)).cwiseAbs().maxCoeff(), 1e-9);
}
