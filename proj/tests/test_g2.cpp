#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "calib/examples.hpp"
#include "calib/g2.hpp"

using namespace calib;

namespace {

Vec pt(double a, double b) {
    Vec u(2);
    u << a, b;
    return u;
}

Vec random_vec(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Vec v(n);
    for (auto& x : v) x = nd(rng);
    return v;
}

// Vector with <x cross y, z> = phi(x, y, z) for the identity metric.
Vec cross(const Multivector& phi, const Vec& x, const Vec& y) {
    return contract(y, contract(x, phi)).covector_coeffs();
}

double gram_det(const std::vector<Vec>& vs) {
    Mat G(vs.size(), vs.size());
    for (size_t i = 0; i < vs.size(); ++i)
        for (size_t j = 0; j < vs.size(); ++j) G(i, j) = vs[i].dot(vs[j]);
    return G.determinant();
}

double associative_at(const ImmersionChart& c, const SectionFamily& sec, const Vec& u, double t1,
                      const Profile& prof = Profile()) {
    const AdaptedFramePoint p = adapted_frame(c, u);
    const SectionJet jet = section_jet(sec, p);
    const double r = std::sqrt(t1 * t1 + std::norm(jet.G));
    const auto E = g2_tangent_E_sigma(p, jet, t1);
    return associative_residual(g2_psi(prof.u(r), prof.v(r)), E[0], E[1], E[2]);
}

double coassociative_at(const ImmersionChart& c, const std::function<double(const Vec&)>& eta, const Vec& u,
                        double t2, double t3, const Profile& prof = Profile()) {
    const AdaptedFramePoint p = adapted_frame(c, u);
    const ScalarJet ej = scalar_jet(eta, p);
    const double r = std::sqrt(ej.value * ej.value + t2 * t2 + t3 * t3);
    const auto E = g2_tangent_eta_F(p, ej, t2, t3);
    return coassociative_residual(g2_phi(prof.u(r), prof.v(r)), E[0], E[1], E[2], E[3]);
}

}  // namespace

TEST(G2Forms, PsiIsHodgeDualOfPhi) {
    for (auto [u, v] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}, std::pair{0.7, 1.3}}) {
        const Multivector phi = g2_phi(u, v), psi = g2_psi(u, v);
        EXPECT_LT((hodge(phi) - psi).coeff_norm(), 1e-10 * psi.coeff_norm()) << u << " " << v;
    }
}

TEST(G2Forms, PhiHasUnitNormSeven) {
    // |phi|^2 = 7 in the induced metric for any G2 structure.
    for (auto [u, v] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}}) {
        const Multivector phi = g2_phi(u, v);
        EXPECT_NEAR(form_inner(phi, phi), 7.0, 1e-10);
    }
}

TEST(G2Forms, AssociatorIdentity) {
    // phi(x,y,z)^2 + |chi(x,y,z)|^2 = |x ^ y ^ z|^2 with <chi, w> = psi(x,y,z,w).
    std::mt19937_64 rng(1);
    const Multivector phi = g2_phi(1, 1), psi = g2_psi(1, 1);
    for (int t = 0; t < 100; ++t) {
        const Vec x = random_vec(7, rng), y = random_vec(7, rng), z = random_vec(7, rng);
        const double ph = evaluate(phi, {x, y, z}), chi = associative_residual(psi, x, y, z);
        EXPECT_NEAR(ph * ph + chi * chi, gram_det({x, y, z}), 1e-9 * (1 + gram_det({x, y, z})));
    }
}

TEST(G2Forms, CrossProductPlanesAreAssociative) {
    std::mt19937_64 rng(2);
    const Multivector phi = g2_phi(1, 1), psi = g2_psi(1, 1);
    for (int t = 0; t < 50; ++t) {
        const Vec x = random_vec(7, rng), y = random_vec(7, rng);
        const Vec z = cross(phi, x, y);
        EXPECT_LT(associative_residual(psi, x, y, z), 1e-10 * (1 + z.squaredNorm()));
        // The orthogonal complement of an associative plane is coassociative.
        Mat B(7, 3);
        B << x, y, z;
        const Eigen::JacobiSVD<Mat> svd(B.transpose(), Eigen::ComputeFullV);
        const Mat N = svd.matrixV().rightCols(4);
        EXPECT_LT(coassociative_residual(phi, N.col(0), N.col(1), N.col(2), N.col(3)), 1e-10);
    }
}

TEST(G2Forms, FiberIsAssociative) {
    const Multivector psi = g2_psi(1.5, 0.8);
    EXPECT_LT(associative_residual(psi, horizontal_unit(7, 5), horizontal_unit(7, 6), horizontal_unit(7, 7)), 1e-14);
    EXPECT_NEAR(evaluate(g2_phi(1.5, 0.8), {horizontal_unit(7, 5), horizontal_unit(7, 6), horizontal_unit(7, 7)}),
                std::pow(0.8, 3), 1e-14);
}

TEST(AsdFrame, AntiSelfDualAndOrthogonal) {
    const auto f = asd_frame();
    for (int k = 0; k < 3; ++k) {
        EXPECT_LT((hodge(f[k]) + f[k]).coeff_norm(), 1e-15);
        EXPECT_DOUBLE_EQ(form_inner(f[k], f[k]), 2.0);
        for (int m = k + 1; m < 3; ++m) EXPECT_DOUBLE_EQ(form_inner(f[k], f[m]), 0.0);
    }
    EXPECT_THROW(asd_frame(InnerSpace::make(5)), dimension_error);
}

TEST(AsdFrame, BivectorsMatchForms) {
    const Mat F = Mat::Identity(4, 4);
    const auto b = asd_bivectors(F);
    const auto f = asd_frame();
    for (int k = 0; k < 3; ++k)
        for (int i = 1; i <= 4; ++i)
            for (int j = i + 1; j <= 4; ++j) EXPECT_DOUBLE_EQ(b[k](i - 1, j - 1), f[k].coeff({i, j}));
}

TEST(NablaF, ClosedFormMatchesFiniteDifferences) {
    std::mt19937_64 rng(3);
    for (const auto& name : {"equatorial", "veronese", "graph"}) {
        const ImmersionChart c = chart_by_name(name);
        for (int s = 0; s < 5; ++s) {
            const AdaptedFramePoint p = adapted_frame(c, sample_point(c, rng));
            for (int j = 1; j <= 2; ++j) {
                const Eigen::Matrix3d N = nabla_f(p.gamma, j);
                EXPECT_LT((N + N.transpose()).cwiseAbs().maxCoeff(), 1e-7) << name;
                EXPECT_LT((N - nabla_f_fd(c, p, j)).cwiseAbs().maxCoeff(), 1e-6) << name;
            }
        }
    }
}

TEST(NablaF, EquatorialFirstFormIsParallel) {
    const ImmersionChart c = equatorial_chart();
    const AdaptedFramePoint p = adapted_frame(c, pt(0.3, -0.2));
    for (int j = 1; j <= 2; ++j) {
        const Eigen::Matrix3d N = nabla_f(p.gamma, j);
        EXPECT_LT(N.row(0).cwiseAbs().maxCoeff(), 1e-7);
        EXPECT_NEAR(N(1, 2), p.gamma(j, 2, 1), 1e-12);
    }
    EXPECT_NEAR(nabla_f(p.gamma, 1)(1, 2), 0.2, 1e-7);
    EXPECT_NEAR(nabla_f(p.gamma, 2)(1, 2), 0.3, 1e-7);
}

TEST(TangentBasis, ClosedFormMatchesFiniteDifferences) {
    std::mt19937_64 rng(4);
    const std::vector<std::pair<std::string, SectionFamily>> cases{
        {"veronese", SectionFamily::sinphi(1.0, -0.5)},
        {"equatorial", SectionFamily::equatorial({cplx(0.5, 0.2)}, {2.0})},
        {"graph", SectionFamily::constant_value(cplx(0.3, 0.4))}};
    for (const auto& [name, sec] : cases) {
        const ImmersionChart c = chart_by_name(name);
        for (int s = 0; s < 5; ++s) {
            const Vec u = sample_point(c, rng);
            const AdaptedFramePoint p = adapted_frame(c, u);
            const auto E = g2_tangent_E_sigma(p, section_jet(sec, p), 0.7);
            const auto Efd = g2_tangent_E_sigma_fd(c, sec, u, 0.7);
            for (int i = 0; i < 3; ++i) EXPECT_LT((E[i] - Efd[i]).norm(), 1e-5) << name;
        }
    }
}

TEST(Associative, HolomorphicSectionsOverVeronese) {
    std::mt19937_64 rng(5);
    const ImmersionChart c = veronese_chart();
    for (auto [C, D] : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}, std::pair{-2.0, 0.5}}) {
        const SectionFamily sec = SectionFamily::sinphi(C, D);
        for (int s = 0; s < 20; ++s)
            for (double t1 : {-2.0, 0.0, 1.5}) EXPECT_LT(associative_at(c, sec, sample_point(c, rng), t1), 1e-6);
    }
}

TEST(Associative, HigherModesOverVeronese) {
    std::mt19937_64 rng(6);
    const ImmersionChart c = veronese_chart();
    const SectionFamily sec = SectionFamily::veronese({cplx(0.3, -0.1), cplx(0.2, 0.4)}, {1.0, -2.0});
    for (int s = 0; s < 10; ++s) {
        const Vec u = sample_point(c, rng);
        EXPECT_LT(std::abs(pde_residual(sec, c, u)), 1e-8);
        EXPECT_LT(associative_at(c, sec, u, 0.4), 1e-6);
    }
}

TEST(Associative, EquatorialZeroAndConstantSections) {
    std::mt19937_64 rng(7);
    const ImmersionChart c = equatorial_chart();
    double worst_const = 0;
    for (int s = 0; s < 20; ++s) {
        const Vec u = sample_point(c, rng);
        EXPECT_LT(associative_at(c, SectionFamily::zero(), u, 1.3), 1e-8);
        worst_const = std::max(worst_const, associative_at(c, SectionFamily::constant_value(cplx(0.5, 0.0)), u, 1.3));
    }
    EXPECT_GT(worst_const, 1e-3);
}

TEST(Associative, NonMinimalBaseFails) {
    const ImmersionChart c = graph_chart();
    EXPECT_GT(associative_at(c, SectionFamily::zero(), c.center(), 0.5), 1e-3);
}

TEST(Associative, ProfileDoesNotChangeVerdict) {
    const ImmersionChart c = veronese_chart();
    const Profile prof = Profile::constant(2.0, 0.5);
    const Vec u = pt(1.1, 2.3);
    EXPECT_LT(associative_at(c, SectionFamily::sinphi(1, 0), u, 0.8, prof), 1e-6);
    EXPECT_GT(associative_at(c, SectionFamily::constant_value(cplx(1, 0)), u, 0.8, prof), 1e-3);
}

TEST(Coassociative, ParallelMultiplesOverEquatorial) {
    std::mt19937_64 rng(8);
    const ImmersionChart c = equatorial_chart();
    for (double k : {0.0, 1.0, -3.0}) {
        auto eta = [k](const Vec&) { return k; };
        for (int s = 0; s < 20; ++s) EXPECT_LT(coassociative_at(c, eta, sample_point(c, rng), 0.5, -1.2), 1e-7);
    }
    auto varying = [](const Vec& u) { return u[0]; };
    EXPECT_GT(coassociative_at(c, varying, pt(0.3, -0.2), 0.5, -1.2), 1e-3);
}

TEST(Coassociative, AntipodalVeroneseOnly) {
    std::mt19937_64 rng(9);
    auto one = [](const Vec&) { return 1.0; };
    const ImmersionChart a = antipodal_chart(veronese_chart()), v = veronese_chart();
    double worst = 0;
    for (int s = 0; s < 20; ++s) {
        const Vec u = sample_point(v, rng);
        EXPECT_LT(coassociative_at(a, one, u, 0.3, 0.9), 1e-6);
        EXPECT_LT(coassociative_at(a, one, u, 0.3, 0.9, Profile::constant(0.6, 1.7)), 1e-6);
        worst = std::max(worst, coassociative_at(v, one, u, 0.3, 0.9));
    }
    EXPECT_GT(worst, 1e-3);
}

TEST(Dbar, HolomorphicFamilies) {
    EXPECT_LT(dbar_F_residual(section_jet(SectionFamily::sinphi(1, 2), adapted_frame(veronese_chart(), pt(1.0, 0.3))),
                              adapted_frame(veronese_chart(), pt(1.0, 0.3)).gamma)
                  .norm(),
              1e-8);
    const ImmersionChart e = equatorial_chart();
    const AdaptedFramePoint p = adapted_frame(e, pt(0.4, 0.1));
    EXPECT_LT(dbar_F_residual(section_jet(SectionFamily::equatorial({cplx(1, 0)}, {2.0}), p), p.gamma).norm(), 1e-8);
    EXPECT_GT(dbar_F_residual(section_jet(SectionFamily::constant_value(cplx(1, 0)), p), p.gamma).norm(), 1e-3);
}

TEST(Parallel, ScalarJets) {
    const AdaptedFramePoint p = adapted_frame(equatorial_chart(), pt(0.4, 0.1));
    EXPECT_LT(parallel_E_residual(scalar_jet([](const Vec&) { return 2.5; }, p)), 1e-12);
    const ScalarJet j = scalar_jet([](const Vec& u) { return u[0] * u[0]; }, p);
    EXPECT_NEAR(j.value, 0.16, 1e-15);
    EXPECT_GT(parallel_E_residual(j), 1e-2);
}
