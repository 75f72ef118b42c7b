#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "calib/examples.hpp"

using namespace calib;

namespace {

Vec pt(double a, double b) {
    Vec u(2);
    u << a, b;
    return u;
}

}  // namespace

TEST(Registry, UnknownChartIsConfigError) {
    EXPECT_THROW(chart_by_name("torus"), config_error);
    for (const auto& n : chart_names()) EXPECT_EQ(chart_by_name(n).name, n);
}

TEST(Veronese, QuadraticMapOnSphere) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 50; ++t) {
        Eigen::Vector3d p(nd(rng), nd(rng), nd(rng));
        p *= std::sqrt(3.0) / p.norm();
        EXPECT_NEAR(veronese_map(p).norm(), 1.0, 1e-14);
        EXPECT_LT((veronese_map(p) - veronese_map(-p)).norm(), 1e-15);
    }
}

TEST(Veronese, HatCoordinatesRoundTrip) {
    std::mt19937_64 rng(2);
    const ImmersionChart v = veronese_chart(), h = veronese_hat_chart();
    int hits = 0;
    while (hits < 50) {
        const Vec u = sample_point(v, rng);
        if (!in_overlap(u)) continue;
        ++hits;
        const Vec uh = veronese_to_hat(u);
        EXPECT_LT((hat_to_veronese(uh) - u).norm(), 1e-10);
        EXPECT_LT((v.map(u) - h.map(uh)).norm(), 1e-12);
    }
}

TEST(GoldenTables, LoadedAndNamed) {
    const auto tables = load_golden_tables();
    ASSERT_EQ(tables.size(), 3u);
    EXPECT_EQ(find_golden_table(tables, "veronese_gamma").chart, "veronese");
    EXPECT_THROW(find_golden_table(tables, "missing"), config_error);
    EXPECT_THROW(load_golden_tables("/nonexistent/golden.json"), config_error);
}

TEST(GoldenTables, ReproducedAtSampledPoints) {
    std::mt19937_64 rng(3);
    for (const auto& t : load_golden_tables()) {
        const ImmersionChart c = chart_by_name(t.chart);
        for (int s = 0; s < 50; ++s) {
            const AdaptedFramePoint p = adapted_frame(c, sample_point(c, rng));
            EXPECT_LT(golden_deviation(t, p), t.tolerance) << t.name;
        }
    }
}

TEST(GoldenTables, DetectsWrongEntry) {
    auto tables = load_golden_tables();
    GoldenTable t = find_golden_table(tables, "veronese_gamma");
    t.gamma.front().terms.begin()->second += 0.01;
    const AdaptedFramePoint p = adapted_frame(veronese_chart(), pt(1.0, 0.7));
    EXPECT_GT(golden_deviation(t, p), 5e-3);
}

TEST(GoldenTables, ParseInline) {
    const auto doc = nlohmann::json::parse(R"({"tables": [{"name": "t", "chart": "equatorial",
        "gamma": [{"j": 1, "k": 1, "l": 2, "terms": [{"basis": "u2", "coeff": 1.0}]}],
        "A": [{"k": 3, "value": [[0, 0], [0, 0]]}]}]})");
    const auto tables = parse_golden_tables(doc);
    ASSERT_EQ(tables.size(), 1u);
    EXPECT_DOUBLE_EQ(golden_value(tables[0].gamma[0], pt(0.5, -0.25)), -0.25);
    EXPECT_THROW(golden_basis("tan", pt(0, 0)), config_error);
}

TEST(Sections, AnalyticPartialsMatchFiniteDifferences) {
    std::mt19937_64 rng(4);
    const std::vector<std::pair<std::string, SectionFamily>> cases{
        {"veronese", SectionFamily::sinphi(0.7, -1.2)},
        {"veronese", SectionFamily::veronese({cplx(0.3, 0.1), cplx(-0.2, 0.5)}, {1.0, 2.0})},
        {"equatorial", SectionFamily::equatorial({cplx(1, 0), cplx(0.2, -0.3)}, {0.0, 3.0})}};
    for (const auto& [name, sec] : cases) {
        const ImmersionChart c = chart_by_name(name);
        for (int s = 0; s < 10; ++s) {
            const Vec u = sample_point(c, rng);
            const auto a = sec.partials(u);
            const auto f = complex_partials_fd([&sec](const Vec& v) { return sec.value(v); }, u, 1e-4);
            for (int m = 0; m < 2; ++m) EXPECT_LT(std::abs(a[m] - f[m]), 1e-7 * (1 + std::abs(a[m]))) << name;
        }
    }
}

TEST(Sections, SinPhiValue) {
    const Vec u = pt(0.9, 2.1);
    EXPECT_LT(std::abs(SectionFamily::sinphi(2.0, -1.0).value(u) - std::sin(0.9) * cplx(2.0, -1.0)), 1e-15);
}

TEST(Pde, HolomorphicFamiliesSolveIt) {
    std::mt19937_64 rng(5);
    const ImmersionChart v = veronese_chart(), e = equatorial_chart();
    for (int s = 0; s < 50; ++s) {
        EXPECT_LT(std::abs(pde_residual(SectionFamily::sinphi(1.0, 0.5), v, sample_point(v, rng))), 1e-9);
        EXPECT_LT(std::abs(pde_residual(SectionFamily::equatorial({cplx(1, 0)}, {0.0}), e, sample_point(e, rng))),
                  1e-9);
        const SectionFamily quad = SectionFamily::equatorial({cplx(0.5, 1)}, {2.0});
        const Vec u = sample_point(e, rng);
        EXPECT_LT(std::abs(pde_residual(quad, e, u)), 1e-9 * (1 + std::abs(quad.value(u))));
    }
}

TEST(Pde, NonSolutionsDetected) {
    EXPECT_GT(std::abs(pde_residual(SectionFamily::constant_value(cplx(1, 0)), veronese_chart(), pt(1.0, 0.7))), 1e-3);
    EXPECT_GT(std::abs(pde_residual(SectionFamily::constant_value(cplx(0, 1)), equatorial_chart(), pt(0.3, 0.4))),
              1e-3);
}

TEST(Boundedness, EquatorialSolutionGrows) {
    // G = |z|^2 + 1 from H = 1.
    const BoundednessScan b = boundedness_scan(SectionFamily::equatorial({cplx(1, 0)}, {0.0}), equatorial_chart());
    EXPECT_TRUE(b.growth);
    EXPECT_GT(b.log_slope, 1.0);
    EXPECT_GT(b.sup_abs, 1e3);
}

TEST(Boundedness, SinPhiStaysBounded) {
    const BoundednessScan b = boundedness_scan(SectionFamily::sinphi(1.0, 1.0), veronese_chart());
    EXPECT_FALSE(b.growth);
    EXPECT_LE(b.sup_abs, std::sqrt(2.0) + 1e-12);
    EXPECT_NEAR(b.sup_two_sq, 2 * b.sup_abs * b.sup_abs, 1e-12);
}

TEST(FrameChange, IdentitiesOnOverlap) {
    std::mt19937_64 rng(6);
    const ImmersionChart v = veronese_chart();
    int hits = 0;
    while (hits < 50) {
        const Vec u = sample_point(v, rng);
        if (!in_overlap(u)) continue;
        ++hits;
        const FrameChangeReport r = frame_change_check(u, 0.8, -0.6);
        EXPECT_LT(r.point, 1e-10);
        EXPECT_LT(r.sin_phi, 1e-10);
        EXPECT_LT(r.tangent, 1e-6);
        EXPECT_LT(r.normal, 1e-6);
        EXPECT_LT(r.two_forms, 1e-6);
        EXPECT_LT(r.hat_pde, 1e-7);
    }
}

TEST(FrameChange, OutsideOverlapRejected) {
    Vec u = pt(M_PI / 2, M_PI / 2);
    if (in_overlap(u)) GTEST_SKIP();
    EXPECT_THROW(frame_change_check(u), domain_error);
}
