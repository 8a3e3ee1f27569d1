#include <gtest/gtest.h>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rmedge/ensembles.hpp"
#include "rmedge/girko.hpp"

using namespace rmedge;

namespace {

CutoffFunction desk_cutoff(CutoffKind kind = CutoffKind::lower, double L = 1.2, double l = 0.05, double h = 0.3) {
    return build_cutoff(kind, 100, 0, 0, CutoffOverride{L, l, h});
}

}  // namespace

TEST(Cutoff, PlateauAndExterior) {
    const auto f = desk_cutoff();
    EXPECT_EQ(f.value({1.2, 0}), 1.0);
    EXPECT_EQ(f.value({1.26, 0}), 0.0);
    EXPECT_EQ(f.laplacian({1.2, 0.1}), 0.0);
    EXPECT_EQ(f.laplacian({1.3, 0.0}), 0.0);
    EXPECT_EQ(f.laplacian({1.2, 0.35}), 0.0);
    // plateau |x - L| <= 4l/5, support |x - L| <= l
    EXPECT_NEAR(f.value({1.2 + 0.8 * 0.05, 0.8 * 0.3}), 1.0, 1e-14);
    EXPECT_EQ(f.value({1.2 + 0.05, 0}), 0.0);
}

TEST(Cutoff, ValuesInUnitInterval) {
    const auto f = desk_cutoff(CutoffKind::upper);
    for (int i = 0; i <= 200; ++i)
        for (int j = 0; j <= 50; ++j) {
            const double v = f.value({1.1 + 0.2 * i / 200, -0.5 + j / 50.0});
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
}

TEST(Cutoff, ClosedFormDerivativesMatchFiniteDifferences) {
    const auto f = desk_cutoff();
    const double e = 1e-5;
    for (cplx z : {cplx(1.163, 0.05), cplx(1.21, 0.26), cplx(1.245, -0.27)}) {
        const double fx = (f.value(z + e) - f.value(z - e)) / (2 * e);
        const double fy = (f.value(z + cplx(0, e)) - f.value(z - cplx(0, e))) / (2 * e);
        EXPECT_NEAR(f.gradient(z).real(), fx, 1e-5 * (1 + std::abs(fx)));
        EXPECT_NEAR(f.gradient(z).imag(), fy, 1e-5 * (1 + std::abs(fy)));
        const double lap = (f.value(z + e) + f.value(z - e) + f.value(z + cplx(0, e)) + f.value(z - cplx(0, e)) -
                            4 * f.value(z)) / (e * e);
        EXPECT_NEAR(f.laplacian(z), lap, 1e-3 * (1 + std::abs(lap)));
    }
}

TEST(Cutoff, SecondDerivativeL1NormOfProfile) {
    const auto f = desk_cutoff();
    const Profile& g = f.gx;
    // Midpoint rule on |g''|.
    const int m = 200000;
    const double a = g.lo(), b = g.hi();
    double s = 0;
    for (int i = 0; i < m; ++i) s += std::abs(g.d2(a + (i + 0.5) * (b - a) / m));
    s *= (b - a) / m;
    EXPECT_NEAR(s, g.d2_l1(), 1e-4 * g.d2_l1());
    EXPECT_NEAR(g.d2_l1(), 37.5 / f.l, 1e-9);
}

TEST(Cutoff, LaplacianL1NormWithinAnalyticBoundAndScale) {
    const auto f = desk_cutoff();
    const double norm = laplacian_l1_norm(f, 2);
    EXPECT_LE(norm, f.laplacian_l1_bound() * (1 + 1e-9));
    EXPECT_GE(norm, 0.5 * f.h / f.l);
    // The h/l scaling: doubling h at fixed l roughly doubles the norm.
    const auto f2 = desk_cutoff(CutoffKind::lower, 1.2, 0.05, 0.6);
    EXPECT_NEAR(laplacian_l1_norm(f2, 2) / norm, 2.0, 0.1);
}

TEST(Cutoff, LaplacianIntegratesToZero) {
    for (auto kind : {CutoffKind::lower, CutoffKind::upper}) {
        const auto f = desk_cutoff(kind);
        EXPECT_LE(std::abs(laplacian_integral(f, 1)), 1e-6 * f.h / f.l);
    }
}

TEST(Cutoff, GeometryNeedsPositiveGamma) {
    try {
        build_cutoff(CutoffKind::lower, 1000, 3, 0.05);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_STREQ(e.what(), "gamma_nonpositive");
    }
    const auto f = build_cutoff(CutoffKind::lower, 1'000'000'000, 3, 0.05);
    EXPECT_GT(f.l, 0);
    EXPECT_NEAR(f.h, std::pow(1e9, -0.25 + 0.025), 1e-15);
    EXPECT_THROW(build_cutoff(CutoffKind::upper, 32, 0, 0, CutoffOverride{1, 0, 1}), ConfigError);
}

TEST(EtaIntegral, ClosedForms) {
    const SingularSpectrum S{0.0, {1.0}};
    EXPECT_NEAR(eta_integral_exact(S, 0, 1), std::log(2.0), 1e-15);
    EXPECT_NEAR(eta_integral_exact(S, 1, 1e3), std::log((1 + 1e6) / 2), 1e-12);
    EXPECT_NEAR(eta_integral_exact(S, 1, 1e3), 13.1224, 1e-4);
    EXPECT_THROW(eta_integral_exact(SingularSpectrum{0.0, {0.0}}, 0, 1), NumericalError);
    EXPECT_THROW(eta_integral_exact(S, 1, 1), ConfigError);
}

TEST(EtaIntegral, MatchesAdaptiveQuadrature) {
    const auto S = shifted_singulars(sample_matrix(Dist::ginibre, 8, 2, 0), cplx(0.9, 0.1));
    for (auto [a, b] : {std::pair{0.0, 1.0}, std::pair{1e-3, 10.0}, std::pair{0.5, 2.0}}) {
        const double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double eta) { return eta > 0 ? im_trace_resolvent(S, eta) : 0.0; }, a, b, 25, 1e-13);
        const double exact = eta_integral_exact(S, a, b);
        EXPECT_NEAR(q, exact, 1e-8 * std::abs(exact));
    }
}

TEST(Logdet, Identities) {
    EXPECT_NEAR(logdet_term(SingularSpectrum{0.0, {0, 0, 0}}, 10.0), 6 * std::log(10.0), 1e-13);
    EXPECT_NEAR(logdet_term(SingularSpectrum{0.0, {1.0}}, 1.0), std::log(2.0), 1e-15);
    const auto S = shifted_singulars(sample_matrix(Dist::ginibre, 64, 3, 0), 0.5);
    const double T = 1e6;
    double s2 = 0;
    for (double s : S.values) s2 += s * s;
    EXPECT_LE(std::abs(logdet_term(S, T) - 128 * std::log(T)), 2 * s2 / (T * T) + 1e-12);
}

TEST(Girko, DisjointSupportGivesZero) {
    const auto X = sample_matrix(Dist::ginibre, 16, 1, 0);
    const auto f = build_cutoff(CutoffKind::lower, 16, 0, 0, CutoffOverride{3.0, 0.2, 0.3});
    EXPECT_EQ(girko_lhs(eigvals(X), f), 0.0);
    const auto r = girko_rhs(X, f, default_eta0(16, 0.05), 1e6, {});
    EXPECT_LT(std::abs(r.total()), 1e-9);
}

TEST(Girko, OnePlateauEigenvalueCountsOnce) {
    ComplexMatrix X = ComplexMatrix::Zero(3, 3);
    X(0, 0) = 1.2;
    X(1, 1) = -0.5;
    X(2, 2) = cplx(0, 0.7);
    const auto f = desk_cutoff();
    EXPECT_EQ(girko_lhs(eigvals(X), f), 1.0);
    const auto r = girko_rhs(X, f, 1e-3, 1e6, {});
    EXPECT_NEAR(r.total(), 1.0, 1e-8);
}

TEST(Girko, PathwiseIdentityAndRefinement) {
    // Seed 1, index 8 has an eigenvalue inside a transition band.
    const auto X = sample_matrix(Dist::ginibre, 32, 1, 8);
    const auto f = build_cutoff(CutoffKind::lower, 32, 0, 0, CutoffOverride{1.05, 0.1, 0.3});
    const double lhs = girko_lhs(eigvals(X), f);
    ASSERT_GT(lhs, 0.0);
    ASSERT_LT(lhs, 1.0);
    const double eta0 = default_eta0(32, 0.05);
    const auto r0 = girko_rhs(X, f, eta0, 1e6, {0});
    const auto r1 = girko_rhs(X, f, eta0, 1e6, {1});
    const double g0 = std::abs(r0.total() - lhs), g1 = std::abs(r1.total() - lhs);
    EXPECT_LT(g1, 1e-2);
    EXPECT_GE(g0 / g1, 4.0);
    EXPECT_NEAR(r1.total(), r1.direct, 1e-10);
    const auto r3 = girko_rhs(X, f, eta0, 1e3, {1});
    EXPECT_LT(std::abs(r3.total() - r1.total()), 1e-4);
    EXPECT_GT(r1.refined_panels, 0u);
}

TEST(Girko, SplitComponentsHaveExpectedSigns) {
    const auto X = sample_matrix(Dist::ginibre, 16, 5, 0);
    const auto f = build_cutoff(CutoffKind::upper, 16, 0, 0, CutoffOverride{1.0, 0.1, 0.2});
    const auto r = girko_rhs(X, f, 1e-2, 1e6, {});
    EXPECT_EQ(r.eta0, 1e-2);
    EXPECT_TRUE(std::isfinite(r.I_small) && std::isfinite(r.I_large) && std::isfinite(r.logdet_term));
    EXPECT_NEAR(r.total(), r.direct, 1e-10);
}

TEST(Girko, Rejections) {
    const auto X = sample_matrix(Dist::ginibre, 8, 1, 0);
    const auto f = desk_cutoff();
    EXPECT_THROW(girko_rhs(X, f, 1.0, 1.0, {}), ConfigError);
    QuadratureGrid small;
    small.bounds = Box{1.19, 1.21, -0.1, 0.1};
    EXPECT_THROW(girko_rhs(X, f, 1e-3, 1e6, small), ConfigError);
}
