#include <gtest/gtest.h>

#include <cmath>

#include "rmedge/edge_stats.hpp"
#include "rmedge/flow.hpp"
#include "rmedge/rng.hpp"
#include "rmedge/spectral.hpp"
#include "rmedge/stats.hpp"

using namespace rmedge;

TEST(Flow, InterpolationEndpoints) {
    const auto X0 = sample_matrix(Dist::bernoulli_phase, 12, 1, 0);
    const auto G = sample_ginibre_partner(12, 1, 0);
    EXPECT_EQ((interpolate(X0, G, 0) - X0).norm(), 0.0);
    EXPECT_LT((interpolate(X0, G, 50) - G).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_THROW(interpolate(X0, G, -1), ConfigError);
}

TEST(Flow, PartnerIndependentOfMatrixStream) {
    const auto X0 = sample_matrix(Dist::ginibre, 6, 1, 0);
    const auto G = sample_ginibre_partner(6, 1, 0);
    EXPECT_GT((X0 - G).norm(), 0.1);
}

TEST(Flow, VariancePreserved) {
    const int n = 20, samples = 200;
    for (double t : {0.0, 0.3, 2.0}) {
        std::vector<double> f(samples);
        for (int i = 0; i < samples; ++i)
            f[i] = interpolate(sample_matrix(Dist::two_point_complex, n, 4, i), sample_ginibre_partner(n, 4, i), t)
                       .squaredNorm();
        EXPECT_NEAR(mean(f), double(n), 3 * std_error(f) + 1e-12) << t;
    }
}

TEST(Flow, TrajectorySingletonMatchesDirect) {
    const auto X0 = sample_matrix(Dist::ginibre, 16, 2, 0);
    const auto G = sample_ginibre_partner(16, 2, 0);
    const auto tr = observable_trajectory(X0, G, {0.0}, 1.0, 0.1);
    ASSERT_EQ(tr.size(), 1u);
    EXPECT_EQ(tr[0], avg_trace_G(shifted_singulars(X0, 1.0), 0.1).imag());
}

TEST(Flow, DriftWithinScale) {
    FlowOptions opt;
    opt.dist = Dist::bernoulli_phase;
    opt.n = 256;
    opt.pairs = 200;
    opt.t_grid = {0.0, 1.0};
    const auto r = flow_experiment(opt);
    EXPECT_NEAR(r.eta, std::pow(256.0, -0.75), 1e-15);
    ASSERT_EQ(r.drift.size(), 1u);
    EXPECT_LE(std::abs(r.drift[0]), 20 * r.scale);
}

TEST(Flow, EndpointMeansAgreeAcrossDistributions) {
    FlowOptions a;
    a.n = 64;
    a.pairs = 200;
    a.t_grid = {0.0, 8.0};
    FlowOptions b = a;
    a.dist = Dist::bernoulli_phase;
    b.dist = Dist::ginibre;
    b.seed = 2;
    const auto ra = flow_experiment(a), rb = flow_experiment(b);
    const double se = std::hypot(ra.std_err[0], rb.std_err[0]);
    EXPECT_NEAR(ra.mean[0], rb.mean[0], 3 * se);
    const double se8 = std::hypot(ra.std_err[1], rb.std_err[1]);
    EXPECT_NEAR(ra.mean[1], rb.mean[1], 3 * se8);
}

TEST(Flow, DriftConsistentUnderStepHalving) {
    FlowOptions opt;
    opt.n = 64;
    opt.pairs = 150;
    opt.t_grid = {0.0, 0.25, 0.5};
    const auto r = flow_experiment(opt);
    const double coarse = (r.mean[2] - r.mean[0]) / 0.5;
    const double fine = 0.5 * (r.drift[0] + r.drift[1]);
    EXPECT_NEAR(coarse, fine, 1e-12);
    EXPECT_NEAR(r.drift[0], r.drift[1], 3 * std::hypot(r.drift_err[0], r.drift_err[1]) + 1e-12);
}

TEST(Flow, LargeTimeEntriesAreGinibre) {
    const int n = 40;
    const auto Xt = interpolate(sample_matrix(Dist::bernoulli_phase, n, 5, 0), sample_ginibre_partner(n, 5, 0), 30);
    const auto G = sample_matrix(Dist::ginibre, n, 6, 0);
    std::vector<double> a, b;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            a.push_back(Xt(i, j).real());
            b.push_back(G(i, j).real());
        }
    EXPECT_LT(ks_two_sample(a, b), ks_critical_two_sample(a.size(), b.size()));
    const auto X0 = sample_matrix(Dist::bernoulli_phase, n, 5, 0);
    std::vector<double> c;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c.push_back(X0(i, j).real());
    EXPECT_GT(ks_two_sample(c, b), ks_critical_two_sample(c.size(), b.size()));
}

TEST(Stability, GrowthRate) {
    EXPECT_EQ(growth_rate(1, 1), 0.0);
    EXPECT_EQ(growth_rate(0, 0.7), -1.0);
    EXPECT_DOUBLE_EQ(growth_rate(2, 0.7) - growth_rate(1, 0.7), growth_rate(1, 0.7) - growth_rate(0, 0.7));
}

TEST(Stability, Classification) {
    const std::vector<double> m{0.9, 1.0, 1.1, 1.5};
    EXPECT_EQ(classify_stability(0.5, 64, m).decay_fraction, 1.0);
    EXPECT_EQ(classify_stability(0.5, 64, m).verdict, Stability::decay);
    const std::vector<double> big{1.0, 1.2, 1.4};
    EXPECT_EQ(classify_stability(2.0, 64, big).blowup_fraction, 1.0);
    EXPECT_EQ(classify_stability(2.0, 64, big).verdict, Stability::blowup);
    EXPECT_FALSE(classify_stability(2.0, 64, big).band_from_gamma);
    EXPECT_TRUE(classify_stability(1.0, 2'000'000'000, big).band_from_gamma);
    EXPECT_THROW(classify_stability(1.0, 64, {}), ConfigError);
    EXPECT_EQ(to_string(Stability::critical_band), "critical-band");
}

TEST(Stability, MedianThresholdSplitsSamples) {
    const int n = 512;
    std::vector<double> m;
    for (const auto& s : mc_edge_ensemble(Dist::ginibre, n, 1000, 8)) m.push_back(s.max_re);
    std::vector<double> inv;
    for (double v : m) inv.push_back(1 / v);
    const double g = median(inv);
    const auto r = classify_stability(g, n, m);
    EXPECT_NEAR(r.decay_fraction, 0.5, 0.05);
    EXPECT_EQ(r.verdict, Stability::critical_band);
}

TEST(Propagate, ZeroMatrixDecaysExponentially) {
    const std::vector<cplx> u0{1.0, cplx(0, 2), -0.5};
    const auto u = propagate(ComplexMatrix::Zero(3, 3), 3.7, u0, 5.0);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(u[i] - std::exp(-5.0) * u0[i]), 0, 1e-9 * std::abs(u0[i]));
}

TEST(Propagate, DiagonalIsExact) {
    ComplexMatrix X = ComplexMatrix::Zero(2, 2);
    X(0, 0) = 0.5;
    X(1, 1) = cplx(1.5, 2.0);
    const std::vector<cplx> u0{1.0, 1.0};
    const auto u = propagate(X, 1.0, u0, 3.0);
    EXPECT_NEAR(std::abs(u[0] - std::exp(-1.5)), 0, 1e-8 * std::exp(-1.5));
    const cplx e = std::exp(cplx(0.5, 2.0) * 3.0);
    EXPECT_NEAR(std::abs(u[1] - e), 0, 1e-7 * std::abs(e));
}

TEST(Propagate, AgreesWithEigendecomposition) {
    const int n = 32;
    const auto X = sample_matrix(Dist::ginibre, n, 14, 0);
    Engine g = make_engine(14, 0, Stream::misc);
    std::vector<cplx> u0(n);
    for (auto& v : u0) v = complex_normal(g);
    const double gc = 0.8;
    const auto a = propagate(X, gc, u0, 40.0);
    const auto b = propagate_eig(X, gc, u0, 40.0);
    double diff = 0, norm = 0;
    for (int i = 0; i < n; ++i) {
        diff = std::max(diff, std::abs(a[i] - b[i]));
        norm = std::max(norm, std::abs(b[i]));
    }
    EXPECT_LE(diff, 1e-5 * norm);
    const double rate = growth_rate(gc, rightmost(eigvals(X)).max_re);
    const double est = std::log(sup_norm(a) / sup_norm(u0)) / 40.0;
    EXPECT_NEAR(est, rate, 1e-2 + std::log(double(n)) / 40.0);
}

TEST(Propagate, GrowthExponentOverLongWindow) {
    const int n = 32;
    const auto X = sample_matrix(Dist::ginibre, n, 15, 0);
    const double gc = 1.3;
    const double rate = growth_rate(gc, rightmost(eigvals(X)).max_re);
    std::vector<cplx> u0(n, 1.0);
    std::vector<std::pair<double, double>> log_sup;
    const double t_end = std::max(40.0, 50.0 / std::abs(rate));
    propagate(X, gc, u0, t_end, 1e-8, &log_sup);
    ASSERT_GT(log_sup.size(), 10u);
    // Slope over the second half removes the transient from non-normality.
    const auto& last = log_sup.back();
    std::size_t mid = 0;
    while (log_sup[mid].first < 0.5 * t_end) ++mid;
    const double slope = (last.second - log_sup[mid].second) / (last.first - log_sup[mid].first);
    EXPECT_NEAR(slope, rate, 1e-2);
}
