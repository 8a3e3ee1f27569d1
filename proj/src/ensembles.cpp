#include "rmedge/ensembles.hpp"

#include <cmath>

namespace rmedge {

Dist parse_dist(std::string_view name) {
    if (name == "ginibre" || name == "complex-gaussian") return Dist::ginibre;
    if (name == "bernoulli" || name == "bernoulli-phase" || name == "symmetrized-bernoulli-phase")
        return Dist::bernoulli_phase;
    if (name == "circle" || name == "uniform-on-circle") return Dist::uniform_circle;
    if (name == "two-point" || name == "two-point-complex") return Dist::two_point_complex;
    throw ConfigError("unknown distribution '" + std::string(name) + "'");
}

std::string to_string(Dist d) {
    switch (d) {
        case Dist::ginibre: return "ginibre";
        case Dist::bernoulli_phase: return "bernoulli-phase";
        case Dist::uniform_circle: return "uniform-on-circle";
        case Dist::two_point_complex: return "two-point-complex";
    }
    return "?";
}

std::vector<Dist> all_dists() {
    return {Dist::ginibre, Dist::bernoulli_phase, Dist::uniform_circle, Dist::two_point_complex};
}

EntryMoments analytic_moments(Dist d) {
    EntryMoments m{{0, 0}, 1.0, {0, 0}, 1.0};
    if (d == Dist::ginibre) m.abs4 = 2.0;
    return m;
}

cplx draw_entry(Dist d, Engine& g) {
    switch (d) {
        case Dist::ginibre:
            return complex_normal(g);
        case Dist::bernoulli_phase: {
            static constexpr cplx phases[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
            return phases[std::uniform_int_distribution<int>(0, 3)(g)];
        }
        case Dist::uniform_circle:
            return std::polar(1.0, 2.0 * M_PI * uniform01(g));
        case Dist::two_point_complex: {
            const std::uint64_t bits = g();
            const double re = (bits & 1) ? M_SQRT1_2 : -M_SQRT1_2;
            const double im = (bits & 2) ? M_SQRT1_2 : -M_SQRT1_2;
            return {re, im};
        }
    }
    return {};
}

ComplexMatrix sample_matrix(Dist d, int n, std::uint64_t seed, std::uint64_t index) {
    if (n < 1) throw ConfigError("matrix dimension must be >= 1");
    Engine g = make_engine(seed, index, Stream::matrix);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    ComplexMatrix X(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) X(i, j) = scale * draw_entry(d, g);
    return X;
}

ComplexMatrix sample_ginibre_hessenberg(int n, std::uint64_t seed, std::uint64_t index) {
    if (n < 1) throw ConfigError("matrix dimension must be >= 1");
    Engine g = make_engine(seed, index, Stream::matrix);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    ComplexMatrix H = ComplexMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i <= j; ++i) H(i, j) = scale * complex_normal(g);
        if (j + 1 < n) {
            // |h_{j+1,j}|^2 ~ Gamma(n-j-1, 1): norm of the reflected tail.
            std::gamma_distribution<double> tail(static_cast<double>(n - j - 1), 1.0);
            H(j + 1, j) = scale * std::sqrt(tail(g));
        }
    }
    return H;
}

MomentReport moments_selfcheck(Dist d, std::size_t m, std::uint64_t seed) {
    if (m < 1000) throw ConfigError("moments_selfcheck needs m >= 1000");
    Engine g = make_engine(seed, 0, Stream::moments);
    const EntryMoments ref = analytic_moments(d);

    cplx s1{}, s1sq{}, s2c{};
    double sa2 = 0, sa2sq = 0, sa4 = 0, sa4sq = 0;
    double s1re2 = 0, s1im2 = 0, s2re2 = 0, s2im2 = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const cplx x = draw_entry(d, g);
        const double a2 = std::norm(x);
        const cplx x2 = x * x;
        s1 += x;
        s1re2 += x.real() * x.real();
        s1im2 += x.imag() * x.imag();
        sa2 += a2;
        sa2sq += a2 * a2;
        s2c += x2;
        s2re2 += x2.real() * x2.real();
        s2im2 += x2.imag() * x2.imag();
        sa4 += a2 * a2;
        sa4sq += a2 * a2 * a2 * a2;
    }
    const double md = static_cast<double>(m);
    auto se_of = [md](double sum, double sumsq) {
        const double mean = sum / md;
        const double var = std::max(0.0, sumsq / md - mean * mean);
        return std::sqrt(var / md);
    };
    auto se_complex = [&](cplx sum, double re2, double im2) {
        const double a = se_of(sum.real(), re2);
        const double b = se_of(sum.imag(), im2);
        return std::hypot(a, b);
    };

    MomentReport rep;
    rep.dist = d;
    rep.samples = m;
    rep.rows.push_back({"E chi", s1 / md, se_complex(s1, s1re2, s1im2), ref.mean});
    rep.rows.push_back({"E|chi|^2", {sa2 / md, 0}, se_of(sa2, sa2sq), {ref.abs2, 0}});
    rep.rows.push_back({"E chi^2", s2c / md, se_complex(s2c, s2re2, s2im2), ref.pseudo});
    rep.rows.push_back({"E|chi|^4", {sa4 / md, 0}, se_of(sa4, sa4sq), {ref.abs4, 0}});
    rep.pass = true;
    for (auto& r : rep.rows) {
        const double dev = std::abs(r.estimate - r.expected);
        // Degenerate moments (|chi| = 1 surely) have zero spread.
        r.pass = dev <= 4.0 * r.std_error + 1e-12;
        rep.pass = rep.pass && r.pass;
    }
    return rep;
}

}  // namespace rmedge
