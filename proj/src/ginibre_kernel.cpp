#include "rmedge/ginibre_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "rmedge/parallel.hpp"
#include "rmedge/quadrature.hpp"
#include "rmedge/rng.hpp"

namespace rmedge {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

// Neumaier-compensated complex accumulator.
struct CompensatedSum {
    double re = 0, im = 0, cre = 0, cim = 0;
    static void add1(double& s, double& c, double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    void add(cplx x) {
        add1(re, cre, x.real());
        add1(im, cim, x.imag());
    }
    cplx value() const { return {re + cre, im + cim}; }
};

void check_n(std::int64_t n) {
    if (n < 1) throw ConfigError("kernel dimension must be >= 1");
}

}  // namespace

double kernel_diag(std::int64_t n, cplx z) {
    check_n(n);
    const double dn = static_cast<double>(n);
    const double x = dn * std::norm(z);
    // P(a, x) <= x^a / a!; boost overflows tgamma internally there for large a.
    if (x == 0 || dn * std::log(x) - std::lgamma(dn + 1) < -750) return dn / M_PI;
    return dn / M_PI * boost::math::gamma_q(dn, x);
}

double kernel_diag_sum(int n, cplx z) {
    check_n(n);
    const double x = n * std::norm(z);
    if (x == 0) return n / M_PI;
    // Terms exp(k ln x - lgamma(k+1) - x), summed from the peak outwards.
    const double lx = std::log(x);
    const int peak = std::min(n - 1, static_cast<int>(std::floor(x)));
    const double tpeak = std::exp(peak * lx - std::lgamma(peak + 1.0) - x);
    CompensatedSum acc;
    acc.add(tpeak);
    double t = tpeak;
    for (int k = peak + 1; k < n; ++k) {
        t *= x / k;
        acc.add(t);
        if (t < 1e-18 * acc.value().real()) break;
    }
    t = tpeak;
    for (int k = peak; k > 0; --k) {
        t *= k / x;
        acc.add(t);
        if (t < 1e-18 * acc.value().real()) break;
    }
    return n / M_PI * acc.value().real();
}

cplx kernel_offdiag(int n, cplx z, cplx w) {
    check_n(n);
    if (n > kOffdiagCap) throw ConfigError("kernel_offdiag is limited to n <= 2000");
    const cplx a = static_cast<double>(n) * z * std::conj(w);
    const double c = -0.5 * n * (std::norm(z) + std::norm(w));
    if (std::abs(a) == 0) return {n / M_PI * std::exp(c), 0.0};
    const cplx la = std::log(a);
    const int peak = std::min(n - 1, static_cast<int>(std::floor(std::abs(a))));
    const cplx tpeak = std::exp(static_cast<double>(peak) * la - std::lgamma(peak + 1.0) + c);
    CompensatedSum acc;
    acc.add(tpeak);
    const double tiny = 1e-18 * std::abs(tpeak);
    cplx t = tpeak;
    for (int k = peak + 1; k < n; ++k) {
        t *= a / static_cast<double>(k);
        acc.add(t);
        if (std::abs(t) < tiny) break;
    }
    t = tpeak;
    for (int k = peak; k > 0; --k) {
        t *= static_cast<double>(k) / a;
        acc.add(t);
        if (std::abs(t) < tiny) break;
    }
    return n / M_PI * acc.value();
}

Estimate expected_count(std::int64_t n, const std::function<double(cplx)>& f, const Box& support,
                        double tol) {
    check_n(n);
    if (!support.valid()) throw ConfigError("invalid box");
    double worst_inner = 0;
    auto inner = [&](double x) {
        double err = 0;
        const double v = GK::integrate(
            [&](double y) {
                const cplx z{x, y};
                const double fz = f(z);
                return fz == 0 ? 0.0 : fz * kernel_diag(n, z);
            },
            support.y_lo, support.y_hi, 15, tol, &err);
        worst_inner = std::max(worst_inner, err);
        return v;
    };
    double err = 0;
    const double v = GK::integrate(inner, support.x_lo, support.x_hi, 15, tol, &err);
    return {v, err + worst_inner * (support.x_hi - support.x_lo)};
}

Estimate expected_count(std::int64_t n, const Box& box, double tol) {
    // Gauss-Kronrod nodes are interior, so the indicator is 1 on every node.
    return expected_count(n, [](cplx) { return 1.0; }, box, tol);
}

Estimate expected_count_plane(std::int64_t n, double tol) {
    check_n(n);
    const double dn = static_cast<double>(n);
    const double s = 1.0 / std::sqrt(dn);
    // Radial density 2 n r Q(n, n r^2); transition of width ~ n^{-1/2} at r = 1.
    auto radial = [&](double r) { return 2.0 * dn * r * boost::math::gamma_q(dn, dn * r * r); };
    std::vector<double> breaks = {0.0};
    for (double k : {-8.0, -4.0, -2.0, 0.0, 2.0, 4.0, 8.0, 16.0}) {
        const double b = 1.0 + k * s;
        if (b > breaks.back()) breaks.push_back(b);
    }
    breaks.push_back(1.0 + 16.0 * s + 10.0 * std::sqrt(1.0 / dn + s));
    double total = 0, err = 0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        double e = 0;
        total += GK::integrate(radial, breaks[i], breaks[i + 1], 15, tol, &e);
        err += e;
    }
    return {total, err};
}

Estimate expected_count_sector(std::int64_t n, double theta0, double theta1) {
    const Estimate plane = expected_count_plane(n);
    const double frac = (theta1 - theta0) / (2 * M_PI);
    return {plane.value * frac, plane.error * std::abs(frac)};
}

namespace {

// Orthonormal functions phi_k(z) = sqrt(n/pi) (sqrt(n) z)^k / sqrt(k!) e^{-n|z|^2/2}.
void ginibre_basis(int n, cplx z, cplx* out) {
    const double dn = n;
    const double r = std::abs(z);
    const double th = std::arg(z);
    const double base = 0.5 * std::log(dn / M_PI) - 0.5 * dn * r * r;
    if (r == 0) {
        out[0] = std::exp(base);
        for (int k = 1; k < n; ++k) out[k] = 0;
        return;
    }
    const double lr = std::log(std::sqrt(dn) * r);
    for (int k = 0; k < n; ++k) {
        const double lm = base + k * lr - 0.5 * std::lgamma(k + 1.0);
        out[k] = std::polar(std::exp(lm), k * th);
    }
}

VarianceResult variance_tensor(int n, const Box& box, const VarianceOptions& opt) {
    // int int |K|^2 = ||G||_F^2, G_jk = int_B phi_j conj(phi_k): the 4-D tensor rule
    // factorized through the rank-n kernel.
    auto pair_term = [&](int m) {
        const double step = 0.5 / std::sqrt(static_cast<double>(n));
        const int px = std::max(1, static_cast<int>(std::ceil((box.x_hi - box.x_lo) / step)));
        const int py = std::max(1, static_cast<int>(std::ceil((box.y_hi - box.y_lo) / step)));
        const Rule rx = composite(box.x_lo, box.x_hi, px, m);
        const Rule ry = composite(box.y_lo, box.y_hi, py, m);
        const std::size_t N = rx.x.size() * ry.x.size();
        ComplexMatrix Phi(static_cast<Eigen::Index>(N), n);
        for_each_index(N, opt.exec, [&](std::size_t a) {
            const std::size_t i = a / ry.x.size(), j = a % ry.x.size();
            std::vector<cplx> v(n);
            ginibre_basis(n, {rx.x[i], ry.x[j]}, v.data());
            const double sw = std::sqrt(rx.w[i] * ry.w[j]);
            for (int k = 0; k < n; ++k) Phi(static_cast<Eigen::Index>(a), k) = sw * v[k];
        });
        const ComplexMatrix G = Phi.adjoint() * Phi;
        return std::pair<double, double>{G.squaredNorm(), G.trace().real()};
    };
    const auto [J1, D1] = pair_term(opt.tensor_order);
    const auto [J2, D2] = pair_term(opt.tensor_order + 4);
    VarianceResult r;
    r.diag_term = D2;
    r.pair_term = J2;
    r.pair_error = std::abs(J2 - J1);
    r.variance = D2 - J2;
    r.error = std::abs(J2 - J1) + std::abs(D2 - D1);
    return r;
}

VarianceResult variance_mc(int n, const Box& box, const VarianceOptions& opt) {
    // Stratified in z over a cell grid; w = z + xi / sqrt(n), xi ~ CN(0, 1), so the
    // importance weight |K|^2 / q stays of order n / pi.
    const double sn = std::sqrt(static_cast<double>(n));
    const double W = box.x_hi - box.x_lo, H = box.y_hi - box.y_lo;
    const std::size_t target_cells = std::clamp<std::size_t>(opt.mc_nodes / 1000, 1, 4096);
    const int cx = std::max(1, static_cast<int>(std::round(std::sqrt(target_cells * W / H))));
    const int cy = std::max(1, static_cast<int>(std::round(static_cast<double>(target_cells) / cx)));
    const std::size_t cells = static_cast<std::size_t>(cx) * cy;
    const std::size_t per = std::max<std::size_t>(2, opt.mc_nodes / cells);
    const double cw = W / cx, ch = H / cy, carea = cw * ch;
    std::vector<double> mean(cells), var_of_mean(cells);
    for_each_index(cells, opt.exec, [&](std::size_t c) {
        Engine g = make_engine(opt.seed, c, Stream::quadrature);
        const double x0 = box.x_lo + (c % cx) * cw, y0 = box.y_lo + (c / cx) * ch;
        double s = 0, s2 = 0;
        for (std::size_t k = 0; k < per; ++k) {
            const cplx z{x0 + cw * uniform01(g), y0 + ch * uniform01(g)};
            const cplx xi = complex_normal(g);
            const cplx w = z + xi / sn;
            double val = 0;
            if (box.contains(w)) {
                const double q = n / M_PI * std::exp(-std::norm(xi));
                val = std::norm(kernel_offdiag(n, z, w)) / q;
            }
            s += val;
            s2 += val * val;
        }
        const double m = s / per;
        const double sample_var = std::max(0.0, (s2 - per * m * m) / (per - 1));
        mean[c] = carea * m;
        var_of_mean[c] = carea * carea * sample_var / per;
    });
    VarianceResult r;
    const double J = tree_sum(mean);
    const double Jvar = tree_sum(var_of_mean);
    const Estimate E = expected_count(n, box);
    r.diag_term = E.value;
    r.pair_term = J;
    r.pair_error = std::sqrt(Jvar);
    r.variance = E.value - J;
    r.error = r.pair_error + E.error;
    return r;
}

}  // namespace

VarianceResult variance_count(int n, const Box& box, const VarianceOptions& opt) {
    check_n(n);
    if (n > kVarianceCap) throw ConfigError("variance_count is limited to n <= 500");
    if (!box.valid()) throw ConfigError("invalid box");
    if (opt.method == VarianceMethod::tensor) return variance_tensor(n, box, opt);
    if (opt.mc_nodes < 1000) throw ConfigError("variance_count needs >= 1000 MC nodes");
    return variance_mc(n, box, opt);
}

double erf_sinh_reference(double s, double t) { return 2.0 * std::erf(s) * std::sinh(t); }

double tail_count_bound(double t) { return std::exp(-t / 4.0); }

}  // namespace rmedge
