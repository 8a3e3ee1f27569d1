#include "rmedge/edge_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rmedge/parallel.hpp"
#include "rmedge/stats.hpp"

namespace rmedge {

double gamma_n(double n) {
    if (!(n >= 3)) throw ConfigError("gamma_n needs n >= 3");
    const double ln = std::log(n);
    return 0.5 * (ln - 5.0 * std::log(ln) - std::log(2.0 * std::pow(M_PI, 4)));
}

EdgeSample rightmost(const std::vector<cplx>& points, double theta, int n) {
    if (points.empty()) throw ConfigError("rightmost of an empty spectrum");
    const cplx rot = std::polar(1.0, theta);
    EdgeSample e;
    e.max_re = -std::numeric_limits<double>::infinity();
    for (const cplx& s : points) {
        const cplx r = rot * s;
        if (r.real() > e.max_re) {
            e.max_re = r.real();
            e.argmax = r;
        }
        e.rho = std::max(e.rho, std::abs(s));
    }
    if (n >= 3) {
        const double g = gamma_n(n);
        if (g > 0) e.gumbel_g = std::sqrt(4.0 * n * g) * (e.max_re - 1.0 - std::sqrt(g / (4.0 * n)));
    }
    return e;
}

EdgeSample rightmost(const Spectrum& spec, double theta, int n) { return rightmost(spec.values, theta, n); }

double default_annulus_radius(int n) { return std::max(0.0, 1.0 - 3.0 / std::sqrt(static_cast<double>(n))); }

std::vector<cplx> edge_sample_points(Dist d, int n, std::uint64_t seed, std::uint64_t index, EdgeMethod method,
                                     double r0) {
    if (method == EdgeMethod::automatic) method = (d == Dist::ginibre) ? EdgeMethod::annulus_dpp : EdgeMethod::dense;
    if (method != EdgeMethod::dense && d != Dist::ginibre)
        throw ConfigError("hessenberg and annulus methods are Ginibre-only");
    switch (method) {
        case EdgeMethod::dense:
            return eigvals(sample_matrix(d, n, seed, index)).values;
        case EdgeMethod::hessenberg:
            return eigvals_hessenberg(sample_ginibre_hessenberg(n, seed, index)).values;
        default: {
            Engine g = make_engine(seed, index, Stream::edge);
            return sample_ginibre_annulus(n, r0 < 0 ? default_annulus_radius(n) : r0, g);
        }
    }
}

std::vector<EdgeSample> mc_edge_ensemble(Dist d, int n, std::size_t samples, std::uint64_t seed,
                                         const EdgeOptions& opt) {
    if (n < 1) throw ConfigError("n must be >= 1");
    EdgeMethod method = opt.method;
    if (method == EdgeMethod::automatic) method = (d == Dist::ginibre) ? EdgeMethod::annulus_dpp : EdgeMethod::dense;
    const double r0 = opt.r0 < 0 ? default_annulus_radius(n) : opt.r0;
    std::vector<EdgeSample> out(samples);
    for_each_index(samples, opt.exec, [&](std::size_t i) {
        if (method == EdgeMethod::annulus_dpp) {
            const auto pts = edge_sample_points(d, n, seed, i, method, r0);
            if (!pts.empty()) {
                EdgeSample e = rightmost(pts, opt.theta, n);
                if (e.max_re >= r0) {
                    out[i] = e;
                    return;
                }
            }
            out[i] = rightmost(edge_sample_points(d, n, seed, i, EdgeMethod::hessenberg), opt.theta, n);
            out[i].fallback = true;
            return;
        }
        out[i] = rightmost(edge_sample_points(d, n, seed, i, method), opt.theta, n);
    });
    return out;
}

double gumbel_cdf(double t) { return std::exp(-std::exp(-t)); }

GumbelFit gumbel_fit(const std::vector<double>& values) {
    if (values.size() < 100) throw ConfigError("gumbel_fit needs >= 100 values");
    const double m = mean(values);
    const double sd = std::sqrt(sample_variance(values));
    if (!(sd > 0) || !std::isfinite(sd)) throw ConfigError("gumbel_fit: degenerate (constant) input");
    std::vector<double> y(values.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = (values[i] - m) / sd;
    const double ymin = *std::min_element(y.begin(), y.end());

    // Profile likelihood equation for the scale: b - mean(y) + sum y e^{-y/b} / sum e^{-y/b} = 0.
    auto weighted = [&](double b) {
        double num = 0, den = 0;
        for (double v : y) {
            const double w = std::exp(-(v - ymin) / b);
            num += v * w;
            den += w;
        }
        return std::pair<double, double>{num / den, den};
    };
    auto eq = [&](double b) { return b + weighted(b).first; };  // mean(y) = 0
    double lo = 1e-6, hi = 1.0;
    while (eq(hi) <= 0) hi *= 2;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (eq(mid) < 0 ? lo : hi) = mid;
    }
    const double b = 0.5 * (lo + hi);
    const double den = weighted(b).second;
    const double loc = ymin - b * std::log(den / y.size());

    GumbelFit fit;
    fit.location = m + sd * loc;
    fit.scale = sd * b;
    fit.ks_distance = ks_one_sample(values, [&](double x) { return gumbel_cdf((x - fit.location) / fit.scale); });
    return fit;
}

std::size_t count_in_box(const std::vector<cplx>& points, const Box& box) {
    if (!box.valid()) throw ConfigError("invalid box");
    std::size_t c = 0;
    for (const cplx& z : points) c += box.contains(z) ? 1 : 0;
    return c;
}

std::size_t count_in_box(const Spectrum& spec, const Box& box) { return count_in_box(spec.values, box); }

OmegaBoxes omega_boxes(int n, double Cn, double tau) {
    if (n < 3) throw ConfigError("omega_boxes needs n >= 3");
    const double g = gamma_n(n);
    if (!(g > 0)) throw ConfigError("gamma_nonpositive");
    const double dn = n;
    const double height = std::pow(dn, tau / 2.0) / std::pow(dn, 0.25);
    const double reach = std::pow(dn, tau) / std::sqrt(dn);
    const double L = 1.0 + std::sqrt(g / (4.0 * dn));
    const double l = Cn / std::sqrt(4.0 * dn * g);
    OmegaBoxes b;
    b.omega0 = {1.0 - reach, 1.0 + reach, -height, height};
    b.omega1 = {L - l, L + l, -height, height};
    b.omega2 = {L + l, 1.0 + reach, -height, height};
    return b;
}

}  // namespace rmedge
