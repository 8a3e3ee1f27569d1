#include "rmedge/tail_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rmedge/bessel.hpp"
#include "rmedge/ensembles.hpp"
#include "rmedge/parallel.hpp"
#include "rmedge/quadrature.hpp"
#include "rmedge/spectral.hpp"
#include "tail_internal.hpp"

namespace rmedge {

double TailParams::z() const { return std::sqrt(1.0 + delta); }

void validate(const TailParams& p) {
    if (p.n < 1) throw ConfigError("tail kernel needs n >= 1");
    if (!(p.delta > 0)) throw ConfigError("tail kernel needs delta > 0");
    if (p.n_delta2() > 50) throw ConfigError("n delta^2 > 50 underflows the physical scale");
}

namespace {

struct ZetaNode {
    cplx zeta;
    cplx weight;    // quadrature weight times d zeta / dt with orientation
    cplx log_fac;   // -n f(zeta) + |Re x|
    cplx x, i0s, i1s;
};

struct WNode {
    double s;
    double weight;
    double log_fac;  // n f(i s), real
    cplx y, i0, i1;  // y = 2 n i s sqrt(u); Re y = 0 so no scaling
};

cplx kb_parts(const ZetaNode& a, const WNode& b) {
    const cplx d = a.x * a.x - b.y * b.y;
    if (std::abs(d) < 1e-3 * (1.0 + std::norm(a.x) + std::norm(b.y))) return kernel_KB_scaled(a.x, b.y);
    return (a.x * a.i1s * b.i0 - b.y * b.i1 * a.i0s) / d;
}

KernelValue contour_route(const TailParams& p, double u, const ContourSpec& c) {
    const int n = p.n;
    const double delta = p.delta, sd = std::sqrt(delta), su = std::sqrt(u);
    const double a2 = 1.0 + delta;
    if (!(su < sd)) throw ConfigError("ray contour diverges for u >= delta; use the residue route");
    const int m = std::max(4, c.nodes_per_panel);
    const Rule& g = gauss_legendre(m);

    // zeta rays
    const double kappa = 2.0 * n * (sd - su);
    std::vector<ZetaNode> zn;
    double peak = -std::numeric_limits<double>::infinity();
    double t = 0, t_end = 0;
    const double t_limit = (c.t_max > 0) ? c.t_max : std::numeric_limits<double>::infinity();
    while (t < t_limit) {
        double dt = std::min(c.drop / (8.0 * kappa), 8.0 / (2.0 * n * (sd + 2.0 * t) + 1.0));
        if (c.t_max > 0) dt = std::min(dt, c.t_max - t);
        double panel_max = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < m; ++k) {
            const double tk = t + 0.5 * dt * (g.x[k] + 1.0);
            const double wk = 0.5 * dt * g.w[k];
            for (int side = 0; side < 2; ++side) {
                const cplx dir = side ? cplx(1, 1) : cplx(1, -1);
                // counterclockwise around +sqrt(1+delta): out along 1-i, back along 1+i
                const cplx orient = side ? -dir : dir;
                ZetaNode z;
                z.zeta = sd + tk * dir;
                z.weight = wk * orient;
                z.x = 2.0 * n * z.zeta * su;
                z.i0s = bessel_I0_scaled(z.x);
                z.i1s = bessel_I1_scaled(z.x);
                z.log_fac = -static_cast<double>(n) * phase_f(z.zeta, delta) + std::abs(z.x.real());
                panel_max = std::max(panel_max, z.log_fac.real() + std::log(std::abs(z.zeta)));
                zn.push_back(z);
            }
        }
        peak = std::max(peak, panel_max);
        t += dt;
        t_end = t;
        if (c.t_max <= 0 && panel_max < peak - c.drop) break;
        if (t > 1e4) throw NumericalError("zeta contour failed to decay");
    }

    // w = i s
    std::vector<WNode> wn;
    const double width = 1.0 / std::sqrt(std::max(1e-12, n * delta / a2));
    double s = 0, s_end = 0, wpeak = -std::numeric_limits<double>::infinity();
    const double s_limit = (c.s_max > 0) ? c.s_max : std::numeric_limits<double>::infinity();
    while (s < s_limit) {
        double ds = std::min(width / 4.0, 6.0 / (2.0 * n * su + 1.0));
        if (c.s_max > 0) ds = std::min(ds, c.s_max - s);
        double panel_max = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < m; ++k) {
            WNode w;
            w.s = s + 0.5 * ds * (g.x[k] + 1.0);
            w.weight = 0.5 * ds * g.w[k];
            w.log_fac = n * (-w.s * w.s + std::log(a2 + w.s * w.s));
            w.y = cplx(0.0, 2.0 * n * w.s * su);
            w.i0 = bessel_I0_scaled(w.y);
            w.i1 = bessel_I1_scaled(w.y);
            panel_max = std::max(panel_max, w.log_fac + std::log(std::max(w.s, 1e-300)));
            wn.push_back(w);
        }
        wpeak = std::max(wpeak, panel_max);
        s += ds;
        s_end = s;
        if (c.s_max <= 0 && panel_max < wpeak - c.drop) break;
        if (s > 1e4) throw NumericalError("w contour failed to decay");
    }

    double shift_z = -std::numeric_limits<double>::infinity(), shift_w = shift_z;
    for (const auto& z : zn) shift_z = std::max(shift_z, z.log_fac.real());
    for (const auto& w : wn) shift_w = std::max(shift_w, w.log_fac);

    cplx total{};
    for (const auto& z : zn) {
        const cplx ez = std::exp(z.log_fac - shift_z) * z.weight * z.zeta;
        const cplx rz = a2 - z.zeta * z.zeta;
        cplx inner{};
        for (const auto& w : wn) {
            const cplx wv(0.0, w.s);
            const cplx ratio = 1.0 - a2 / ((a2 - wv * wv) * rz);
            inner += std::exp(w.log_fac - shift_w) * w.weight * wv * kb_parts(z, w) * ratio;
        }
        total += ez * inner;
    }
    // dw = i ds; two mirror wedges; prefactor 2 n^3 / (i pi)
    const double dn = n;
    const cplx K = std::exp(shift_z + shift_w) * total * cplx(0, 1) * 4.0 * dn * dn * dn / cplx(0, M_PI);

    KernelValue out;
    out.value = K.real();
    out.imag_residue = std::abs(K.imag());
    out.route = KernelRoute::contour;
    out.t_max = t_end;
    out.s_max = s_end;
    const double scale = std::max(std::abs(K.real()), 1e-300);
    if (out.imag_residue > 1e-8 * scale + 1e-14)
        throw NumericalError("contour-resolution error: imaginary residue " + std::to_string(out.imag_residue));
    return out;
}

KernelValue residue_route(const TailParams& p, double u) {
    const int n = p.n;
    const double root = n * std::sqrt(u);
    int bits = 32 * static_cast<int>(std::ceil((96.0 + 2.0 * root + 0.5 * n) / 32.0));
    int nodes = 40 + static_cast<int>(std::ceil(2.4 * root));
    for (int attempt = 0; attempt < 8; ++attempt) {
        const int nodes2 = nodes + nodes / 4 + 8;
        const double v1 = detail::kernel_Y_residue(n, p.delta, u, bits, nodes);
        const double v2 = detail::kernel_Y_residue(n, p.delta, u, bits + 64, nodes2);
        const double err = std::abs(v1 - v2);
        if (std::isfinite(v2) && err <= 1e-10 * std::abs(v2) + 1e-12 * n) {
            KernelValue out;
            out.value = v2;
            out.error = err;
            out.route = KernelRoute::residue;
            out.bits = bits + 64;
            return out;
        }
        bits = bits * 3 / 2;
        nodes = nodes2;
    }
    throw NumericalError("residue route did not converge");
}

}  // namespace

KernelValue kernel_Y_diag_detail(const TailParams& p, double u, const ContourSpec& c, KernelRoute route) {
    validate(p);
    if (!(u >= 0) || !std::isfinite(u)) throw ConfigError("u must be >= 0");
    if (route == KernelRoute::automatic) {
        if (u > 0.25 * p.delta) return residue_route(p, u);
        try {
            return contour_route(p, u, c);
        } catch (const NumericalError&) {
            return residue_route(p, u);  // ray quadrature did not resolve the cancellation
        }
    }
    if (route == KernelRoute::contour) return contour_route(p, u, c);
    return residue_route(p, u);
}

double kernel_Y_diag(const TailParams& p, double u, const ContourSpec& c) {
    return kernel_Y_diag_detail(p, u, c).value;
}

double kernel_Y_support_end(const TailParams& p) {
    const double r = p.z() + 2.0;
    return 1.05 * r * r;
}

Estimate kernel_Y_integral(const TailParams& p, double u0, double u1, int panels, Exec exec) {
    validate(p);
    if (!(u1 > u0) || u0 < 0) throw ConfigError("need 0 <= u0 < u1");
    if (panels < 1) throw ConfigError("panels must be >= 1");
    // Cubic grading toward u0: the kernel varies on the scale 1/n^2 near the hard edge.
    Rule hi, lo;
    for (int k = 0; k < panels; ++k) {
        const double a = u0 + (u1 - u0) * std::pow(double(k) / panels, 3);
        const double b = u0 + (u1 - u0) * std::pow(double(k + 1) / panels, 3);
        append_composite(hi, a, b, 1, 10);
        append_composite(lo, a, b, 1, 7);
    }
    std::vector<double> vh(hi.x.size()), vl(lo.x.size());
    const std::size_t total = hi.x.size() + lo.x.size();
    for_each_index(total, exec, [&](std::size_t k) {
        if (k < hi.x.size())
            vh[k] = hi.w[k] * kernel_Y_diag(p, hi.x[k]);
        else
            vl[k - hi.x.size()] = lo.w[k - hi.x.size()] * kernel_Y_diag(p, lo.x[k - hi.x.size()]);
    });
    const double a = tree_sum(vh), b = tree_sum(vl);
    return {a, std::abs(a - b)};
}

double tail_probability_bound(const TailParams& p, double y) {
    const double c = p.n_delta2();
    return y * y * std::pow(c, 4.0 / 3.0) * std::exp(-c / 2.0);
}

bool tail_bound_regime(const TailParams& p, double y, double C) { return y <= C / p.n_delta2(); }

WilsonInterval wilson_interval(std::size_t hits, std::size_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(trials);
    const double ph = hits / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (ph + z2 / (2 * nn)) / denom;
    const double half = z * std::sqrt(ph * (1 - ph) / nn + z2 / (4 * nn * nn)) / denom;
    // The bounds are exactly 0 and 1 at the extremes; the formula only gets there up to rounding.
    return {hits == 0 ? 0.0 : std::max(0.0, center - half), hits == trials ? 1.0 : std::min(1.0, center + half)};
}

std::vector<double> smallest_singular_samples(const TailParams& p, std::size_t samples, std::uint64_t seed,
                                              Exec exec) {
    if (p.n < 1 || !(p.delta > 0)) throw ConfigError("tail sampling needs n >= 1 and delta > 0");
    std::vector<double> out(samples);
    const cplx z(p.z(), 0.0);
    for_each_index(samples, exec, [&](std::size_t i) {
        const ComplexMatrix X = sample_matrix(Dist::ginibre, p.n, seed, i);
        out[i] = shifted_singulars(X, z).values.front();
    });
    return out;
}

TailReport tail_mc(const TailParams& p, const std::vector<double>& y_grid, std::size_t samples,
                   std::uint64_t seed, Exec exec, bool with_kernel) {
    if (samples == 0) throw ConfigError("tail_mc needs samples > 0");
    TailReport rep;
    rep.params = p;
    rep.samples = samples;
    rep.lambda1 = smallest_singular_samples(p, samples, seed, exec);
    std::vector<double> sorted = rep.lambda1;
    std::sort(sorted.begin(), sorted.end());
    const double scale = std::pow(p.delta, 1.5);
    for (double y : y_grid) {
        TailRow r;
        r.y = y;
        const double thr = y * scale;
        r.hits = static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), thr) - sorted.begin());
        r.mc_p = static_cast<double>(r.hits) / samples;
        r.ci = wilson_interval(r.hits, samples);
        r.bound = tail_probability_bound(p, y);
        r.in_regime = tail_bound_regime(p, y);
        if (with_kernel && y > 0) r.kernel_integral = kernel_Y_integral(p, 0.0, thr * thr, 1, exec).value;
        rep.rows.push_back(r);
    }
    return rep;
}

}  // namespace rmedge
