#include "rmedge/girko.hpp"

#include <algorithm>
#include <cmath>

#include "rmedge/edge_stats.hpp"
#include "rmedge/parallel.hpp"
#include "rmedge/quadrature.hpp"

namespace rmedge {

namespace {

double S0(double s) { return s * s * s * (10 + s * (-15 + 6 * s)); }
double S1(double s) { return 30 * s * s * (1 - s) * (1 - s); }
double S2(double s) { return 60 * s * (1 - s) * (1 - 2 * s); }

// Panel breakpoints along one profile: band, plateau, band; `inner` marks plateau panels.
struct AxisPanels {
    std::vector<double> edges;
    std::vector<char> inner;
};

AxisPanels axis_panels(const Profile& p, int level) {
    AxisPanels ax;
    const int band_panels = 1 << level;
    const int plateau_panels =
        std::max(1, static_cast<int>(std::ceil(2 * p.a / p.w - 1e-9))) * band_panels;
    ax.edges.push_back(p.c - p.a - p.w);
    auto add = [&](double b, int panels, bool inner) {
        const double a = ax.edges.back();
        for (int k = 1; k <= panels; ++k) {
            ax.edges.push_back(k == panels ? b : a + (b - a) * k / panels);
            ax.inner.push_back(inner ? 1 : 0);
        }
    };
    add(p.c - p.a, band_panels, false);
    if (p.a > 0) add(p.c + p.a, plateau_panels, true);
    add(p.c + p.a + p.w, band_panels, false);
    return ax;
}

struct Panel {
    double x0, x1, y0, y1;
    int depth;
};

// Panels tiling supp(Delta f) with band boundaries on panel edges.
std::vector<Panel> laplacian_panels(const CutoffFunction& f, int level) {
    const AxisPanels ax = axis_panels(f.gx, level);
    const AxisPanels ay = axis_panels(f.hy, level);
    std::vector<Panel> out;
    for (std::size_t i = 0; i + 1 < ax.edges.size(); ++i)
        for (std::size_t j = 0; j + 1 < ay.edges.size(); ++j) {
            if (ax.inner[i] && ay.inner[j]) continue;
            out.push_back({ax.edges[i], ax.edges[i + 1], ay.edges[j], ay.edges[j + 1], 0});
        }
    return out;
}

struct Node {
    cplx z;
    double weight;  // quadrature weight times Delta f(z)
};

std::vector<Node> panel_nodes(const CutoffFunction& f, const Panel& p, int m) {
    const Rule& g = gauss_legendre(m);
    const double hx = 0.5 * (p.x1 - p.x0), hy = 0.5 * (p.y1 - p.y0);
    std::vector<Node> nodes;
    nodes.reserve(m * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const cplx z{p.x0 + hx * (g.x[i] + 1), p.y0 + hy * (g.x[j] + 1)};
            const double lap = f.laplacian(z);
            if (lap != 0) nodes.push_back({z, hx * hy * g.w[i] * g.w[j] * lap});
        }
    return nodes;
}

std::vector<Node> laplacian_nodes(const CutoffFunction& f, int level, int m) {
    std::vector<Node> nodes;
    for (const Panel& p : laplacian_panels(f, level)) {
        const auto pn = panel_nodes(f, p, m);
        nodes.insert(nodes.end(), pn.begin(), pn.end());
    }
    return nodes;
}

}  // namespace

double Profile::value(double t) const {
    const double d = std::abs(t - c);
    if (d <= a) return 1;
    if (d >= a + w) return 0;
    return std::clamp(S0((a + w - d) / w), 0.0, 1.0);
}

double Profile::d1(double t) const {
    const double d = std::abs(t - c);
    if (d <= a || d >= a + w) return 0;
    const double sign = (t > c) ? -1.0 : 1.0;
    return sign * S1((a + w - d) / w) / w;
}

double Profile::d2(double t) const {
    const double d = std::abs(t - c);
    if (d <= a || d >= a + w) return 0;
    return S2((a + w - d) / w) / (w * w);
}

cplx CutoffFunction::gradient(cplx z) const {
    return {gx.d1(z.real()) * hy.value(z.imag()), gx.value(z.real()) * hy.d1(z.imag())};
}

double CutoffFunction::laplacian(cplx z) const {
    const double x = z.real(), y = z.imag();
    return gx.d2(x) * hy.value(y) + gx.value(x) * hy.d2(y);
}

double CutoffFunction::laplacian_l1_bound() const {
    return gx.d2_l1() * hy.integral() + gx.integral() * hy.d2_l1();
}

double laplacian(const CutoffFunction& f, cplx z) { return f.laplacian(z); }

CutoffFunction build_cutoff(CutoffKind kind, int n, double Cn, double tau,
                            std::optional<CutoffOverride> geometry) {
    CutoffFunction f;
    f.kind = kind;
    f.n = n;
    f.Cn = Cn;
    f.tau = tau;
    if (geometry) {
        if (!(geometry->l > 0) || !(geometry->h > 0))
            throw ConfigError("cutoff override needs l > 0 and h > 0");
        f.geometry_override = true;
        f.L = geometry->L;
        f.l = geometry->l;
        f.h = geometry->h;
        if (kind == CutoffKind::lower) {
            f.gx = {f.L, 0.8 * f.l, 0.2 * f.l};
            f.hy = {0.0, 0.8 * f.h, 0.2 * f.h};
        } else {
            f.gx = {f.L, f.l, 0.2 * f.l};
            f.hy = {0.0, f.h, 0.2 * f.h};
        }
        return f;
    }
    if (n < 3) throw ConfigError("cutoff geometry needs n >= 3");
    const double g = gamma_n(n);
    if (!(g > 0)) throw ConfigError("gamma_nonpositive");
    const double dn = static_cast<double>(n);
    f.L = 1 + std::sqrt(g / (4 * dn));
    f.l = Cn / std::sqrt(4 * dn * g);
    f.h = std::pow(dn, -0.25 + tau / 2);
    if (kind == CutoffKind::lower) {
        f.gx = {f.L, 0.8 * f.l, 0.2 * f.l};
        f.hy = {0.0, 0.8 * f.h, 0.2 * f.h};
    } else {
        // Omega_2 x-range [L + l, 1 + n^tau / sqrt n], widened by l/5.
        const double left = f.L + f.l;
        const double right = 1 + std::pow(dn, tau) / std::sqrt(dn);
        if (!(right > left)) throw ConfigError("Omega_2 is empty for these parameters");
        f.gx = {0.5 * (left + right), 0.5 * (right - left), 0.2 * f.l};
        f.hy = {0.0, f.h, 0.2 * f.h};
    }
    return f;
}

double eta_integral_exact(const SingularSpectrum& S, double eta_a, double eta_b) {
    if (!(eta_a >= 0) || !(eta_b > eta_a)) throw ConfigError("need 0 <= eta_a < eta_b");
    const double a2 = eta_a * eta_a, b2 = eta_b * eta_b;
    double sum = 0;
    for (double s : S.values) {
        const double s2 = s * s;
        if (eta_a == 0 && s2 == 0) throw NumericalError("resolvent_divergent");
        // ln((s^2 + b^2)/(s^2 + a^2)), kept accurate when eta_b^2 >> s^2.
        sum += std::log(s2 + b2) - std::log(s2 + a2);
    }
    return sum;
}

double logdet_term(const SingularSpectrum& S, double T) {
    double sum = 0;
    const double T2 = T * T;
    for (double s : S.values) sum += std::log(s * s + T2);
    return sum;
}

double default_eta0(int n, double tau) { return std::pow(static_cast<double>(n), -7.0 / 8.0 - tau); }

GirkoSplit girko_rhs(const ComplexMatrix& X, const CutoffFunction& f, double eta0, double T,
                     const QuadratureGrid& grid, Exec exec) {
    if (!(eta0 > 0) || !(T > eta0)) throw ConfigError("need 0 < eta0 < T");
    if (grid.nodes_per_panel < 1 || grid.level < 0) throw ConfigError("invalid quadrature grid");
    if (grid.bounds) {
        const Box s = f.support();
        const Box& b = *grid.bounds;
        if (b.x_lo > s.x_lo || b.x_hi < s.x_hi || b.y_lo > s.y_lo || b.y_hi < s.y_hi)
            throw ConfigError("quadrature grid does not cover supp(Delta f)");
    }
    const int max_depth = grid.refine_depth >= 0 ? grid.refine_depth : 2 + 2 * grid.level;
    const double e02 = eta0 * eta0, T2 = T * T;

    // Each round evaluates the pending panels in parallel. s_1(X - z) <= |z - sigma| for every
    // eigenvalue sigma, so a panel with no node where s_1 exceeds its diameter may hold or
    // border an eigenvalue (a log singularity of the integrand) and is split in four.
    struct Contribution {
        double small = 0, large = 0, logdet = 0, direct = 0;
        std::size_t nodes = 0;
        bool split = false;
    };
    std::vector<Panel> pending = laplacian_panels(f, grid.level);
    std::vector<double> small, large, logdet, direct;
    std::size_t node_count = 0, refined = 0;
    while (!pending.empty()) {
        std::vector<Contribution> res(pending.size());
        for_each_index(pending.size(), exec, [&](std::size_t k) {
            const Panel& p = pending[k];
            const double diam = std::hypot(p.x1 - p.x0, p.y1 - p.y0);
            Contribution c;
            double s_min = INFINITY;
            for (const Node& nd : panel_nodes(f, p, grid.nodes_per_panel)) {
                const SingularSpectrum S = shifted_singulars(X, nd.z);
                double a = 0, b = 0, lc = 0, d = 0;
                for (double s : S.values) {
                    const double s2 = s * s;
                    const double l0 = std::log(s2);
                    const double le = std::log(s2 + e02);
                    const double lT = std::log(s2 + T2);
                    a += le - l0;
                    b += lT - le;
                    lc += lT;
                    d += l0;
                }
                s_min = std::min(s_min, S.values.front());
                const double w = nd.weight / (4 * M_PI);
                c.small -= w * a;
                c.large -= w * b;
                c.logdet += w * lc;
                c.direct += w * d;
                ++c.nodes;
            }
            c.split = p.depth < max_depth && c.nodes > 0 && s_min <= diam;
            res[k] = c;
        });
        std::vector<Panel> next;
        for (std::size_t k = 0; k < pending.size(); ++k) {
            node_count += res[k].nodes;
            if (res[k].split) {
                const Panel& p = pending[k];
                const double xm = 0.5 * (p.x0 + p.x1), ym = 0.5 * (p.y0 + p.y1);
                const int d = p.depth + 1;
                next.push_back({p.x0, xm, p.y0, ym, d});
                next.push_back({xm, p.x1, p.y0, ym, d});
                next.push_back({p.x0, xm, ym, p.y1, d});
                next.push_back({xm, p.x1, ym, p.y1, d});
                ++refined;
                continue;
            }
            small.push_back(res[k].small);
            large.push_back(res[k].large);
            logdet.push_back(res[k].logdet);
            direct.push_back(res[k].direct);
        }
        pending = std::move(next);
    }
    GirkoSplit out;
    out.eta0 = eta0;
    out.T = T;
    out.I_small = tree_sum(small);
    out.I_large = tree_sum(large);
    out.logdet_term = tree_sum(logdet);
    out.direct = tree_sum(direct);
    out.nodes = node_count;
    out.refined_panels = refined;
    return out;
}

double girko_lhs(const Spectrum& spec, const CutoffFunction& f) {
    double s = 0;
    for (const cplx& x : spec.values) s += f.value(x);
    return s;
}

double laplacian_l1_norm(const CutoffFunction& f, int level) {
    double s = 0;
    for (const Node& nd : laplacian_nodes(f, level, 8)) s += std::abs(nd.weight);
    return s;
}

double laplacian_integral(const CutoffFunction& f, int level) {
    std::vector<double> w;
    for (const Node& nd : laplacian_nodes(f, level, 8)) w.push_back(nd.weight);
    return tree_sum(w);
}

}  // namespace rmedge
