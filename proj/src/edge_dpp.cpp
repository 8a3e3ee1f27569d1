#include <cmath>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "rmedge/edge_stats.hpp"

namespace rmedge {

namespace {

struct AnnulusBasis {
    std::vector<int> k;
    std::vector<double> log_c;  // log c_k, with c_k^2 = n^{k+1} / (pi k! p_k)
    std::vector<double> p;
};

// Conjugated basis vector at z, normalized to unit length; returns false if it vanishes.
bool unit_vector(const AnnulusBasis& b, int n, cplx z, std::vector<cplx>& u) {
    const double r = std::abs(z);
    if (!(r > 0)) return false;
    const double th = std::arg(z);
    const double lr = std::log(r);
    const std::size_t m = b.k.size();
    std::vector<double> lg(m);
    double top = -INFINITY;
    for (std::size_t j = 0; j < m; ++j) {
        lg[j] = b.log_c[j] + b.k[j] * lr - 0.5 * n * r * r;
        top = std::max(top, lg[j]);
    }
    double nrm = 0;
    for (std::size_t j = 0; j < m; ++j) {
        const double a = std::exp(lg[j] - top);
        u[j] = std::polar(a, -b.k[j] * th);
        nrm += a * a;
    }
    nrm = std::sqrt(nrm);
    if (!(nrm > 0)) return false;
    for (auto& x : u) x /= nrm;
    return true;
}

void project_out(const std::vector<std::vector<cplx>>& q, std::vector<cplx>& u) {
    for (const auto& e : q) {
        cplx dot = 0;
        for (std::size_t j = 0; j < u.size(); ++j) dot += std::conj(e[j]) * u[j];
        for (std::size_t j = 0; j < u.size(); ++j) u[j] -= dot * e[j];
    }
}

double norm2(const std::vector<cplx>& u) {
    double s = 0;
    for (const auto& x : u) s += std::norm(x);
    return s;
}

}  // namespace

std::vector<cplx> sample_ginibre_annulus(int n, double r0, Engine& g) {
    if (n < 1) throw ConfigError("n must be >= 1");
    if (!(r0 >= 0)) throw ConfigError("annulus radius must be >= 0");
    const double x0 = n * r0 * r0;

    AnnulusBasis b;
    for (int k = 0; k < n; ++k) {
        const double pk = x0 > 0 ? boost::math::gamma_q(k + 1.0, x0) : 1.0;
        if (pk > 0 && uniform01(g) < pk) {
            b.k.push_back(k);
            b.p.push_back(pk);
            b.log_c.push_back(0.5 * ((k + 1) * std::log(double(n)) - std::log(M_PI) - std::lgamma(k + 1.0) -
                                     std::log(pk)));
        }
    }
    const std::size_t N = b.k.size();
    std::vector<cplx> pts;
    pts.reserve(N);
    std::vector<std::vector<cplx>> q;
    q.reserve(N);
    std::vector<cplx> u(N);
    std::size_t attempts = 0;
    const std::size_t max_attempts = 10000 * (N + 1) + 1000000;
    while (pts.size() < N) {
        if (++attempts > max_attempts) throw NumericalError("annulus sampler: rejection loop did not terminate");
        // Proposal density |u(z)|^2 / N: a uniform mixture of the |phi_k|^2.
        const std::size_t j = std::min<std::size_t>(N - 1, static_cast<std::size_t>(uniform01(g) * N));
        const int k = b.k[j];
        double v = uniform01(g);
        if (v <= 0) v = 1e-300;
        const double s = boost::math::gamma_q_inv(k + 1.0, v * b.p[j]) / n;
        const cplx z = std::polar(std::sqrt(s), 2.0 * M_PI * uniform01(g));
        if (std::abs(z) <= r0) continue;
        if (!unit_vector(b, n, z, u)) continue;
        project_out(q, u);
        const double acc = norm2(u);
        if (uniform01(g) >= acc) continue;
        project_out(q, u);  // second pass only for accepted points
        const double nr = std::sqrt(norm2(u));
        for (auto& x : u) x /= nr;
        q.push_back(u);
        pts.push_back(z);
    }
    return pts;
}

}  // namespace rmedge
