#include "rmedge/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace rmedge {

namespace {

Rule build_gauss_legendre(int m) {
    Rule r;
    r.x.resize(m);
    r.w.resize(m);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = 0;
            for (int j = 0; j < m; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * z * p1 - j * p2) / (j + 1);
            }
            dp = m * (z * p0 - p1) / (z * z - 1);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double p0 = 1, p1 = 0;
        for (int j = 0; j < m; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2 * j + 1) * z * p1 - j * p2) / (j + 1);
        }
        dp = m * (z * p0 - p1) / (z * z - 1);
        const double w = 2.0 / ((1 - z * z) * dp * dp);
        r.x[i] = -z;
        r.x[m - 1 - i] = z;
        r.w[i] = r.w[m - 1 - i] = w;
    }
    return r;
}

}  // namespace

const Rule& gauss_legendre(int m) {
    if (m < 1) throw std::invalid_argument("Gauss-Legendre order must be >= 1");
    static std::mutex mu;
    static std::map<int, Rule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, build_gauss_legendre(m)).first;
    return it->second;
}

void append_composite(Rule& out, double a, double b, int panels, int m) {
    const Rule& g = gauss_legendre(m);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        for (int k = 0; k < m; ++k) {
            out.x.push_back(lo + 0.5 * h * (g.x[k] + 1.0));
            out.w.push_back(0.5 * h * g.w[k]);
        }
    }
}

Rule composite(double a, double b, int panels, int m) {
    Rule r;
    append_composite(r, a, b, panels, m);
    return r;
}

}  // namespace rmedge
