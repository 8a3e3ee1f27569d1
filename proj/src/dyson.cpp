#include "rmedge/dyson.hpp"

#include <cmath>
#include <limits>

namespace rmedge {

namespace {

double cubic(double v, double eta, double delta) {
    const double a = v + eta;
    return v * a * a + delta * v - eta;
}

double cubic_prime(double v, double eta, double delta) {
    return 3 * v * v + 4 * eta * v + eta * eta + delta;
}

DysonPoint finish(cplx z, double eta, double v, double delta, double u) {
    DysonPoint p;
    p.z = z;
    p.eta = eta;
    p.v = v;
    p.delta = delta;
    p.u = u;
    p.mfrak = -z * u;
    return p;
}

}  // namespace

DysonPoint solve_m(cplx z, double eta) {
    if (!(eta >= 0) || !std::isfinite(eta)) throw ConfigError("eta must be >= 0");
    const double z2 = std::norm(z);
    const double delta = z2 - 1.0;
    if (eta == 0) {
        if (delta == 0) throw ConfigError("eta = 0 with |z| = 1 is degenerate");
        if (delta < 0) return finish(z, 0, std::sqrt(-delta), delta, 1.0);
        return finish(z, 0, 0.0, delta, 1.0 / z2);
    }

    // p(0) = -eta < 0 and p is increasing past its single positive root.
    double lo = 0, hi = 1.0 / eta + 1.0;
    while (cubic(hi, eta, delta) <= 0) hi *= 2;
    double v = (delta > 0) ? std::min(eta / delta, 0.5 * hi) : 0.5 * hi;
    if (v <= lo || v >= hi) v = 0.5 * (lo + hi);

    for (int it = 0; it < 400; ++it) {
        const double p = cubic(v, eta, delta);
        if (p == 0) break;
        (p < 0 ? lo : hi) = v;
        const double dp = cubic_prime(v, eta, delta);
        double next = v - p / dp;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - v) <= 2 * std::numeric_limits<double>::epsilon() * v) {
            v = next;
            break;
        }
        v = next;
        if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * hi) break;
    }
    return finish(z, eta, v, delta, v / (eta + v));
}

double cubic_residual(const DysonPoint& p) {
    const double v = p.v, e = p.eta;
    return std::abs(v * v * v + 2 * e * v * v + (e * e + p.delta) * v - e);
}

double self_consistency_residual(const DysonPoint& p) {
    const cplx w{0, p.eta};
    const cplx m{0, p.v};
    if (p.v == 0) return 0;
    const cplx lhs = -1.0 / m;
    const cplx rhs = w + m - std::norm(p.z) / (w + m);
    return std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
}

Eigen::Matrix2cd m_matrix(const DysonPoint& p) {
    Eigen::Matrix2cd M;
    M << cplx(0, p.v), p.mfrak, std::conj(p.mfrak), cplx(0, p.v);
    return M;
}

double scaling_regime(cplx z, double eta) {
    const double d = std::abs(1.0 - std::norm(z));
    if (std::abs(z) <= 1.0) return std::cbrt(eta) + std::sqrt(d);
    return eta / (d + std::pow(eta, 2.0 / 3.0));
}

LocalLawProbe local_law_residual(const SingularSpectrum& S, double eta) {
    if (!(eta > 0)) throw ConfigError("eta must be positive");
    const double n = static_cast<double>(S.values.size());
    const DysonPoint p = solve_m(S.z, eta);
    LocalLawProbe probe;
    probe.z = S.z;
    probe.eta = eta;
    probe.psi = 1.0 / (n * eta);
    probe.residual = std::abs(avg_trace_G(S, eta) - cplx(0, p.v));
    return probe;
}

LocalLawProbe local_law_residual(const ComplexMatrix& X, cplx z, double eta) {
    return local_law_residual(shifted_singulars(X, z), eta);
}

}  // namespace rmedge
