#include "rmedge/bessel.hpp"

#include <cmath>

#include "rmedge/quadrature.hpp"

namespace rmedge {

namespace {

constexpr double kOverflow = 700.0;
constexpr double kAsymptotic = 25.0;

struct Q {
    __float128 re, im;
};
Q qmul(Q a, Q b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
Q qadd(Q a, Q b) { return {a.re + b.re, a.im + b.im}; }
Q qscale(Q a, __float128 s) { return {a.re * s, a.im * s}; }
__float128 qabs1(Q a) {
    const __float128 r = a.re < 0 ? -a.re : a.re;
    const __float128 i = a.im < 0 ? -a.im : a.im;
    return r + i;
}

// sum_k q^k / (k! (k+nu)!) in quad precision
Q series_sum(cplx x, int nu) {
    const Q h = {static_cast<__float128>(x.real()) / 2, static_cast<__float128>(x.imag()) / 2};
    const Q q = qmul(h, h);
    Q term = {1, 0};
    for (int k = 1; k <= nu; ++k) term = qscale(term, static_cast<__float128>(1) / k);
    Q sum = term;
    const double ax = std::abs(x);
    for (int k = 1; k < 10000; ++k) {
        term = qscale(qmul(term, q), static_cast<__float128>(1) / (static_cast<__float128>(k) * (k + nu)));
        sum = qadd(sum, term);
        if (k > ax && qabs1(term) <= static_cast<__float128>(1e-34) * qabs1(sum)) break;
    }
    return sum;
}

cplx to_cplx(Q a) { return {static_cast<double>(a.re), static_cast<double>(a.im)}; }

// Trapezoid rule for (1/2pi) int_0^{2pi} e^{x cos t - |Re x|} cos(nu t) dt.
cplx trapezoid_scaled(cplx x, int nu, int m) {
    const double shift = std::abs(x.real());
    cplx sum{};
    for (int j = 0; j < m; ++j) {
        const double t = 2 * M_PI * j / m;
        const double c = std::cos(t);
        cplx v = std::exp(x * c - shift);
        if (nu == 1) v *= c;
        sum += v;
    }
    return sum / static_cast<double>(m);
}

int trapezoid_points(double ax) { return 2 * (static_cast<int>(1.5 * ax) + 24); }

// Hankel expansion for Re x >= 0, scaled by e^{-Re x}.
cplx hankel_scaled(cplx x, int nu) {
    const double mu = 4.0 * nu * nu;
    const cplx inv = 1.0 / x;
    cplx s1 = 1.0, s2 = 1.0;  // sums with (-1)^k and without
    cplx ak = 1.0;
    double best = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double f = (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k);
        const cplx next = ak * f * inv;
        if (std::abs(next) >= best) break;
        best = std::abs(next);
        ak = next;
        s1 += ((k % 2) ? -1.0 : 1.0) * ak;
        s2 += ak;
        if (best < 1e-17) break;
    }
    const cplx pre = 1.0 / std::sqrt(2.0 * M_PI * x);
    const cplx e1 = std::exp(cplx(0, x.imag()));
    const cplx e2 = std::exp(cplx(-2.0 * x.real(), -x.imag()));
    const double sgn = (x.imag() >= 0) ? 1.0 : -1.0;
    const double phase = (nu == 1) ? -1.0 : 1.0;  // e^{+-i nu pi}
    return pre * (e1 * s1 + sgn * phase * cplx(0, 1) * e2 * s2);
}

cplx scaled(cplx x, int nu) {
    if (x == cplx(0)) return nu == 0 ? 1.0 : 0.0;
    double flip = 1.0;
    if (x.real() < 0) {
        x = -x;
        if (nu == 1) flip = -1.0;
    }
    const double ax = std::abs(x);
    if (ax <= kAsymptotic) return flip * trapezoid_scaled(x, nu, trapezoid_points(ax));
    return flip * hankel_scaled(x, nu);
}

cplx unscale(cplx v, cplx x) {
    if (std::abs(x.real()) > kOverflow)
        throw NumericalError("Bessel overflow: |Re x| > 700, use the scaled variant");
    return v * std::exp(std::abs(x.real()));
}

}  // namespace

cplx bessel_I0_scaled(cplx x) { return scaled(x, 0); }
cplx bessel_I1_scaled(cplx x) { return scaled(x, 1); }
cplx bessel_I0(cplx x) { return unscale(bessel_I0_scaled(x), x); }
cplx bessel_I1(cplx x) { return unscale(bessel_I1_scaled(x), x); }

cplx bessel_I0_series(cplx x) {
    if (std::abs(x.real()) > kOverflow) throw NumericalError("Bessel overflow in series");
    return to_cplx(series_sum(x, 0));
}

cplx bessel_I1_series(cplx x) {
    if (std::abs(x.real()) > kOverflow) throw NumericalError("Bessel overflow in series");
    return 0.5 * x * to_cplx(series_sum(x, 1));
}

cplx bessel_I0_integral(cplx x, int nodes) {
    if (nodes < 2) throw ConfigError("integral representation needs >= 2 nodes");
    const double h = M_PI / (nodes - 1);
    cplx sum{};
    for (int j = 0; j < nodes; ++j) {
        const double w = (j == 0 || j == nodes - 1) ? 0.5 : 1.0;
        sum += w * std::exp(x * std::cos(j * h));
    }
    return sum * h / M_PI;
}

cplx bessel_I1_integral(cplx x, int nodes) {
    if (nodes < 2) throw ConfigError("integral representation needs >= 2 nodes");
    const double h = M_PI / (nodes - 1);
    cplx sum{};
    for (int j = 0; j < nodes; ++j) {
        const double w = (j == 0 || j == nodes - 1) ? 0.5 : 1.0;
        const double c = std::cos(j * h);
        sum += w * c * std::exp(x * c);
    }
    return sum * h / M_PI;
}

cplx kernel_KB_quotient(cplx x, cplx y) {
    return (x * bessel_I1(x) * bessel_I0(y) - y * bessel_I1(y) * bessel_I0(x)) / (x * x - y * y);
}

cplx kernel_KB_diag(cplx x) {
    const cplx i0 = bessel_I0(x), i1 = bessel_I1(x);
    return 0.5 * (i0 * i0 - i1 * i1);
}

namespace {

// int_0^1 t^p I0(x t) I_nu(y t) dt e^{-|Re x| - |Re y|}
cplx lommel_scaled(cplx x, cplx y, int p, int nu) {
    const double ax = std::abs(x.real()), ay = std::abs(y.real());
    const int m = 16 + static_cast<int>(std::abs(x) + std::abs(y));
    const Rule& g = gauss_legendre(m);
    cplx sum{};
    for (int k = 0; k < m; ++k) {
        const double t = 0.5 * (g.x[k] + 1.0);
        const cplx b = (nu == 0) ? bessel_I0_scaled(y * t) : bessel_I1_scaled(y * t);
        const double tp = (p == 1) ? t : t * t;
        sum += 0.5 * g.w[k] * tp * bessel_I0_scaled(x * t) * b * std::exp((ax + ay) * (t - 1.0));
    }
    return sum;
}

bool near_diagonal(cplx x, cplx y) {
    const double scale = 1.0 + std::norm(x) + std::norm(y);
    return std::abs(x * x - y * y) < 1e-3 * scale;
}

}  // namespace

cplx kernel_KB_lommel(cplx x, cplx y) {
    return lommel_scaled(x, y, 1, 0) * std::exp(std::abs(x.real()) + std::abs(y.real()));
}

cplx kernel_KB_dy(cplx x, cplx y) {
    return lommel_scaled(x, y, 2, 1) * std::exp(std::abs(x.real()) + std::abs(y.real()));
}

cplx kernel_KB_scaled(cplx x, cplx y) {
    if (near_diagonal(x, y)) return lommel_scaled(x, y, 1, 0);
    const cplx num = x * bessel_I1_scaled(x) * bessel_I0_scaled(y) - y * bessel_I1_scaled(y) * bessel_I0_scaled(x);
    return num / (x * x - y * y);
}

cplx kernel_KB(cplx x, cplx y) {
    const double shift = std::abs(x.real()) + std::abs(y.real());
    if (shift > kOverflow) throw NumericalError("K_B overflow, use kernel_KB_scaled");
    return kernel_KB_scaled(x, y) * std::exp(shift);
}

cplx phase_f(cplx w, double delta) { return w * w + std::log(1.0 + delta - w * w); }

cplx phase_f_prime(cplx w, double delta) { return 2.0 * w - 2.0 * w / (1.0 + delta - w * w); }

}  // namespace rmedge
