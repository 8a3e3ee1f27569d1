#include <climits>
#include <cmath>
#include <vector>

#include "mpfr_real.hpp"
#include "rmedge/quadrature.hpp"
#include "tail_internal.hpp"

namespace rmedge::detail {

namespace {

// I_0 .. I_top at x: series for the two highest orders, then backward recurrence
// (stable for I_nu in the decreasing-order direction).
void bessel_orders(int top, const Real& x, std::vector<Real>& I) {
    I.assign(top + 1, Real());
    if (x.is_zero()) {
        I[0] = Real(1);
        return;
    }
    const long bits = static_cast<long>(Real::precision());
    auto series = [&](int nu) {
        const Real q = x * x / 4;
        Real t(1);
        for (int k = 1; k <= nu; ++k) t = t * x / (2L * k);
        Real s = t;
        for (long k = 1; k < 1000000; ++k) {
            t = t * q / (k * (k + nu));
            s += t;
            if (t.exponent() < s.exponent() - bits - 4) break;
        }
        return s;
    };
    I[top] = series(top);
    I[top - 1] = series(top - 1);
    for (int i = top - 1; i >= 1; --i) I[i - 1] = I[i + 1] + Real(2L * i) / x * I[i];
}

}  // namespace

// K_n(u,u) = 4 n^3 int_0^1 t [A_0 B_0 - a^2 A_1 B_1] dt, a^2 = 1 + delta, where
// after closing both contours on their poles
//   A_k = (-1)^N / (N-1)! e^{-n a^2} sum_i C(N-1,i) (-n)^{N-1-i} (c/2a)^i I_i(c a),  N = n + k,
//   B_k = -(1/2n) e^{-x} sum_j C(m,j) a^{2(m-j)} j! n^{-j} L_j(x),                 m = n - k,
// with c = 2 n sqrt(u) t and x = n u t^2.
double kernel_Y_residue(int n, double delta, double u, int bits, int nodes) {
    Real::precision() = bits;
    const Real nn(static_cast<long>(n));
    const Real a2 = Real(1) + Real(delta);
    const Real a = sqrt(a2);
    const Real su = sqrt(Real(u));
    const Real ena = exp(-(nn * a2));

    std::vector<Real> a2pow(n + 1);
    a2pow[0] = Real(1);
    for (int i = 1; i <= n; ++i) a2pow[i] = a2pow[i - 1] * a2;
    std::vector<Real> npow(n + 1);  // (-n)^i
    npow[0] = Real(1);
    for (int i = 1; i <= n; ++i) npow[i] = npow[i - 1] * (-nn);
    std::vector<Real> fact(n + 1);  // k!
    fact[0] = Real(1);
    for (int i = 1; i <= n; ++i) fact[i] = fact[i - 1] * static_cast<long>(i);

    const Rule& g = gauss_legendre(nodes);
    std::vector<Real> I;
    double total = 0;
    for (int q = 0; q < nodes; ++q) {
        const Real t((g.x[q] + 1.0) / 2.0);
        const Real c = Real(2L * n) * su * t;
        const Real x = c * c / (4L * n);
        bessel_orders(n + 1, c * a, I);
        const Real r = c / (Real(2) * a);

        auto A = [&](int k) {
            const int N = n + k;
            Real s, bin(1), rp(1);
            for (int i = 0; i < N; ++i) {
                s += bin * npow[N - 1 - i] * rp * I[i];
                bin = bin * static_cast<long>(N - 1 - i) / static_cast<long>(i + 1);
                rp *= r;
            }
            Real out = ena * s / fact[N - 1];
            return (N % 2) ? -out : out;
        };
        auto B = [&](int k) {
            const int m = n - k;
            Real Lm1, L(1), s, bin(1), fj(1);
            for (int j = 0; j <= m; ++j) {
                s += bin * a2pow[m - j] * fj * L;
                Real Ln = (Real(2L * j + 1) - x) * L - Real(static_cast<long>(j)) * Lm1;
                Ln /= static_cast<long>(j + 1);
                Lm1 = L;
                L = Ln;
                bin = bin * static_cast<long>(m - j) / static_cast<long>(j + 1);
                fj = fj * static_cast<long>(j + 1) / nn;
            }
            return -(exp(-x) * s) / (2L * n);
        };
        const Real val = t * (A(0) * B(0) - a2 * A(1) * B(1));
        total += 0.5 * g.w[q] * val.to_double();
    }
    return total * 4.0 * n * n * static_cast<double>(n);
}

}  // namespace rmedge::detail
