#pragma once

#include "rmedge/types.hpp"

namespace rmedge {

// Modified Bessel functions of complex argument. I0' = I1.
// Production path: periodic trapezoid rule for |x| <= 25, Hankel expansion above.
cplx bessel_I0(cplx x);
cplx bessel_I1(cplx x);
inline cplx bessel_I0p(cplx x) { return bessel_I1(x); }
// e^{-|Re x|} I_nu(x); never overflows.
cplx bessel_I0_scaled(cplx x);
cplx bessel_I1_scaled(cplx x);

// Power series sum_k (x/2)^{2k} / (k!)^2 accumulated in 113-bit floating point.
cplx bessel_I0_series(cplx x);
cplx bessel_I1_series(cplx x);
// (1/pi) int_0^pi e^{x cos t} dt by the trapezoid rule on `nodes` points.
cplx bessel_I0_integral(cplx x, int nodes = 41);
cplx bessel_I1_integral(cplx x, int nodes = 41);

// K_B(x, y) = (x I0'(x) I0(y) - y I0'(y) I0(x)) / (x^2 - y^2)
cplx kernel_KB(cplx x, cplx y);
// e^{-|Re x| - |Re y|} K_B(x, y)
cplx kernel_KB_scaled(cplx x, cplx y);
// Removable singularity: K_B(x, x) = (I0(x)^2 - I1(x)^2) / 2.
cplx kernel_KB_diag(cplx x);
// Raw quotient without the near-diagonal switch.
cplx kernel_KB_quotient(cplx x, cplx y);
// Lommel form int_0^1 t I0(x t) I0(y t) dt, uniform in x, y.
cplx kernel_KB_lommel(cplx x, cplx y);
// d/dy K_B(x, y) = int_0^1 t^2 I0(x t) I1(y t) dt
cplx kernel_KB_dy(cplx x, cplx y);

// f(w) = w^2 + log(1 + delta - w^2) and its derivative.
cplx phase_f(cplx w, double delta);
cplx phase_f_prime(cplx w, double delta);

}  // namespace rmedge
