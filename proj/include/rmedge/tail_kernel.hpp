#pragma once

#include <cstdint>
#include <vector>

#include "rmedge/types.hpp"

namespace rmedge {

struct TailParams {
    int n = 0;
    double delta = 0;  // |z|^2 - 1
    double n_delta2() const { return n * delta * delta; }
    double z() const;  // the real shift sqrt(1 + delta)
};

// Truncation of the Step-1 rays zeta = sqrt(delta) + t(1 +- i) and of w = i s.
// Zero lengths mean "march until the log-integrand drops `drop` below its peak".
struct ContourSpec {
    double t_max = 0;
    double s_max = 0;
    int nodes_per_panel = 16;
    double drop = 50.0;
};

enum class KernelRoute { automatic, contour, residue };

struct KernelValue {
    double value = 0;
    double imag_residue = 0;  // contour route only
    double error = 0;         // disagreement between the two refinement runs
    KernelRoute route = KernelRoute::automatic;
    int bits = 0;             // residue route only
    double t_max = 0, s_max = 0;
};

void validate(const TailParams& p);

// Diagonal kernel K_n(u, u) of Y^z = (X - z)^*(X - z) for complex Ginibre X.
// contour: double-precision ray quadrature, convergent only for u < delta.
// residue: both contours closed on their poles; exact t-integral in MPFR with
//          precision raised until two runs agree.
KernelValue kernel_Y_diag_detail(const TailParams& p, double u, const ContourSpec& c = {},
                                 KernelRoute route = KernelRoute::automatic);
double kernel_Y_diag(const TailParams& p, double u, const ContourSpec& c = {});

// int_{u0}^{u1} K_n(u, u) du by Gauss-Legendre on panels graded cubically toward u0.
Estimate kernel_Y_integral(const TailParams& p, double u0, double u1, int panels = 1,
                           Exec exec = Exec::parallel);
// Upper end of the Y^z spectrum used for normalization integrals.
double kernel_Y_support_end(const TailParams& p);

// y^2 (n delta^2)^{4/3} e^{-n delta^2 / 2}
double tail_probability_bound(const TailParams& p, double y);
// True when y <= C / (n delta^2), the stated validity regime.
bool tail_bound_regime(const TailParams& p, double y, double C = 1.0);

struct WilsonInterval {
    double lo = 0, hi = 0;
};
WilsonInterval wilson_interval(std::size_t hits, std::size_t trials, double zscore = 1.959963984540054);

struct TailRow {
    double y = 0;
    std::size_t hits = 0;
    double mc_p = 0;
    WilsonInterval ci;
    double bound = 0;
    double kernel_integral = 0;  // int_0^{(y delta^{3/2})^2} K_n(u, u) du
    bool in_regime = false;
};

struct TailReport {
    TailParams params;
    std::size_t samples = 0;
    std::vector<double> lambda1;  // smallest singular value of X - z per sample
    std::vector<TailRow> rows;
};

// Smallest singular value of X - sqrt(1+delta) for Ginibre X, one per sample index.
std::vector<double> smallest_singular_samples(const TailParams& p, std::size_t samples,
                                              std::uint64_t seed, Exec exec = Exec::parallel);

TailReport tail_mc(const TailParams& p, const std::vector<double>& y_grid, std::size_t samples,
                   std::uint64_t seed, Exec exec = Exec::parallel, bool with_kernel = true);

}  // namespace rmedge
