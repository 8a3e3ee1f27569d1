#pragma once

#include <cstdint>
#include <functional>

#include "rmedge/types.hpp"

namespace rmedge {

// K_n(z, z) = (n/pi) Q(n, n|z|^2) with Q the regularized upper incomplete gamma.
double kernel_diag(std::int64_t n, cplx z);
// Same value by direct summation of the truncated exponential series.
double kernel_diag_sum(int n, cplx z);

constexpr int kOffdiagCap = 2000;
// (n/pi) exp(-n(|z|^2+|w|^2)/2) sum_{k<n} (n z conj(w))^k / k!
cplx kernel_offdiag(int n, cplx z, cplx w);

Estimate expected_count(std::int64_t n, const Box& box, double tol = 1e-10);
// f supported in `support`.
Estimate expected_count(std::int64_t n, const std::function<double(cplx)>& f, const Box& support,
                        double tol = 1e-10);
// Whole plane, by radial quadrature; equals n.
Estimate expected_count_plane(std::int64_t n, double tol = 1e-12);
// Angular sector [theta0, theta1); the half-plane Re z > 0 is (-pi/2, pi/2).
Estimate expected_count_sector(std::int64_t n, double theta0, double theta1);

enum class VarianceMethod { stratified_mc, tensor };

struct VarianceOptions {
    VarianceMethod method = VarianceMethod::stratified_mc;
    std::size_t mc_nodes = 1'000'000;
    std::uint64_t seed = 1;
    int tensor_order = 6;  // Gauss-Legendre nodes per panel
    Exec exec = Exec::parallel;
};

struct VarianceResult {
    double variance = 0;
    double error = 0;
    double diag_term = 0;   // int_B K(z,z)
    double pair_term = 0;   // int_B int_B |K(z,w)|^2
    double pair_error = 0;
};

constexpr int kVarianceCap = 500;
VarianceResult variance_count(int n, const Box& box, const VarianceOptions& opt = {});

double erf_sinh_reference(double s, double t);
double tail_count_bound(double t);

}  // namespace rmedge
