#pragma once

#include <optional>

#include "rmedge/spectral.hpp"
#include "rmedge/types.hpp"

namespace rmedge {

enum class CutoffKind { lower, upper };

// Smooth 1-D plateau profile: 1 for |t - c| <= a, 0 for |t - c| >= a + w,
// quintic smoothstep S(s) = 6s^5 - 15s^4 + 10s^3 across each band of width w.
struct Profile {
    double c = 0, a = 0, w = 0;
    double value(double t) const;
    double d1(double t) const;
    double d2(double t) const;
    double integral() const { return 2 * a + w; }
    double d2_l1() const { return 7.5 / w; }  // 2 * int_0^1 |S''| / w
    double lo() const { return c - a - w; }
    double hi() const { return c + a + w; }
};

struct CutoffFunction {
    CutoffKind kind = CutoffKind::lower;
    double L = 0, l = 0, h = 0;
    int n = 0;
    double Cn = 0, tau = 0;
    bool geometry_override = false;
    Profile gx, hy;

    double value(cplx z) const { return gx.value(z.real()) * hy.value(z.imag()); }
    cplx gradient(cplx z) const;  // (df/dx, df/dy) packed as a complex number
    double laplacian(cplx z) const;
    Box support() const { return {gx.lo(), gx.hi(), hy.lo(), hy.hi()}; }
    // Triangle-inequality bound ||g''||_1 int h + int g ||h''||_1.
    double laplacian_l1_bound() const;
};

struct CutoffOverride {
    double L = 0, l = 0, h = 0;
};

// lower: plateau |x-L| <= 4l/5, |y| <= 4h/5, support |x-L| <= l, |y| <= h.
// upper: plateau is the box itself, support enlarged by l/5 and h/5.
// Without override the geometry comes from gamma_n, C_n, tau and needs gamma_n > 0.
CutoffFunction build_cutoff(CutoffKind kind, int n, double Cn, double tau,
                            std::optional<CutoffOverride> geometry = std::nullopt);

double laplacian(const CutoffFunction& f, cplx z);

struct QuadratureGrid {
    int level = 0;             // each refinement halves every panel
    int nodes_per_panel = 8;   // >= 8 nodes per transition band at level 0
    std::optional<Box> bounds; // defaults to supp f
    int refine_depth = -1;     // local splits near eigenvalues; < 0 means 2 + 2 level
};

double eta_integral_exact(const SingularSpectrum& S, double eta_a, double eta_b);
double logdet_term(const SingularSpectrum& S, double T);

struct GirkoSplit {
    double eta0 = 0, T = 0;
    double I_small = 0, I_large = 0, logdet_term = 0;
    double direct = 0;  // (1/2pi) int Delta f sum_i ln s_i on the same grid
    std::size_t nodes = 0;
    std::size_t refined_panels = 0;
    double total() const { return I_small + I_large + logdet_term; }
};

double default_eta0(int n, double tau);

GirkoSplit girko_rhs(const ComplexMatrix& X, const CutoffFunction& f, double eta0, double T,
                     const QuadratureGrid& grid, Exec exec = Exec::parallel);

double girko_lhs(const Spectrum& spec, const CutoffFunction& f);

// int |Delta f| d^2z by the same panel-aligned tensor rule.
double laplacian_l1_norm(const CutoffFunction& f, int level = 2);
double laplacian_integral(const CutoffFunction& f, int level = 2);

}  // namespace rmedge
