#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rmedge/ensembles.hpp"
#include "rmedge/rng.hpp"
#include "rmedge/spectral.hpp"
#include "rmedge/types.hpp"

namespace rmedge {

// (log n - 5 log log n - log(2 pi^4)) / 2
double gamma_n(double n);

struct EdgeSample {
    double max_re = 0;                 // max_i Re(e^{i theta} sigma_i)
    cplx argmax;                       // the rotated eigenvalue attaining it
    double rho = 0;                    // spectral radius
    std::optional<double> gumbel_g;    // sqrt(4 n g)(max_re - 1 - sqrt(g / 4n)) when g > 0
    bool fallback = false;             // annulus sampler fell back to a full matrix
};

EdgeSample rightmost(const Spectrum& spec, double theta = 0.0, int n = 0);
EdgeSample rightmost(const std::vector<cplx>& points, double theta = 0.0, int n = 0);

enum class EdgeMethod {
    automatic,    // Ginibre: annulus_dpp; otherwise dense
    dense,        // full iid matrix + zgeev
    hessenberg,   // Ginibre only: Hessenberg model + zhseqr
    annulus_dpp,  // Ginibre only: exact sample of the eigenvalues with |z| > r0
};

struct EdgeOptions {
    EdgeMethod method = EdgeMethod::automatic;
    double theta = 0.0;
    double r0 = -1;  // annulus radius; < 0 means default_annulus_radius(n)
    Exec exec = Exec::parallel;
};

std::vector<EdgeSample> mc_edge_ensemble(Dist d, int n, std::size_t samples, std::uint64_t seed,
                                         const EdgeOptions& opt = {});

// Eigenvalues of one sample for the given method (annulus: only |z| > r0).
std::vector<cplx> edge_sample_points(Dist d, int n, std::uint64_t seed, std::uint64_t index,
                                     EdgeMethod method, double r0 = -1);

// Complex Ginibre eigenvalues restricted to |z| > r0, sampled exactly. The restriction
// of the rotation-invariant kernel has eigenfunctions z^k on the annulus with
// eigenvalues Q(k+1, n r0^2); indices are kept independently with those probabilities
// and the resulting projection process is drawn by the sequential (HKPV) algorithm.
std::vector<cplx> sample_ginibre_annulus(int n, double r0, Engine& g);
double default_annulus_radius(int n);

double gumbel_cdf(double t);

struct GumbelFit {
    double location = 0;
    double scale = 0;
    double ks_distance = 0;  // against the fitted law; no p-value (parameters fitted)
};

GumbelFit gumbel_fit(const std::vector<double>& values);

using BoxSpec = Box;

std::size_t count_in_box(const Spectrum& spec, const Box& box);
std::size_t count_in_box(const std::vector<cplx>& points, const Box& box);

struct OmegaBoxes {
    Box omega0, omega1, omega2;
};

// Needs gamma_n(n) > 0; throws ConfigError("gamma_nonpositive") otherwise.
OmegaBoxes omega_boxes(int n, double Cn, double tau);

}  // namespace rmedge
