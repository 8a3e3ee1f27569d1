#pragma once

#include <vector>

#include "rmedge/types.hpp"

namespace rmedge {

struct Spectrum {
    std::vector<cplx> values;
    // Trace-based estimate by default; max_i ||A v_i - s_i v_i|| / ||A||_F
    // when computed with eigenvectors.
    double residual = 0;
};

struct SingularSpectrum {
    cplx z;
    std::vector<double> values;  // ascending
};

Spectrum eigvals(const ComplexMatrix& A, bool backward_error = false);
// For upper Hessenberg input (see sample_ginibre_hessenberg).
Spectrum eigvals_hessenberg(const ComplexMatrix& H);

SingularSpectrum shifted_singulars(const ComplexMatrix& X, cplx z);

// 2n x 2n block matrix [[0, X - z], [(X - z)^*, 0]].
ComplexMatrix hermitization(const ComplexMatrix& X, cplx z);

// Im Tr G^z(i eta) = 2 sum_i eta / (s_i^2 + eta^2)
double im_trace_resolvent(const SingularSpectrum& S, double eta);
// <G^z(i eta)> = (i/n) sum_i eta / (s_i^2 + eta^2)
cplx avg_trace_G(const SingularSpectrum& S, double eta);

double spectral_radius(const Spectrum& S);

}  // namespace rmedge
