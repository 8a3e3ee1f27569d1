#pragma once

#include <Eigen/Dense>

#include "rmedge/spectral.hpp"
#include "rmedge/types.hpp"

namespace rmedge {

struct DysonPoint {
    cplx z;
    double eta = 0;
    double v = 0;      // Im m^z(i eta)
    double u = 0;      // v / (eta + v)
    cplx mfrak;        // -z u
    double delta = 0;  // |z|^2 - 1
};

struct LocalLawProbe {
    cplx z;
    double eta = 0;
    double psi = 0;       // 1 / (n eta)
    double residual = 0;  // |<G> - i v|
    double ratio() const { return residual / psi; }
};

// Positive root of v^3 + 2 eta v^2 + (eta^2 + delta) v - eta = 0.
// eta = 0 returns the limit root; rejected when |z| = 1.
DysonPoint solve_m(cplx z, double eta);

double cubic_residual(const DysonPoint& p);
// Relative mismatch of -1/m = w + m - |z|^2/(w + m) at w = i eta, m = i v.
double self_consistency_residual(const DysonPoint& p);

Eigen::Matrix2cd m_matrix(const DysonPoint& p);

// Order of Im m^z: eta^{1/3} + |1-|z|^2|^{1/2} inside the disk,
// eta / (|1-|z|^2| + eta^{2/3}) outside.
double scaling_regime(cplx z, double eta);

LocalLawProbe local_law_residual(const SingularSpectrum& S, double eta);
LocalLawProbe local_law_residual(const ComplexMatrix& X, cplx z, double eta);

}  // namespace rmedge
