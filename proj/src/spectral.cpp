#include "rmedge/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "rmedge/lapack.hpp"

namespace rmedge {

namespace {

void require_finite(const ComplexMatrix& A) {
    if (A.rows() != A.cols() || A.rows() < 1) throw ConfigError("square matrix with n >= 1 required");
    if (!A.allFinite()) throw ConfigError("matrix has non-finite entries");
}

double trace_residual(const ComplexMatrix& A, const std::vector<cplx>& w) {
    cplx sum{};
    for (const cplx& x : w) sum += x;
    const double scale = std::max(A.norm(), 1e-300);
    return std::abs(sum - A.trace()) / scale;
}

}  // namespace

Spectrum eigvals(const ComplexMatrix& A, bool backward_error) {
    require_finite(A);
    Spectrum S;
    if (!backward_error) {
        S.values = lapack::eigenvalues(A);
        S.residual = trace_residual(A, S.values);
        return S;
    }
    ComplexMatrix V;
    S.values = lapack::eigenvalues(A, V);
    const double scale = std::max(A.norm(), 1e-300);
    double worst = 0;
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        Eigen::VectorXcd v = V.col(i);
        v /= v.norm();
        worst = std::max(worst, (A * v - S.values[i] * v).norm() / scale);
    }
    S.residual = worst;
    return S;
}

Spectrum eigvals_hessenberg(const ComplexMatrix& H) {
    require_finite(H);
    Spectrum S;
    S.values = lapack::hessenberg_eigenvalues(H);
    S.residual = trace_residual(H, S.values);
    return S;
}

SingularSpectrum shifted_singulars(const ComplexMatrix& X, cplx z) {
    require_finite(X);
    ComplexMatrix A = X;
    A.diagonal().array() -= z;
    SingularSpectrum S;
    S.z = z;
    S.values = lapack::singular_values(std::move(A));
    std::sort(S.values.begin(), S.values.end());
    return S;
}

ComplexMatrix hermitization(const ComplexMatrix& X, cplx z) {
    const Eigen::Index n = X.rows();
    ComplexMatrix A = X;
    A.diagonal().array() -= z;
    ComplexMatrix H = ComplexMatrix::Zero(2 * n, 2 * n);
    H.topRightCorner(n, n) = A;
    H.bottomLeftCorner(n, n) = A.adjoint();
    return H;
}

double im_trace_resolvent(const SingularSpectrum& S, double eta) {
    if (!(eta > 0)) throw ConfigError("eta must be positive");
    double sum = 0;
    for (double s : S.values) sum += eta / (s * s + eta * eta);
    return 2.0 * sum;
}

cplx avg_trace_G(const SingularSpectrum& S, double eta) {
    const double n = static_cast<double>(S.values.size());
    return {0.0, im_trace_resolvent(S, eta) / (2.0 * n)};
}

double spectral_radius(const Spectrum& S) {
    if (S.values.empty()) throw ConfigError("spectral_radius of an empty spectrum");
    double r = 0;
    for (const cplx& x : S.values) r = std::max(r, std::abs(x));
    return r;
}

}  // namespace rmedge
