#include "rmedge/lapack.hpp"

#include <lapacke.h>

#include <mutex>
#include <string>

extern "C" void openblas_set_num_threads(int);

namespace rmedge::lapack {

namespace {

lapack_complex_double* lp(cplx* p) { return reinterpret_cast<lapack_complex_double*>(p); }

void check(lapack_int info, const char* routine, int n) {
    if (info == 0) return;
    if (info < 0)
        throw NumericalError(std::string(routine) + ": illegal argument " + std::to_string(-info));
    throw NumericalError(std::string(routine) + ": no convergence (info=" + std::to_string(info) +
                         ", n=" + std::to_string(n) + ")");
}

}  // namespace

void single_threaded_blas() {
    static std::once_flag once;
    std::call_once(once, [] { openblas_set_num_threads(1); });
}

std::vector<cplx> eigenvalues(ComplexMatrix A) {
    single_threaded_blas();
    const lapack_int n = static_cast<lapack_int>(A.rows());
    std::vector<cplx> w(n);
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, lp(A.data()), n, lp(w.data()),
                                          nullptr, 1, nullptr, 1);
    check(info, "zgeev", n);
    return w;
}

std::vector<cplx> eigenvalues(ComplexMatrix A, ComplexMatrix& V) {
    single_threaded_blas();
    const lapack_int n = static_cast<lapack_int>(A.rows());
    std::vector<cplx> w(n);
    V.resize(n, n);
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, lp(A.data()), n, lp(w.data()),
                                          nullptr, 1, lp(V.data()), n);
    check(info, "zgeev", n);
    return w;
}

std::vector<cplx> hessenberg_eigenvalues(ComplexMatrix H) {
    single_threaded_blas();
    const lapack_int n = static_cast<lapack_int>(H.rows());
    std::vector<cplx> w(n);
    const lapack_int info = LAPACKE_zhseqr(LAPACK_COL_MAJOR, 'E', 'N', n, 1, n, lp(H.data()), n,
                                           lp(w.data()), nullptr, 1);
    check(info, "zhseqr", n);
    return w;
}

std::vector<double> singular_values(ComplexMatrix A) {
    single_threaded_blas();
    const lapack_int m = static_cast<lapack_int>(A.rows());
    const lapack_int n = static_cast<lapack_int>(A.cols());
    std::vector<double> s(std::min(m, n));
    const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, lp(A.data()), m, s.data(),
                                           nullptr, 1, nullptr, 1);
    check(info, "zgesdd", n);
    return s;
}

std::vector<double> hermitian_eigenvalues(ComplexMatrix A) {
    single_threaded_blas();
    const lapack_int n = static_cast<lapack_int>(A.rows());
    std::vector<double> w(n);
    const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'U', n, lp(A.data()), n, w.data());
    check(info, "zheevd", n);
    return w;
}

}  // namespace rmedge::lapack
