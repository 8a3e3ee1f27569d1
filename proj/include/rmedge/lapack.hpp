#pragma once

#include <vector>

#include "rmedge/types.hpp"

namespace rmedge::lapack {

// Keep OpenBLAS single-threaded; parallelism lives in the Monte Carlo loops.
void single_threaded_blas();

std::vector<cplx> eigenvalues(ComplexMatrix A);
// Eigenvalues plus right eigenvectors (columns of V).
std::vector<cplx> eigenvalues(ComplexMatrix A, ComplexMatrix& V);
std::vector<cplx> hessenberg_eigenvalues(ComplexMatrix H);
// Descending, as returned by LAPACK.
std::vector<double> singular_values(ComplexMatrix A);
// Ascending.
std::vector<double> hermitian_eigenvalues(ComplexMatrix A);

}  // namespace rmedge::lapack
