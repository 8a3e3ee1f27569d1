#pragma once

#include <cstddef>
#include <exception>
#include <span>
#include <vector>

#include "rmedge/types.hpp"

namespace rmedge {

int worker_count();
void set_worker_count(int workers);

// Runs body(i) for i in [0, count). Results must be written to per-index
// slots so that the output does not depend on the schedule.
template <class Body>
void for_each_index(std::size_t count, Exec exec, Body&& body) {
    if (exec == Exec::serial) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const long long m = static_cast<long long>(count);
    // Exceptions cannot leave an OpenMP region; keep the one from the lowest index.
    std::exception_ptr err;
    long long err_index = m;
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < m; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(rmedge_for_each_error)
            if (i < err_index) {
                err_index = i;
                err = std::current_exception();
            }
        }
    }
    if (err) std::rethrow_exception(err);
}

// Pairwise summation; fixed tree shape so the result is bit-stable.
double tree_sum(std::span<const double> xs);

}  // namespace rmedge
