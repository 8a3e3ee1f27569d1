#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rmedge/rng.hpp"
#include "rmedge/types.hpp"

namespace rmedge {

enum class Dist {
    ginibre,                // standard complex Gaussian
    bernoulli_phase,        // uniform on {1, -1, i, -i}
    uniform_circle,         // uniform on the unit circle
    two_point_complex,      // (+-1 +- i)/sqrt(2), independent signs
};

Dist parse_dist(std::string_view name);
std::string to_string(Dist d);
std::vector<Dist> all_dists();

struct EntryMoments {
    cplx mean;
    double abs2 = 0;
    cplx pseudo;  // E chi^2
    double abs4 = 0;
};

EntryMoments analytic_moments(Dist d);

cplx draw_entry(Dist d, Engine& g);

// Entries are chi / sqrt(n); the stream depends only on (seed, index).
ComplexMatrix sample_matrix(Dist d, int n, std::uint64_t seed, std::uint64_t index);

// Upper Hessenberg matrix unitarily equivalent in law to a Ginibre sample
// (Householder reduction of an iid Gaussian matrix). Same scaling as
// sample_matrix.
ComplexMatrix sample_ginibre_hessenberg(int n, std::uint64_t seed, std::uint64_t index);

struct MomentEstimate {
    std::string name;
    cplx estimate;
    double std_error = 0;
    cplx expected;
    bool pass = false;
};

struct MomentReport {
    Dist dist{};
    std::size_t samples = 0;
    std::vector<MomentEstimate> rows;
    bool pass = false;
};

MomentReport moments_selfcheck(Dist d, std::size_t m, std::uint64_t seed);

}  // namespace rmedge
