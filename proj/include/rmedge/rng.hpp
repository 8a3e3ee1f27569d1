#pragma once

#include <cstdint>
#include <random>

#include "rmedge/types.hpp"

namespace rmedge {

using Engine = std::mt19937_64;

// Purpose tags keep independent streams for the same (seed, index).
enum class Stream : std::uint64_t {
    matrix = 0,
    ginibre_partner = 1,
    edge = 2,
    quadrature = 3,
    moments = 4,
    misc = 5,
};

std::uint64_t splitmix64(std::uint64_t& state);

Engine make_engine(std::uint64_t seed, std::uint64_t index, Stream tag = Stream::matrix);

double uniform01(Engine& g);
double std_normal(Engine& g);
// Standard complex Gaussian: E|w|^2 = 1, E w^2 = 0.
cplx complex_normal(Engine& g);

}  // namespace rmedge
