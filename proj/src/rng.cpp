#include "rmedge/rng.hpp"

#include <array>
#include <cmath>

#include "rmedge/parallel.hpp"

#include <omp.h>

namespace rmedge {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Engine make_engine(std::uint64_t seed, std::uint64_t index, Stream tag) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    std::uint64_t t = a ^ (index * 0xd1b54a32d192ed03ULL) ^ (static_cast<std::uint64_t>(tag) << 56);
    std::array<std::uint32_t, 8> words{};
    for (std::size_t i = 0; i < words.size(); i += 2) {
        std::uint64_t w = splitmix64(t);
        words[i] = static_cast<std::uint32_t>(w);
        words[i + 1] = static_cast<std::uint32_t>(w >> 32);
    }
    std::seed_seq seq(words.begin(), words.end());
    return Engine(seq);
}

double uniform01(Engine& g) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(g);
}

double std_normal(Engine& g) {
    return std::normal_distribution<double>(0.0, 1.0)(g);
}

cplx complex_normal(Engine& g) {
    std::normal_distribution<double> nd(0.0, 1.0);
    const double re = nd(g);
    const double im = nd(g);
    return {re * M_SQRT1_2, im * M_SQRT1_2};
}

int worker_count() { return omp_get_max_threads(); }

void set_worker_count(int workers) {
    if (workers > 0) omp_set_num_threads(workers);
}

namespace {
double tree_sum_range(const double* p, std::size_t n) {
    if (n <= 8) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) s += p[i];
        return s;
    }
    const std::size_t h = n / 2;
    return tree_sum_range(p, h) + tree_sum_range(p + h, n - h);
}
}  // namespace

double tree_sum(std::span<const double> xs) {
    return tree_sum_range(xs.data(), xs.size());
}

}  // namespace rmedge
