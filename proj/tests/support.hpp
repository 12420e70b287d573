#pragma once

#include <random>

#include "nsa/lattice.hpp"

namespace testing {

inline nsa::Vector random_vector(long size, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    nsa::Vector v(size);
    for (long i = 0; i < size; ++i)
        v[i] = nsa::cplx(normal(rng), normal(rng));
    return v;
}

inline nsa::GridFunction random_function(const nsa::TorusGrid& grid, int n, std::uint64_t seed)
{
    return nsa::GridFunction(grid, n, random_vector(grid.sites() * n, seed));
}

inline nsa::Matrix random_matrix(long rows, long cols, std::uint64_t seed)
{
    nsa::Vector v = random_vector(rows * cols, seed);
    return Eigen::Map<nsa::Matrix>(v.data(), rows, cols);
}

inline double rel_err(const nsa::Vector& a, const nsa::Vector& b)
{
    return (a - b).norm() / std::max(b.norm(), 1e-300);
}

}  // namespace testing
