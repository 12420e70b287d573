#pragma once

// Thin LAPACK wrappers for the dense non-Hermitian problems.

#include <vector>

#include "nsa/types.hpp"

namespace nsa::dense {

// Eigenvalues of a general complex matrix, sorted by real then imaginary part.
Vector eigenvalues(Matrix a);

struct EigenDecomposition {
    Vector values;           // sorted as in eigenvalues()
    Matrix right;            // unit-norm right eigenvectors, column j <-> values[j]
    RealVector condition;    // 1/|y_j^* x_j|, or empty when not requested
};

EigenDecomposition eigen_decompose(Matrix a, bool with_condition);

// Singular values, nonincreasing.
RealVector singular_values(Matrix a);

// Permutation sorting complex values by real part, ties by imaginary part.
std::vector<Eigen::Index> lexicographic_order(const Vector& values);

}  // namespace nsa::dense
