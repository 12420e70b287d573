#include "nsa/dense.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include <lapacke.h>

#include "nsa/error.hpp"

namespace nsa::dense {

namespace {

lapack_complex_double* as_lapack(cplx* p)
{
    return reinterpret_cast<lapack_complex_double*>(p);
}

void require_square(const Matrix& a)
{
    if (a.rows() != a.cols())
        throw InvalidArgument("matrix must be square");
    if (!a.allFinite())
        throw InvalidArgument("matrix has non-finite entries");
}

}  // namespace

std::vector<Eigen::Index> lexicographic_order(const Vector& values)
{
    std::vector<Eigen::Index> order(values.size());
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        if (values[i].real() != values[j].real())
            return values[i].real() < values[j].real();
        return values[i].imag() < values[j].imag();
    });
    return order;
}

Vector eigenvalues(Matrix a)
{
    require_square(a);
    const lapack_int n = static_cast<lapack_int>(a.rows());
    if (n == 0)
        return {};
    Vector w(n);
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, as_lapack(a.data()), n,
                                          as_lapack(w.data()), nullptr, 1, nullptr, 1);
    if (info != 0)
        throw SolverError("zgeev failed with info = " + std::to_string(info) + " (matrix norm "
                          + std::to_string(a.norm()) + ")");
    const auto order = lexicographic_order(w);
    Vector sorted(n);
    for (lapack_int i = 0; i < n; ++i)
        sorted[i] = w[order[i]];
    return sorted;
}

EigenDecomposition eigen_decompose(Matrix a, bool with_condition)
{
    require_square(a);
    const lapack_int n = static_cast<lapack_int>(a.rows());
    EigenDecomposition out;
    if (n == 0)
        return out;
    Vector w(n);
    Matrix vr(n, n);
    Matrix vl = with_condition ? Matrix(n, n) : Matrix(1, 1);
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, with_condition ? 'V' : 'N', 'V', n,
                                          as_lapack(a.data()), n, as_lapack(w.data()), as_lapack(vl.data()),
                                          with_condition ? n : 1, as_lapack(vr.data()), n);
    if (info != 0)
        throw SolverError("zgeev failed with info = " + std::to_string(info));
    const auto order = lexicographic_order(w);
    out.values.resize(n);
    out.right.resize(n, n);
    if (with_condition)
        out.condition.resize(n);
    for (lapack_int i = 0; i < n; ++i) {
        const auto j = order[i];
        out.values[i] = w[j];
        out.right.col(i) = vr.col(j);
        if (with_condition) {
            const double overlap = std::abs(vl.col(j).dot(vr.col(j)));
            out.condition[i] = overlap > 0.0 ? 1.0 / overlap : kInf;
        }
    }
    return out;
}

RealVector singular_values(Matrix a)
{
    if (!a.allFinite())
        throw InvalidArgument("matrix has non-finite entries");
    const lapack_int m = static_cast<lapack_int>(a.rows());
    const lapack_int n = static_cast<lapack_int>(a.cols());
    const lapack_int k = std::min(m, n);
    if (k == 0)
        return {};
    RealVector s(k);
    const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, as_lapack(a.data()), m, s.data(),
                                           nullptr, 1, nullptr, 1);
    if (info != 0)
        throw SolverError("zgesdd failed with info = " + std::to_string(info));
    return s;
}

}  // namespace nsa::dense
