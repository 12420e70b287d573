#pragma once

// Free resolvents R0(z) = (T(D) - z)^{-1} on the torus, their convolution
// kernels, and empirical L^p -> L^p' operator norms.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "nsa/lattice.hpp"
#include "nsa/symbols.hpp"

namespace nsa {

// Sorted, de-duplicated eigenvalues of T(xi_k) over the lattice.
std::vector<double> lattice_levels(const SymbolSpec& spec, const TorusGrid& grid);

// Gap between consecutive lattice levels around the point of sigma(H0)
// nearest to lambda.
double level_spacing(const std::vector<double>& levels, const EssentialSpectrum& sigma, double lambda);

class ResolventHandle {
public:
    // Throws ResolventError when z lies within 1e-12 max|T| of a lattice level.
    ResolventHandle(SymbolSpec spec, TorusGrid grid, cplx z);

    const SymbolSpec& spec() const noexcept { return spec_; }
    const TorusGrid& grid() const noexcept { return grid_; }
    cplx z() const noexcept { return z_; }
    const MultiplierTable& symbol() const noexcept { return symbol_; }
    // (T(xi_k) - z)^{-1} per mode.
    const MultiplierTable& table() const noexcept { return table_; }
    // min_k dist(z, eigenvalues of T(xi_k)).
    double lattice_distance() const noexcept { return lattice_distance_; }

private:
    SymbolSpec spec_;
    TorusGrid grid_;
    cplx z_;
    MultiplierTable symbol_;
    MultiplierTable table_;
    double lattice_distance_ = 0.0;
};

GridFunction resolvent_apply(const ResolventHandle& h, const GridFunction& f);

// (D + z)(-Delta + m^2 - z^2)^{-1} f for the Dirac kinds (m = 0 or 1):
// the resolvent assembled from the scalar Klein-Gordon resolvent.
MultiplierTable dirac_factorized_table(const SymbolSpec& spec, const TorusGrid& grid, cplx z);
GridFunction dirac_factorized_apply(const SymbolSpec& spec, const TorusGrid& grid, cplx z,
                                    const GridFunction& f);

struct KernelSample {
    std::vector<double> radii;
    std::vector<Matrix> values;  // n x n kernel R0(x - y; z)
};

// Full periodic kernel, laid out like multiplier_kernel().
Vector resolvent_kernel_full(const ResolventHandle& h);
// Kernel along the lattice diagonal x = m h (1, ..., 1), 0 < |x| <= L/2.
KernelSample resolvent_kernel(const ResolventHandle& h);

struct EnvelopeFit {
    double constant = 0.0;  // sup |R0(r; z)| r^{d-s}
    cplx z_at;
    double r_at = 0.0;
};

// Requires d/2 < s < d and |z| = 1 for every z.  For the fractional and
// relativistic kinds the singular part is the exact Riesz kernel, so the
// fit does not depend on how well the grid resolves r -> 0.
EnvelopeFit kernel_envelope_fit(const SymbolSpec& spec, const TorusGrid& grid, std::span<const cplx> z_set,
                                double radius);

// Matrix-free operator on grid functions; `adjoint` is the adjoint for the
// weighted L^2 inner product h^d sum f conj(g).
struct LinearOperator {
    TorusGrid grid;
    int components = 1;
    std::function<GridFunction(const GridFunction&)> apply;
    std::function<GridFunction(const GridFunction&)> adjoint;
};

LinearOperator resolvent_operator(const ResolventHandle& h);
LinearOperator multiplier_operator(const MultiplierTable& m);

// x with ||x||_p = 1 and <v, x> = ||v||_{p*} (weighted pairing).  p = 1 picks
// the first site of maximal modulus.
GridFunction dual_map(const GridFunction& v, double p);

struct NormEstimate {
    double estimate = 0.0;        // best lower bound found
    std::vector<double> trace;    // best-so-far after each iteration
    bool converged = false;
    int iterations = 0;
};

// Boyd's nonlinear power iteration for ||A||_{L^p -> L^q}, 1 <= p <= 2 <= q <= inf.
NormEstimate empirical_opnorm(const LinearOperator& op, double p, double q, int iters, std::uint64_t seed);

// ||g||_{L^a + L^b} (a < b) minimised over threshold splits g = g1 + g2,
// g1 carrying the large values; an upper estimate of the infimum.
double sum_space_norm(const GridFunction& g, double a, double b);
// ||f||_{L^a cap L^b} = max of the two norms.
double intersection_norm(const GridFunction& f, double a, double b);

}  // namespace nsa
