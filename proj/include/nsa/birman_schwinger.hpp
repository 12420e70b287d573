#pragma once

// Birman-Schwinger operators |V|^{1/2} R0(z) V^{1/2}, Schatten norms,
// regularized determinants and the determinant zero finder.

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "nsa/lattice.hpp"
#include "nsa/resolvent.hpp"

namespace nsa {

struct HalfPotentials {
    PotentialField abs_half;     // |V|^{1/2}
    PotentialField signed_half;  // V^{1/2}, with V^{1/2} |V|^{1/2} = V
};

// Scalar: |V|^{1/2} = sqrt|V|, V^{1/2} = V/sqrt|V|.  Matrix: polar
// decomposition V = U|V|, |V|^{1/2} = (V^*V)^{1/4}, V^{1/2} = U|V|^{1/2}.
HalfPotentials half_potentials(const PotentialField& v);

enum class BSOrder {
    AbsLeft,  // |V|^{1/2} R0(z) V^{1/2}
    AbsRight, // V^{1/2} R0(z) |V|^{1/2}
};

// The operator is stored compressed to the support of V; the rows and
// columns dropped are identically zero, so nonzero singular values and
// eigenvalues are those of the full N^d n square matrix.
class BSOperator {
public:
    BSOperator(Matrix matrix, std::vector<long> support, int components, long full_dimension, cplx z,
               BSOrder order);

    const Matrix& matrix() const noexcept { return matrix_; }
    const std::vector<long>& support() const noexcept { return support_; }
    int components() const noexcept { return components_; }
    long full_dimension() const noexcept { return full_dimension_; }
    cplx z() const noexcept { return z_; }
    BSOrder order() const noexcept { return order_; }

    // Nonzero-block singular values, nonincreasing; computed once.
    const RealVector& singular_values() const;
    // Eigenvalues of the compressed block; computed once.
    const Vector& eigenvalues() const;
    double operator_norm() const;

private:
    Matrix matrix_;
    std::vector<long> support_;
    int components_;
    long full_dimension_;
    cplx z_;
    BSOrder order_;

    struct Cache {
        std::once_flag sv_once, ev_once;
        RealVector sv;
        Vector ev;
    };
    std::shared_ptr<Cache> cache_;
};

BSOperator assemble_bs(const SymbolSpec& spec, const TorusGrid& grid, const PotentialField& v, cplx z,
                       BSOrder order = BSOrder::AbsLeft);
// Same, with a resolvent already built for (spec, grid, z).
BSOperator assemble_bs(const ResolventHandle& r, const PotentialField& v, BSOrder order = BSOrder::AbsLeft);

struct SchattenReport {
    double alpha = 1.0;
    double norm = 0.0;
    int retained = 0;
};

// alpha = kInf gives the operator norm.  Singular values below 1e-13 sigma_1
// are dropped.
SchattenReport schatten_norm(const BSOperator& m, double alpha);
SchattenReport schatten_norm(const RealVector& singular_values, double alpha);

struct DetValue {
    int order = 1;
    double log_abs = 0.0;
    double arg = 0.0;  // principal value of the phase
    cplx value;        // exp(log_abs + i arg), may overflow for extreme inputs
};

// det_n(I + M) = prod_j (1 + mu_j) exp(sum_{k<n} (-1)^k mu_j^k / k).
DetValue regularized_det(const Vector& eigenvalues, int order);
DetValue regularized_det(const BSOperator& m, int order);

// Gamma_n in log|det_n(I+A)| <= Gamma_n ||A||_{S^n}^n.
double det_bound_constant(int order);

// min_j |mu_j(M) + 1|; 1 when M vanishes.
double bs_principle_check(const BSOperator& m);
double bs_principle_check(const SymbolSpec& spec, const TorusGrid& grid, const PotentialField& v, cplx z);

// Which half of the potential assumption applies to (spec, q).
struct RegimeCheck {
    bool ok = false;
    char regime = 'a';  // 'a': s >= 2d/(d+1), single L^q; 'b': L^{d/s} cap L^{(d+1)/2}
    std::string message;
};
RegimeCheck check_regime(const SymbolSpec& spec, double q);

// Schatten exponent of the resolvent bound: q(d-1)/(d-q) in regime a
// (2 for d = 1), 3 in regime b with d = 2 and d/s + 1/2 for d >= 3.
double schatten_exponent(const SymbolSpec& spec, double q);
int det_order(double alpha);

// ---------------------------------------------------------------------------
// Zeros of a holomorphic determinant inside a rectangle.

struct Rectangle {
    double re_lo, re_hi, im_lo, im_hi;

    bool contains(cplx z) const
    {
        return z.real() >= re_lo && z.real() <= re_hi && z.imag() >= im_lo && z.imag() <= im_hi;
    }
};

struct ContourOptions {
    int edge_samples = 16;       // initial samples per edge
    int max_refine = 12;         // halvings of an edge segment
    double max_step_arg = kPi / 4;
    double box_tol = 1e-5;       // stop subdividing below this size (relative)
    int max_depth = 40;
    int secant_iters = 60;
};

struct ContourRoot {
    cplx z;
    int multiplicity = 1;
    double log_abs = 0.0;  // log|h| at the polished point
};

using DetFunction = std::function<DetValue(cplx)>;

// Winding number of h around the rectangle boundary.
int winding_number(const DetFunction& h, const Rectangle& box, const ContourOptions& opt = {});

std::vector<ContourRoot> find_det_zeros(const DetFunction& h, const Rectangle& box,
                                        const ContourOptions& opt = {});

// z -> det_order(I + BS(z)) for a fixed potential.
DetFunction make_det_function(const SymbolSpec& spec, const TorusGrid& grid, const PotentialField& v, int order,
                              BSOrder variant = BSOrder::AbsLeft);

}  // namespace nsa
