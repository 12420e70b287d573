#pragma once

// Kinetic-energy Fourier symbols T(xi), their critical values and the
// Clifford generators used by the Dirac kinds.
//
// Frequencies are unit frequencies (cycles per length unit): a plane wave
// is exp(2 pi i x.xi), so T(D) acts on it by multiplication with T(xi).

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nsa/types.hpp"

namespace nsa {

enum class SymbolKind {
    FractionalLaplacian,  // |xi|^s
    Relativistic,         // (1+|xi|^2)^{s/2} - 1
    DiracMassless,        // sum_j alpha_j xi_j
    DiracMassive,         // sum_j alpha_j xi_j + beta
    Radial,               // user-supplied scalar radial symbol
};

std::string to_string(SymbolKind kind);
SymbolKind symbol_kind_from_string(const std::string& name);

bool is_dirac(SymbolKind kind);

struct SymbolSpec {
    SymbolKind kind = SymbolKind::FractionalLaplacian;
    double s = 1.0;
    int d = 1;
    int n = 1;
    // Only used by SymbolKind::Radial; s is then a nominal order.
    std::function<double(double)> radial;

    // Throws InvalidArgument when the spec violates its invariants.
    void validate() const;

    // Builds a validated spec, filling n from (kind, d).
    static SymbolSpec make(SymbolKind kind, int d, double s = 1.0);
    static SymbolSpec make_radial(int d, double nominal_order,
                                  std::function<double(double)> radial);
};

// Spinor dimension for a kind in dimension d.
int spinor_dimension(SymbolKind kind, int d);

// T(xi) as an n x n Hermitian matrix (1 x 1 for scalar kinds).
Matrix eval_symbol(const SymbolSpec& spec, std::span<const double> xi);

// Scalar branch symbol: |xi|^s, (1+|xi|^2)^{s/2}-1, |xi| or (1+|xi|^2)^{1/2}.
// For the Dirac kinds this is the positive eigenvalue lambda_+(|xi|).
double scalar_symbol(const SymbolSpec& spec, double abs_xi);

// Eigenvalues of T(xi), sorted ascending (n values).
std::vector<double> symbol_eigenvalues(const SymbolSpec& spec, std::span<const double> xi);

struct CriticalSet {
    std::vector<double> values;
};

CriticalSet critical_values(const SymbolSpec& spec);

// Closed real intervals making up sigma(H0).
struct Interval {
    double lo;
    double hi;
};

struct EssentialSpectrum {
    std::vector<Interval> intervals;

    bool contains(double x) const;
    double distance(cplx z) const;
    // Closest point of the spectrum to z.
    double nearest(cplx z) const;
};

EssentialSpectrum essential_spectrum(const SymbolSpec& spec);

struct CliffordSet {
    std::vector<Matrix> alpha;  // alpha_1 .. alpha_d
    Matrix beta;
};

CliffordSet clifford_generators(int d);

}  // namespace nsa
