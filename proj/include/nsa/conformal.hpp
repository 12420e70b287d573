#pragma once

// Conformal maps of the resolvent set rho(H0) onto the unit disk and the
// weighted eigenvalue sums built on them.

#include <array>
#include <span>
#include <vector>

#include "nsa/spectra.hpp"
#include "nsa/symbols.hpp"

namespace nsa {

// Square root with the cut on [0, inf), argument in (0, 2 pi); the image is
// the open upper half plane.
cplx slit_sqrt(cplx z);

// Disk automorphism nu(w) = (w + t)/(1 + conj(t) w) and its inverse.
cplx nu_map(cplx w, cplx z0_tilde);
cplx nu_inverse(cplx w, cplx z0_tilde);

enum class Chart { Upper, Lower };

class ConformalAtlas {
public:
    // chart only matters for the massless Dirac kind; z0 must lie in the
    // chart's domain.
    ConformalAtlas(SymbolKind kind, cplx z0, Chart chart = Chart::Upper);

    SymbolKind kind() const noexcept { return kind_; }
    Chart chart() const noexcept { return chart_; }
    cplx z0() const noexcept { return z0_; }
    cplx z0_tilde() const noexcept { return z0_tilde_; }

    // Unnormalized psi0 : rho(H0) -> D and its inverse.
    cplx psi0(cplx z) const;
    cplx psi0_inverse(cplx w) const;
    // psi = nu^{-1} o psi0, psi(z0) = 0.
    cplx psi(cplx z) const;
    cplx psi_inverse(cplx w) const;
    // psi0 extended to the spectrum (boundary values; approached from the
    // chart's side of the cut, i.e. from above for the slit kinds).
    cplx psi_boundary(double lambda) const;

    bool in_domain(cplx z) const;
    double dist_sigma(cplx z) const;

private:
    SymbolKind kind_;
    Chart chart_;
    cplx z0_;
    cplx z0_tilde_;
};

// psi'(z) by central differences with step 1e-6 |z| (one-sided, second
// order, pointing away from sigma(H0) when the spectrum is within reach).
cplx psi_derivative(const ConformalAtlas& atlas, cplx z);

// (1 - |psi(z)|) / (|psi'(z)| dist(z, sigma(H0))).
double koebe_ratio(const ConformalAtlas& atlas, cplx z);

// The three massive Dirac distortion quotients, each as LHS / RHS:
//   (1-|w|)       vs |1-z^2|^{-1/2}(1+|z|)^{-1} dist(z, sigma)
//   |w-w1||w-w2|  vs |1-z^2|^{1/2}(1+|z|)^{-1}
//   |w-w3||w-w4|  vs (1+|z|)^{-1}
// with w = psi(z) and w_{1..4} = nu^{-1}(1, -1, i, -i).
std::array<double, 3> massive_dirac_distortion(const ConformalAtlas& atlas, cplx z);

// Boundary weight for a Blaschke-type sum in the disk:
// (1-|w|) prod_i |w - w_c^i|^{(mu_c^i - 1 + eps)_+} prod_j |w - w_inf^j|^{(mu_inf - 1 + eps)_+}.
// Infinity has two boundary images for the massive Dirac kind.
struct WeightSpec {
    std::vector<cplx> critical_points;
    std::vector<double> critical_exponents;
    std::vector<cplx> infinity_points;
    double infinity_exponent = 0.0;
    double eps = 0.0;

    void validate() const;
};

// The images psi(Lambda_c) and psi(inf) of an atlas, exponents left to the caller.
WeightSpec weight_points(const ConformalAtlas& atlas);

double blaschke_sum(const ConformalAtlas& atlas, std::span<const cplx> zs, const WeightSpec& weight);

// z-space left-hand sides of the eigenvalue sum theorems.
enum class SumWeight {
    Distance,        // dist(z, sigma)
    Fractional,      // |z|^{-(1-eps)/2} dist
    MasslessDirac,   // dist (1+|z|)^{-alpha(d-1)/(d+1)-1-eps}
    MassiveDirac,    // dist |z^2-1|^{alpha/2-1+eps} (1+|z|)^{-alpha-alpha(d-1)/(d+1)+1-eps}
    Relativistic,    // dist |z|^{alpha/2-1+eps} (1+|z|)^{-2alpha(d-1)/(d+1)+1/2-alpha/2-eps}
};

struct SumWeightParams {
    int d = 1;
    double alpha = 2.0;
    double eps = 0.0;
};

double sum_weight(SumWeight kind, const SymbolSpec& spec, cplx z, const SumWeightParams& p);

// Sum of the weight over the points; every point must be labelled Discrete
// and lie off sigma(H0).
double weighted_blaschke_sum(std::span<const SpectralPoint> points, SumWeight kind, const SymbolSpec& spec,
                             const SumWeightParams& p);

}  // namespace nsa
