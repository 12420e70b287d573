#include "nsa/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "nsa/error.hpp"
#include "nsa/resolvent.hpp"

namespace nsa {

Matrix assemble_hamiltonian(const SymbolSpec& spec, const TorusGrid& grid, const PotentialField& v)
{
    if (!(v.grid() == grid))
        throw GridMismatch("potential lives on a different grid");
    if (v.components() != spec.n)
        throw GridMismatch("potential components do not match the symbol");
    const int n = spec.n;
    grid.require_components(n);
    Matrix h = dense_multiplier(symbol_table(spec, grid));
    for (long x = 0; x < grid.sites(); ++x) {
        if (n == 1)
            h(x, x) += v.values()[x];
        else
            h.block(x * n, x * n, n, n) += v.at(x);
    }
    return h;
}

GridFunction apply_hamiltonian(const SymbolSpec& spec, const TorusGrid& grid, const PotentialField& v,
                               const GridFunction& f)
{
    GridFunction out = apply_multiplier(symbol_table(spec, grid), f);
    const int n = spec.n;
    for (long x = 0; x < grid.sites(); ++x)
        out.values.segment(x * n, n) += v.at(x) * f.values.segment(x * n, n);
    return out;
}

Vector eigensolve(const Matrix& h)
{
    return dense::eigenvalues(h);
}

dense::EigenDecomposition eigensolve_with_vectors(const Matrix& h, bool with_condition)
{
    return dense::eigen_decompose(h, with_condition);
}

double dist_to_spectrum(const SymbolSpec& spec, cplx z)
{
    return essential_spectrum(spec).distance(z);
}

std::string to_string(SpectralLabel label)
{
    switch (label) {
    case SpectralLabel::Discrete: return "discrete";
    case SpectralLabel::ContinuumArtifact: return "continuum-artifact";
    case SpectralLabel::Undecided: return "undecided";
    }
    return "undecided";
}

double default_eta(const SymbolSpec& spec, const TorusGrid& grid, cplx z)
{
    return 5.0 * level_spacing(lattice_levels(spec, grid), essential_spectrum(spec), z.real());
}

std::vector<SpectralPoint> classify(const SymbolSpec& spec, const TorusGrid& grid, const Vector& eigs_n,
                                    const TorusGrid& fine, const Vector& eigs_2n, double eta,
                                    const RealVector* conditions)
{
    if (!(fine == grid.refined(2)))
        throw GridMismatch("classification needs the 2N grid with the same side length");
    if (conditions && conditions->size() != eigs_n.size())
        throw InvalidArgument("one condition number per eigenvalue expected");
    const EssentialSpectrum sigma = essential_spectrum(spec);
    const std::vector<double> levels = lattice_levels(spec, grid);
    std::vector<SpectralPoint> out;
    out.reserve(eigs_n.size());
    for (Eigen::Index i = 0; i < eigs_n.size(); ++i) {
        SpectralPoint p;
        p.z = eigs_n[i];
        p.dist_sigma = sigma.distance(p.z);
        p.eta = eta > 0.0 ? eta : 5.0 * level_spacing(levels, sigma, p.z.real());
        double nearest = kInf;
        for (const cplx w : eigs_2n)
            nearest = std::min(nearest, std::abs(w - p.z));
        p.drift = nearest / std::max(std::abs(p.z), 1e-300);
        if (conditions)
            p.condition = (*conditions)[i];
        if (p.dist_sigma <= p.eta)
            p.label = SpectralLabel::ContinuumArtifact;
        else if (p.drift < 0.1)
            p.label = SpectralLabel::Discrete;
        else
            p.label = SpectralLabel::Undecided;
        out.push_back(p);
    }
    return out;
}

std::vector<SpectralPoint> SpectrumRun::discrete() const
{
    std::vector<SpectralPoint> out;
    std::copy_if(points.begin(), points.end(), std::back_inserter(out),
                 [](const SpectralPoint& p) { return p.label == SpectralLabel::Discrete; });
    return out;
}

SpectrumRun compute_spectrum(const SymbolSpec& spec, const TorusGrid& grid, const PotentialFactory& potential,
                             double eta)
{
    const TorusGrid fine = grid.refined(2);
    auto coarse = eigensolve_with_vectors(assemble_hamiltonian(spec, grid, potential(grid)), true);
    const Vector fine_eigs = eigensolve(assemble_hamiltonian(spec, fine, potential(fine)));
    SpectrumRun run{grid, coarse.values, coarse.condition, {}};
    run.points = classify(spec, grid, coarse.values, fine, fine_eigs, eta, &coarse.condition);
    return run;
}

void write_spectrum_csv(std::ostream& out, const std::vector<SpectralPoint>& points)
{
    out << "re,im,dist_sigma,drift,label,cond\n";
    out << std::setprecision(17);
    for (const auto& p : points) {
        out << p.z.real() << ',' << p.z.imag() << ',' << p.dist_sigma << ',' << p.drift << ','
            << to_string(p.label) << ',' << p.condition << '\n';
    }
}

}  // namespace nsa
